#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "carterlab/assemble.hpp"
#include "carterlab/eigensolve.hpp"
#include "carterlab/pencil.hpp"
#include "carterlab/threshold.hpp"
#include "frozen_values.hpp"

using namespace carterlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const FamilyParams kerr_ref = FamilyParams::kerr(1.0, 0.5);
const Rect slab_ref{3.0, 5.0, -0.5, 0.5};

Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (std::size_t k = 0; k < n; ++k) v[static_cast<int>(k)] = g(rng);
  return v;
}

}  // namespace

TEST_CASE("flux-form stiffness annihilates constants exactly") {
  const auto op = build_slab_operator(kerr_ref, slab_ref, 20, 16, 0);
  std::vector<double> ones(op.size(), 1.0), out(op.size());
  op.apply_H(ones.data(), out.data());
  for (double v : out) REQUIRE(v == 0.0);
  REQUIRE(op.quad_form(ones.data()) == 0.0);
}

TEST_CASE("assembled matrix agrees with the flux application") {
  const auto op = build_slab_operator(kerr_ref, slab_ref, 14, 11, 3);
  REQUIRE(op.H.rows() == static_cast<int>(op.size()));
  // symmetry is structural
  const Eigen::SparseMatrix<double> Ht = op.H.transpose();
  REQUIRE((Eigen::MatrixXd(op.H) - Eigen::MatrixXd(Ht)).norm() == 0.0);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd u = random_vector(op.size(), 100 + trial);
    std::vector<double> flux(op.size());
    op.apply_H(u.data(), flux.data());
    const Eigen::VectorXd mat = op.H * u;
    for (std::size_t k = 0; k < op.size(); ++k)
      REQUIRE_THAT(flux[k], WithinAbs(mat[static_cast<int>(k)], 1e-11 * (1.0 + std::abs(mat[static_cast<int>(k)]))));
    const double q = op.quad_form(u.data());
    REQUIRE(q >= 0.0);
    REQUIRE_THAT(q, WithinRel(u.dot(mat), 1e-10));
  }
}

TEST_CASE("operators refuse rectangles that are not strict slabs") {
  REQUIRE_THROWS_AS(build_slab_operator(kerr_ref, {1.9, 1.95, -0.05, 0.05}, 8, 8, 0),
                    NotStrictSlab);
}

TEST_CASE("flat rectangle recovers the Neumann square spectrum") {
  // [0, pi]^2 with unit coefficients; exact spectrum p^2 + q^2
  const Rect sq{0.0, M_PI, 0.0, M_PI};
  std::array<std::vector<double>, 3> lam;
  const int levels[3] = {16, 32, 64};
  for (int l = 0; l < 3; ++l) {
    const auto op = build_slab_operator({}, sq, levels[l], levels[l], 0, true);
    lam[l] = lowest_modes(op, 8).lambda;
  }
  REQUIRE(std::abs(lam[2][0]) < 1e-9);
  const auto rich = [&](int j) { return richardson2(lam[0][j], lam[1][j], lam[2][j]); };
  REQUIRE_THAT(rich(1), WithinAbs(1.0, 1e-6));
  REQUIRE_THAT(rich(2), WithinAbs(1.0, 1e-6));
  REQUIRE_THAT(rich(3), WithinAbs(2.0, 2e-6));
  REQUIRE_THAT(rich(4), WithinAbs(4.0, 2e-5));
  REQUIRE_THAT(rich(5), WithinAbs(4.0, 2e-5));
}

TEST_CASE("reference slab ground tone matches the spectral oracle") {
  double l1[3], l2[3];
  const int levels[3] = {16, 32, 64};
  for (int l = 0; l < 3; ++l) {
    const auto op = build_slab_operator(kerr_ref, slab_ref, levels[l], levels[l], 0);
    const auto spec = lowest_modes(op, 4);
    REQUIRE(std::abs(spec.lambda[0]) < 1e-9);
    l1[l] = spec.lambda[1];
    l2[l] = spec.lambda[2];
    REQUIRE(spec.max_residual < 1e-7);
  }
  REQUIRE_THAT(richardson2(l1[0], l1[1], l1[2]), WithinAbs(frozen::slab_lambda1, 1e-6));
  REQUIRE_THAT(richardson2(l2[0], l2[1], l2[2]), WithinAbs(frozen::slab_lambda2, 1e-5));
}

TEST_CASE("dense and Krylov paths agree") {
  const auto op = build_slab_operator(kerr_ref, slab_ref, 24, 24, 0);
  const auto dense = lowest_modes(op, 5, 1e-9, 0, 100000);
  const auto krylov = lowest_modes(op, 5, 1e-9, 0, 10);
  REQUIRE(dense.method == "dense");
  REQUIRE(krylov.method == "lanczos");
  for (int j = 0; j < 5; ++j)
    REQUIRE_THAT(krylov.lambda[j], WithinAbs(dense.lambda[j], 1e-8 * (1.0 + dense.lambda[j])));
}

TEST_CASE("mode basis is mass-orthonormal and deterministic") {
  const auto op = build_slab_operator(kerr_ref, slab_ref, 20, 20, 0);
  const auto s1 = lowest_modes(op, 5);
  const auto s2 = lowest_modes(op, 5);
  REQUIRE(s1.lambda == s2.lambda);
  REQUIRE(s1.psi == s2.psi);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < op.size(); ++k)
        dot += op.wA[k] * s1.psi(static_cast<int>(k), i) * s1.psi(static_cast<int>(k), j);
      REQUIRE_THAT(dot, WithinAbs(i == j ? 1.0 : 0.0, 1e-9));
    }
}

TEST_CASE("resolvent keeps the exact threshold Laurent coefficient") {
  const auto op = build_slab_operator(kerr_ref, slab_ref, 24, 24, 0);
  const auto spec = lowest_modes(op, 6);
  const Eigen::VectorXd f = random_vector(op.size(), 7).array() + 0.6;
  double prev_bounded = 0.0;
  for (double sigma : {0.05, 0.025, 0.0125}) {
    const auto res = resolvent_solve(op, sigma * sigma, f, spec.lambda);
    REQUIRE_THAT(res.pi0_u, WithinRel(-res.pi0_f / (sigma * sigma), 1e-10));
    Eigen::VectorXd bounded = res.u;
    bounded.array() += res.pi0_f / (sigma * sigma);
    const double nb = bounded.norm();
    if (prev_bounded > 0.0) REQUIRE(nb < 1.6 * prev_bounded + 1.0);
    prev_bounded = nb;
  }
  REQUIRE_THROWS_AS(resolvent_solve(op, 0.0, f, spec.lambda), NearResonance);
  REQUIRE_THROWS_AS(resolvent_solve(op, spec.lambda[1], f, spec.lambda), NearResonance);
}

TEST_CASE("threshold elimination scalar is exact and corrections are quartic") {
  const auto op = build_slab_operator(kerr_ref, slab_ref, 20, 20, 0);
  const double sigmas[3] = {1e-2, 5e-3, 2.5e-3};
  double D[3], corr[3], off[3];
  for (int i = 0; i < 3; ++i) {
    const auto probe = schur_probe(op, sigmas[i]);
    REQUIRE(probe.p11 == probe.minus_sigma2_mass);  // bitwise, via the flux form
    D[i] = probe.D;
    corr[i] = probe.correction;
    off[i] = probe.offdiag_norm;
  }
  for (int i = 0; i + 1 < 3; ++i) {
    REQUIRE_THAT(std::log2(std::abs(D[i] / D[i + 1])), WithinAbs(2.0, 0.05));
    REQUIRE_THAT(std::log2(off[i] / off[i + 1]), WithinAbs(2.0, 0.05));
    REQUIRE_THAT(std::log2(std::abs(corr[i] / corr[i + 1])), WithinAbs(4.0, 0.3));
  }
  REQUIRE_THROWS_AS(schur_probe(op, 0.0), NearResonance);
}

TEST_CASE("threshold generator has the length-two block structure") {
  const auto op = build_slab_operator(kerr_ref, slab_ref, 16, 16, 0);
  const auto gs = generator_structure(op);
  REQUIRE(gs.dim_ker == 1);
  REQUIRE(gs.dim_ker2 == 2);
  REQUIRE(gs.second_maps_to_first);
  REQUIRE(gs.map_error <= 1e-12);
  const auto op2 = build_slab_operator(kerr_ref, slab_ref, 8, 8, 1);
  REQUIRE_THROWS_AS(generator_structure(op2), WrongMode);
}

TEST_CASE("pencil eigenvalues are real and square to the symmetric spectrum") {
  const auto op = build_slab_operator(kerr_ref, slab_ref, 12, 12, 0);
  const auto spec = lowest_modes(op, 6);
  const auto pr = pencil_eigenvalues(op);
  REQUIRE(pr.sigma.size() == 2 * op.size());
  REQUIRE(pr.max_imag <= 1e-6);
  REQUIRE(pr.max_residual <= 1e-8);
  std::vector<double> positive;
  for (const auto& s : pr.sigma)
    if (s.real() > 1e-5) positive.push_back(s.real());
  std::sort(positive.begin(), positive.end());
  for (int j = 1; j < 6; ++j) {
    INFO("mode " << j);
    REQUIRE_THAT(positive[j - 1], WithinAbs(std::sqrt(spec.lambda[j]), 1e-7));
  }

  // Deflating the certified sigma = 0 block leaves a strictly real spectrum:
  // QZ no longer has a double zero to split.
  const auto pd = pencil_eigenvalues(op, 1300, true);
  REQUIRE(pd.sigma.size() == 2 * (op.size() - 1));
  REQUIRE(pd.max_imag <= 1e-12);
  REQUIRE(pd.max_residual <= 1e-8);
  std::vector<double> positive_d;
  for (const auto& s : pd.sigma)
    if (s.real() > 1e-5) positive_d.push_back(s.real());
  std::sort(positive_d.begin(), positive_d.end());
  for (int j = 1; j < 6; ++j) {
    INFO("deflated mode " << j);
    REQUIRE_THAT(positive_d[j - 1], WithinAbs(std::sqrt(spec.lambda[j]), 1e-7));
  }
  const auto op1 = build_slab_operator(kerr_ref, slab_ref, 8, 8, 1);
  REQUIRE_THROWS_AS(pencil_eigenvalues(op1, 1300, true), WrongMode);
}

TEST_CASE("gyroscopic pencil stays real for nonzero azimuthal modes") {
  const auto op = build_slab_operator(kerr_ref, slab_ref, 10, 10, 2);
  const auto pr = pencil_eigenvalues(op);
  double max_abs = 0.0;
  for (const auto& s : pr.sigma) max_abs = std::max(max_abs, std::abs(s));
  REQUIRE(pr.max_imag <= 1e-6 * (1.0 + max_abs));
  REQUIRE(pr.max_residual <= 1e-8);
}
