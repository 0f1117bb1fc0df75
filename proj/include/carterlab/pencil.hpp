#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "carterlab/assemble.hpp"
#include "carterlab/errors.hpp"

namespace carterlab {

// First-order generator of the m = 0 system on pairs (u, u_t):
//   G (u, w) = (w, -M_A^{-1} H u).
// Its kernel is the constants in the first slot; the second copy of the
// constants lies in ker G^2 only, which is the length-two threshold block.
struct GeneratorStructure {
  int dim_ker = 0;
  int dim_ker2 = 0;
  bool second_maps_to_first = false;  // G (0, 1) = (1, 0)
  double map_error = 0.0;
};

namespace detail {

inline Eigen::MatrixXd dense_generator(const SlabOperator& op) {
  const int n = static_cast<int>(op.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  G.topRightCorner(n, n).setIdentity();
  const Eigen::MatrixXd Hd(op.H);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) G(n + r, c) = -Hd(r, c) / op.wA[static_cast<std::size_t>(r)];
  return G;
}

inline int rank_by_svd(const Eigen::MatrixXd& A, double tol) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > tol * s[0]) ++rank;
  return rank;
}

}  // namespace detail

inline GeneratorStructure generator_structure(const SlabOperator& op, double tol = 1e-8,
                                              int max_nodes = 1300) {
  if (op.m != 0) throw WrongMode("the threshold generator analysis is an m = 0 statement");
  const int n = static_cast<int>(op.size());
  if (n > max_nodes)
    throw RangeError("generator analysis is a dense computation; use a coarser grid");
  const Eigen::MatrixXd G = detail::dense_generator(op);
  GeneratorStructure out;
  out.dim_ker = 2 * n - detail::rank_by_svd(G, tol);
  out.dim_ker2 = 2 * n - detail::rank_by_svd(G * G, tol);

  Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * n);
  z.tail(n).setOnes();
  Eigen::VectorXd img = G * z;
  Eigen::VectorXd want = Eigen::VectorXd::Zero(2 * n);
  want.head(n).setOnes();
  out.map_error = (img - want).norm() / want.norm();
  out.second_maps_to_first = out.map_error <= 1e-12;
  return out;
}

struct PencilResult {
  std::vector<std::complex<double>> sigma;  // sorted by real part
  double max_residual = 0.0;
  double max_imag = 0.0;
};

// Eigenvalues of the quadratic pencil Q(sigma) = sigma^2 M_A + 2 m sigma G_B - H
// through the companion linearization
//   sigma [M_A 0; 0 I] [sv; v] = [-2m G_B, H; I, 0] [sv; v].
// deflate_threshold removes the certified length-two block at sigma = 0 before
// the QZ solve: the flux-form stiffness annihilates constants exactly, so the
// weighted mean-zero complement is invariant and carries every other pair. QZ
// otherwise splits the double zero at sqrt(eps) scale with spurious imaginary
// parts. Only meaningful for m = 0, where that block exists.
inline PencilResult pencil_eigenvalues(const SlabOperator& op, int max_nodes = 1300,
                                       bool deflate_threshold = false) {
  const int n = static_cast<int>(op.size());
  if (n > max_nodes)
    throw RangeError("pencil solve is a dense computation; use a coarser grid");
  if (deflate_threshold && op.m != 0)
    throw WrongMode("threshold deflation applies to the axisymmetric pencil");

  Eigen::MatrixXd MA = Eigen::VectorXd::Map(op.wA.data(), n).asDiagonal();
  Eigen::MatrixXd GB = Eigen::VectorXd::Map(op.wB.data(), n).asDiagonal();
  Eigen::MatrixXd Hd(op.H);
  int nred = n;
  if (deflate_threshold) {
    // Householder complement of the weight vector: v is in the invariant
    // subspace iff the weighted mean of v vanishes.
    Eigen::VectorXd h = Eigen::VectorXd::Map(op.wA.data(), n);
    h[0] += (h[0] >= 0.0 ? 1.0 : -1.0) * h.norm();
    const Eigen::MatrixXd P =
        Eigen::MatrixXd::Identity(n, n) - (2.0 / h.squaredNorm()) * (h * h.transpose());
    const Eigen::MatrixXd U = P.rightCols(n - 1);
    MA = U.transpose() * MA * U;
    GB = U.transpose() * GB * U;
    Hd = U.transpose() * Hd * U;
    nred = n - 1;
  }

  Eigen::MatrixXd Apen = Eigen::MatrixXd::Zero(2 * nred, 2 * nred);
  Eigen::MatrixXd Bpen = Eigen::MatrixXd::Zero(2 * nred, 2 * nred);
  Apen.topLeftCorner(nred, nred) = -2.0 * op.m * GB;
  Apen.topRightCorner(nred, nred) = Hd;
  Apen.bottomLeftCorner(nred, nred).setIdentity();
  Bpen.topLeftCorner(nred, nred) = MA;
  Bpen.bottomRightCorner(nred, nred).setIdentity();

  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
  ges.compute(Apen, Bpen);
  if (ges.info() != Eigen::Success) throw SolverFailure("pencil linearization eigensolve failed");

  PencilResult out;
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  for (int i = 0; i < alphas.size(); ++i) {
    if (std::abs(betas[i]) < 1e-300) continue;  // infinite eigenvalue guard
    const std::complex<double> s(alphas[i].real() / betas[i], alphas[i].imag() / betas[i]);
    out.sigma.push_back(s);
    out.max_imag = std::max(out.max_imag, std::abs(s.imag()));
  }
  std::sort(out.sigma.begin(), out.sigma.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  // residual of each pair against the quadratic form itself
  const Eigen::MatrixXcd vecs = ges.eigenvectors();
  for (int i = 0; i < alphas.size(); ++i) {
    if (std::abs(betas[i]) < 1e-300) continue;
    const std::complex<double> s(alphas[i].real() / betas[i], alphas[i].imag() / betas[i]);
    Eigen::VectorXcd v = vecs.col(i).tail(nred);
    const double nv = v.norm();
    if (nv < 1e-14) continue;
    v /= nv;
    Eigen::VectorXcd Qv = (s * s) * (MA.cast<std::complex<double>>() * v);
    Qv += (2.0 * op.m * s) * (GB.cast<std::complex<double>>() * v);
    Qv -= Hd.cast<std::complex<double>>() * v;
    const double scale = std::norm(s) * 1.0 + std::abs(s) * 2.0 * std::abs(op.m) + Hd.norm();
    out.max_residual = std::max(out.max_residual, Qv.norm() / (scale + 1e-300));
  }
  return out;
}

}  // namespace carterlab
