#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "carterlab/kn.hpp"
#include "frozen_values.hpp"

using namespace carterlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("horizon constants match the closed forms") {
  const auto kerr = horizon_constants(1.0, 0.5, 0.0);
  REQUIRE_THAT(kerr.r_plus, WithinRel(frozen::kerr_r_plus, 1e-15));
  REQUIRE_THAT(kerr.r_minus, WithinRel(frozen::kerr_r_minus, 1e-15));
  REQUIRE_THAT(kerr.Omega_H, WithinRel(frozen::kerr_Omega_H, 1e-15));
  REQUIRE_THAT(kerr.kappa_plus, WithinRel(frozen::kerr_kappa_H, 1e-15));
  REQUIRE(kerr.r_plus >= kerr.r_minus);
  REQUIRE_FALSE(kerr.extremal);

  const auto kn = horizon_constants(1.0, 0.3, 0.4);
  REQUIRE_THAT(kn.r_plus, WithinRel(frozen::kn_r_plus, 1e-15));
  REQUIRE_THAT(kn.Omega_H, WithinRel(frozen::kn_Omega_H, 1e-15));
  REQUIRE_THAT(kn.kappa_plus, WithinRel(frozen::kn_kappa_H, 1e-15));

  const auto schw = horizon_constants(1.0, 0.0, 0.0);
  REQUIRE(schw.r_plus == 2.0);
  REQUIRE(schw.r_minus == 0.0);
  REQUIRE(schw.Omega_H == 0.0);
  REQUIRE(schw.kappa_plus == 0.25);
}

TEST_CASE("extremal and superextremal parameters are flagged") {
  const auto ex = horizon_constants(1.0, 0.6, 0.8);
  REQUIRE(ex.extremal);
  REQUIRE(ex.kappa_plus == 0.0);
  REQUIRE(ex.r_plus == ex.r_minus);
  REQUIRE(ex.r_plus == 1.0);

  REQUIRE_THROWS_AS(horizon_constants(1.0, 0.3, 0.96), Superextremal);
  REQUIRE_THROWS_AS(horizon_constants(0.0, 0.0, 0.0), RangeError);
}

TEST_CASE("horizon constants vary smoothly with the parameters") {
  const double h = 1e-6;
  for (const auto& [M, a, Q] : {std::array<double, 3>{1.0, 0.3, 0.4},
                                std::array<double, 3>{1.0, 0.5, 0.0},
                                std::array<double, 3>{1.2, 0.1, 0.6}}) {
    const auto J = horizon_sensitivity(M, a, Q);
    for (int p = 0; p < 3; ++p) {
      std::array<double, 3> lo = {M, a, Q}, hi = {M, a, Q};
      lo[p] -= h;
      hi[p] += h;
      const auto cl = horizon_constants(lo[0], lo[1], lo[2]);
      const auto ch = horizon_constants(hi[0], hi[1], hi[2]);
      const double fd[3] = {(ch.r_plus - cl.r_plus) / (2.0 * h),
                            (ch.Omega_H - cl.Omega_H) / (2.0 * h),
                            (ch.kappa_plus - cl.kappa_plus) / (2.0 * h)};
      for (int i = 0; i < 3; ++i)
        REQUIRE_THAT(fd[i], WithinAbs(J[i][p], 1e-6 * (1.0 + std::abs(J[i][p]))));
    }
  }
}

TEST_CASE("nontrapping factor identity holds exactly") {
  const auto rep = nontrapping_margin(1.0, 0.3, 0.4, 2.5);
  REQUIRE(rep.identity_exact);
  REQUIRE_THAT(rep.factor_max, WithinAbs(frozen::kn_wall_margin, 1e-12));
  REQUIRE(rep.nontrapping);
}

TEST_CASE("Schwarzschild wall margin matches the closed-form cubic") {
  const auto rep = nontrapping_margin(1.0, 0.0, 0.0, 2.5);
  REQUIRE(rep.identity_exact);
  REQUIRE_THAT(rep.factor_max, WithinAbs(frozen::schw_wall_margin, 1e-12));
  REQUIRE_THAT(rep.argmax, WithinRel(2.5, 1e-12));
  REQUIRE(rep.nontrapping);

  // the factor's only exterior root sits at the photon sphere
  REQUIRE(kn_sign_factor(1.0, 0.0, 0.0, 3.0) == 0.0);
  REQUIRE(kn_sign_factor(1.0, 0.0, 0.0, 3.1) > 0.0);
  REQUIRE(nontrapping_margin(1.0, 0.0, 0.0, 2.65).factor_max < 0.0);
}

TEST_CASE("factor sign agrees with the full radial derivative") {
  const double M = 1.0, a = 0.3, Q = 0.4, R_w = 2.5;
  const auto hc = horizon_constants(M, a, Q);
  const auto rep = nontrapping_margin(M, a, Q, R_w);
  REQUIRE(rep.nontrapping);
  const double h = 1e-6;
  for (int i = 1; i <= 50; ++i) {
    const double r = hc.r_plus + (R_w - hc.r_plus) * i / 50.0;
    const double dA = kn_A_r_derivative(M, a, Q, r);
    REQUIRE(dA < 0.0);
    REQUIRE(kn_sign_factor(M, a, Q, r) < 0.0);
    const double fd = (kn_A(M, a, Q, r + h) - kn_A(M, a, Q, r - h)) / (2.0 * h);
    REQUIRE_THAT(fd, WithinRel(dA, 1e-6));
  }
}

TEST_CASE("wall diagnostics reject bad walls and backgrounds") {
  REQUIRE_THROWS_AS(nontrapping_margin(1.0, 0.0, 0.0, 2.0), WallRange);
  REQUIRE_THROWS_AS(nontrapping_margin(1.0, 0.0, 0.0, 2.7), WallRange);
  REQUIRE_THROWS_AS(nontrapping_margin(1.0, 0.3, 0.96, 2.5), Superextremal);
  REQUIRE_THROWS_AS(nontrapping_margin(1.0, 0.6, 0.8, 2.5), ParameterDomain);
  REQUIRE_THROWS_AS(nontrapping_margin(1.0, 0.0, 0.0, 2.5, 1), RangeError);
  REQUIRE_THROWS_AS(wall_jordan_obstruction(1.0, 0.0, 0.0, 1.9), WallRange);
}

TEST_CASE("Jordan obstruction matches the closed form at the wall") {
  const auto rep = wall_jordan_obstruction(1.0, 0.0, 0.0, 2.5);
  REQUIRE_THAT(rep.closed_form, WithinAbs(frozen::schw_wall_jordan, 1e-12));
  REQUIRE(rep.rel_gap < 1e-10);
  REQUIRE(rep.pointwise_gap < 1e-12);
  REQUIRE(rep.obstructed);

  // integrated spherical mean has the elementary log profile
  REQUIRE_THAT(rep.psi0_wall, WithinRel(-2.0 * std::log(2.5 / 2.0), 1e-9));

  const auto kn = wall_jordan_obstruction(1.0, 0.3, 0.4, 2.5);
  REQUIRE_THAT(kn.closed_form, WithinRel(frozen::kn_wall_jordan, 1e-12));
  REQUIRE(kn.rel_gap < 1e-10);
  REQUIRE(kn.obstructed);
  const auto hc = horizon_constants(1.0, 0.3, 0.4);
  const double want = -2.0 * std::log((2.5 - hc.r_minus) / (hc.r_plus - hc.r_minus));
  REQUIRE_THAT(kn.psi0_wall, WithinRel(want, 1e-9));
}

TEST_CASE("integrated potential differentiates back to the ODE slope") {
  const double M = 1.0, a = 0.3, Q = 0.4, R_w = 2.45, h = 1e-3;
  const auto lo = wall_jordan_obstruction(M, a, Q, R_w - h);
  const auto mid = wall_jordan_obstruction(M, a, Q, R_w);
  const auto hi = wall_jordan_obstruction(M, a, Q, R_w + h);
  const double fd = (hi.psi0_wall - lo.psi0_wall) / (2.0 * h);
  const double Hp = (2.0 * M * R_w - Q * Q) / kn_delta(M, a, Q, R_w);
  REQUIRE_THAT(fd, WithinRel(mid.closed_form - Hp, 1e-6));
}
