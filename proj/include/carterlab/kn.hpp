#pragma once

// Kerr-Newman exterior diagnostics: horizon constants, the subphoton
// nontrapping sign factor on a wall interval, and the wall Jordan
// obstruction for the zero-frequency spherical mean.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "carterlab/errors.hpp"
#include "carterlab/poly.hpp"

namespace carterlab {

struct HorizonConstants {
  double r_plus = 0.0;
  double r_minus = 0.0;
  double Omega_H = 0.0;
  double kappa_plus = 0.0;
  bool extremal = false;
};

inline double kn_delta(double M, double a, double Q, double r) {
  return r * r - 2.0 * M * r + a * a + Q * Q;
}

// sign factor 4 r Delta - (r^2+a^2) Delta' in its expanded form
inline double kn_sign_factor(double M, double a, double Q, double r) {
  return 2.0 * (r * r * (r - 3.0 * M) + a * a * (r + M) + 2.0 * Q * Q * r);
}

inline double kn_A(double M, double a, double Q, double r) {
  const double s = r * r + a * a;
  return s * s / kn_delta(M, a, Q, r);
}

inline double kn_A_r_derivative(double M, double a, double Q, double r) {
  const double d = kn_delta(M, a, Q, r);
  return (r * r + a * a) * kn_sign_factor(M, a, Q, r) / (d * d);
}

inline HorizonConstants horizon_constants(double M, double a, double Q) {
  if (M <= 0.0) throw RangeError("mass must be positive");
  const double disc = M * M - a * a - Q * Q;
  const double dtol = 1e-12 * M * M;  // rounding floor of the discriminant itself
  if (disc < -dtol) throw Superextremal("a^2 + Q^2 exceeds M^2; no horizon");
  HorizonConstants hc;
  hc.extremal = std::abs(disc) <= dtol;
  const double root = hc.extremal ? 0.0 : std::sqrt(disc);
  hc.r_plus = M + root;
  hc.r_minus = M - root;
  const double denom = hc.r_plus * hc.r_plus + a * a;
  hc.Omega_H = a / denom;
  hc.kappa_plus = (hc.r_plus - hc.r_minus) / (2.0 * denom);
  return hc;
}

// Jacobian of (r_plus, Omega_H, kappa_plus) with respect to (M, a, Q),
// closed form; rows in that order. Subextremal only.
inline std::array<std::array<double, 3>, 3> horizon_sensitivity(double M, double a, double Q) {
  const double disc = M * M - a * a - Q * Q;
  if (disc <= 1e-12 * M * M)
    throw ParameterDomain("sensitivity needs a subextremal background");
  const double root = std::sqrt(disc);
  const double rp = M + root;
  const double denom = rp * rp + a * a;

  const std::array<double, 3> drp = {1.0 + M / root, -a / root, -Q / root};
  // d(denom)/dp = 2 r_plus drp + (p == a ? 2a : 0)
  std::array<double, 3> dden{};
  for (int i = 0; i < 3; ++i) dden[i] = 2.0 * rp * drp[i];
  dden[1] += 2.0 * a;
  // d(root)/dp
  const std::array<double, 3> droot = {M / root, -a / root, -Q / root};

  std::array<std::array<double, 3>, 3> J{};
  for (int i = 0; i < 3; ++i) {
    J[0][i] = drp[i];
    const double da = (i == 1) ? 1.0 : 0.0;
    J[1][i] = (da * denom - a * dden[i]) / (denom * denom);
    J[2][i] = (droot[i] * denom - root * dden[i]) / (denom * denom);
  }
  return J;
}

struct MarginReport {
  bool identity_exact = false;  // expanded-factor identity is the zero polynomial
  double factor_max = 0.0;      // max of the sign factor over [r_plus, R_w]
  double argmax = 0.0;
  bool nontrapping = false;     // factor_max < 0
};

namespace detail {

inline void require_wall(double M, double a, double Q, double R_w) {
  const double disc = M * M - a * a - Q * Q;
  const double dtol = 1e-12 * M * M;
  if (disc < -dtol) throw Superextremal("a^2 + Q^2 exceeds M^2; no horizon");
  if (disc <= dtol) throw ParameterDomain("wall diagnostics need a subextremal background");
  if (!(2.0 * M < R_w && R_w < 8.0 * M / 3.0))
    throw WallRange("wall radius must lie strictly between 2M and 8M/3");
}

}  // namespace detail

inline MarginReport nontrapping_margin(double M, double a, double Q, double R_w,
                                       int resolution = 2001) {
  detail::require_wall(M, a, Q, R_w);
  if (resolution < 2) throw RangeError("resolution must be at least 2");

  const Poly r = Poly::var(v_r);
  const Poly Mv = Poly::var(v_M);
  const Poly av = Poly::var(v_a);
  const Poly Qq = Poly::var(v_C3);  // carries Q^2
  const Poly Delta = r * r - Rational(2) * Mv * r + av * av + Qq;
  const Poly s = r * r + av * av;
  const Poly lhs = Rational(4) * r * Delta - s * Delta.derivative(v_r);
  const Poly rhs = Rational(2) * (r * r * (r - Rational(3) * Mv) + av * av * (r + Mv) +
                                  Rational(2) * Qq * r);

  MarginReport rep;
  rep.identity_exact = (lhs - rhs).is_zero();

  const double rp = horizon_constants(M, a, Q).r_plus;
  rep.factor_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < resolution; ++i) {
    const double rr = rp + (R_w - rp) * i / (resolution - 1);
    const double f = kn_sign_factor(M, a, Q, rr);
    if (f > rep.factor_max) {
      rep.factor_max = f;
      rep.argmax = rr;
    }
  }
  rep.nontrapping = rep.factor_max < 0.0;
  return rep;
}

struct ObstructionReport {
  double psi0_wall = 0.0;     // integrated spherical-mean potential at the wall
  double numeric = 0.0;       // psi0'(R_w) + H'(R_w) from the ODE solution
  double closed_form = 0.0;   // (r_plus^2 + a^2) / Delta(R_w)
  double rel_gap = 0.0;
  double pointwise_gap = 0.0;  // worst relative gap at the interior check radii
  bool obstructed = false;     // closed form strictly positive
};

inline ObstructionReport wall_jordan_obstruction(double M, double a, double Q, double R_w,
                                                 double tol = 1e-12) {
  detail::require_wall(M, a, Q, R_w);
  const auto hc = horizon_constants(M, a, Q);
  const double C = 2.0 * M * hc.r_plus - Q * Q;  // equals r_plus^2 + a^2

  auto psi_rate = [&](double rr) {
    return (C - (2.0 * M * rr - Q * Q)) / kn_delta(M, a, Q, rr);
  };
  auto H_rate = [&](double rr) { return (2.0 * M * rr - Q * Q) / kn_delta(M, a, Q, rr); };

  // The quotient is removable at r_plus; seed one step off the horizon with
  // the limiting slope -2M/(r_plus - r_minus).
  const double span = R_w - hc.r_plus;
  const double r0 = hc.r_plus + 1e-8 * span;
  double psi = -2.0 * M / (hc.r_plus - hc.r_minus) * (r0 - hc.r_plus);
  try {
    namespace od = boost::numeric::odeint;
    auto sys = [&](const double& y, double& dydr, double rr) {
      (void)y;
      dydr = psi_rate(rr);
    };
    od::integrate_adaptive(
        od::make_controlled(tol, tol, od::runge_kutta_dopri5<double>()), sys, psi, r0, R_w,
        1e-4 * span);
  } catch (const std::exception& e) {
    throw IntegratorFailure(e.what());
  }

  ObstructionReport rep;
  rep.psi0_wall = psi;
  rep.numeric = psi_rate(R_w) + H_rate(R_w);
  rep.closed_form = (hc.r_plus * hc.r_plus + a * a) / kn_delta(M, a, Q, R_w);
  rep.rel_gap = std::abs(rep.numeric - rep.closed_form) / std::abs(rep.closed_form);
  for (int i = 1; i <= 10; ++i) {
    const double rr = hc.r_plus + span * i / 11.0;
    const double want = C / kn_delta(M, a, Q, rr);
    const double got = psi_rate(rr) + H_rate(rr);
    rep.pointwise_gap = std::max(rep.pointwise_gap, std::abs(got - want) / std::abs(want));
  }
  rep.obstructed = rep.closed_form > 0.0;
  return rep;
}

}  // namespace carterlab
