#pragma once

#include <array>
#include <utility>
#include <vector>

#include "carterlab/ratfun.hpp"

namespace carterlab {

// Coordinate slots. Derivatives act in r and x only.
inline constexpr int c_t = 0, c_r = 1, c_x = 2, c_phi = 3;

using Rf4x4 = std::array<std::array<RatFun, 4>, 4>;

// Deliberate defects for exercising the failure path of the certificate.
enum class FaultInjection { none, flip_tphi_sign, shift_rr };

// Symbolic metric and inverse of one family member over its coefficient ring.
struct SymMetric {
  const FamilyRing* ring = nullptr;
  Rf4x4 g;     // lower indices
  Rf4x4 ginv;  // upper indices
};

inline SymMetric build_sym_metric(const FamilyRing& R,
                                  FaultInjection fault = FaultInjection::none) {
  const auto P = [&R](Poly p) {
    return R.subst.empty() ? p : p.eval_partial(R.subst);
  };
  const Poly a = P(Poly::var(v_a));
  const Poly a2 = a * a;
  const Poly s2 = Poly::constant(1) - Poly::var(v_x, 2);  // 1 - x^2
  const Poly ra = Poly::var(v_r, 2) + a2;                 // r^2 + a^2
  const Poly& Dr = R.delta_r;
  const Poly& Dx = R.delta_x;

  SymMetric m;
  m.ring = &R;
  for (auto& row : m.g)
    for (auto& e : row) e = RatFun();
  m.ginv = m.g;

  Poly num_tphi = a * s2 * Dr - a * ra * Dx;
  if (fault == FaultInjection::flip_tphi_sign) num_tphi = -num_tphi;

  m.g[c_t][c_t] = RatFun(&R, a2 * Dx - Dr, {1, 0, 0});
  m.g[c_t][c_phi] = RatFun(&R, num_tphi, {1, 0, 0});
  m.g[c_phi][c_t] = m.g[c_t][c_phi];
  m.g[c_phi][c_phi] = RatFun(&R, ra * ra * Dx - a2 * s2 * s2 * Dr, {1, 0, 0});
  Poly num_rr = R.rho2;
  if (fault == FaultInjection::shift_rr) num_rr += Poly::constant(Rational(1, 1000));
  m.g[c_r][c_r] = RatFun(&R, num_rr, {0, 1, 0});
  m.g[c_x][c_x] = RatFun(&R, R.rho2, {0, 0, 1});

  m.ginv[c_t][c_t] = RatFun(&R, -(ra * ra * Dx - a2 * s2 * s2 * Dr), {1, 1, 1});
  m.ginv[c_t][c_phi] = RatFun(&R, a * s2 * Dr - a * ra * Dx, {1, 1, 1});
  m.ginv[c_phi][c_t] = m.ginv[c_t][c_phi];
  m.ginv[c_phi][c_phi] = RatFun(&R, Dr - a2 * Dx, {1, 1, 1});
  m.ginv[c_r][c_r] = RatFun(&R, Dr, {1, 0, 0});
  m.ginv[c_x][c_x] = RatFun(&R, Dx, {1, 0, 0});
  return m;
}

// g . ginv as a symbolic identity check; returns the sixteen residuals
// g_{mu lam} g^{lam nu} - delta_mu^nu.
inline Rf4x4 inverse_residual(const SymMetric& m) {
  Rf4x4 out;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      RatFun sum;
      for (int lam = 0; lam < 4; ++lam) sum += m.g[mu][lam] * m.ginv[lam][nu];
      if (mu == nu) sum -= RatFun(m.ring, Poly::constant(1));
      out[mu][nu] = sum;
    }
  }
  return out;
}

}  // namespace carterlab
