#pragma once

#include <cmath>
#include <string>

#include "carterlab/errors.hpp"
#include "carterlab/params.hpp"

namespace carterlab {

// Stationary 2x2 block of the metric in coordinates (t, phi) plus the two
// diagonal coordinate entries. Lower indices.
struct MetricBlocks {
  double g_tt;
  double g_tphi;
  double g_phiphi;
  double g_rr;
  double g_xx;
};

// rho^2-scaled inverse-metric weights:
//   rho^2 g^tt = -A,  rho^2 g^tphi = B,  rho^2 g^phiphi = Phi,
//   rho^2 g^rr = Delta_r,  rho^2 g^xx = Delta_x.
struct InverseWeights {
  double A;
  double B;
  double Phi;
};

namespace detail {
inline void require_nondegenerate(const FamilyParams& p, double r, double x) {
  if (p.rho2(r, x) <= 0.0)
    throw DegeneratePoint("rho^2 vanishes at r=" + std::to_string(r) + ", x=" + std::to_string(x));
}
}  // namespace detail

inline MetricBlocks metric_blocks(const FamilyParams& p, double r, double x) {
  detail::require_nondegenerate(p, r, x);
  const double dr = p.delta_r(r), dx = p.delta_x(x), rho = p.rho2(r, x);
  const double a = p.a, s2 = 1.0 - x * x, ra = r * r + a * a;
  if (dr == 0.0 || dx == 0.0)
    throw EvaluationAtPole("Delta factor vanishes; coordinate entries are singular here");
  MetricBlocks g;
  g.g_tt = (a * a * dx - dr) / rho;
  g.g_tphi = (a * s2 * dr - a * ra * dx) / rho;
  g.g_phiphi = (ra * ra * dx - a * a * s2 * s2 * dr) / rho;
  g.g_rr = rho / dr;
  g.g_xx = rho / dx;
  return g;
}

// Determinant of the (t, phi) block; equals -Delta_r Delta_x identically.
inline double block_det(const FamilyParams& p, double r, double x) {
  detail::require_nondegenerate(p, r, x);
  const double dr = p.delta_r(r), dx = p.delta_x(x), rho = p.rho2(r, x);
  const double a = p.a, s2 = 1.0 - x * x, ra = r * r + a * a;
  const double g_tt = (a * a * dx - dr) / rho;
  const double g_tphi = (a * s2 * dr - a * ra * dx) / rho;
  const double g_phiphi = (ra * ra * dx - a * a * s2 * s2 * dr) / rho;
  return g_tt * g_phiphi - g_tphi * g_tphi;
}

inline InverseWeights inverse_weights(const FamilyParams& p, double r, double x) {
  detail::require_nondegenerate(p, r, x);
  const double dr = p.delta_r(r), dx = p.delta_x(x);
  if (dr == 0.0 || dx == 0.0)
    throw EvaluationAtPole("Delta factor vanishes; inverse weights are singular here");
  const double a = p.a, s2 = 1.0 - x * x, ra = r * r + a * a;
  InverseWeights w;
  w.A = ra * ra / dr - a * a * s2 * s2 / dx;
  w.B = a * s2 / dx - a * ra / dr;
  w.Phi = (dr - a * a * dx) / (dr * dx);
  return w;
}

inline double sqrt_minus_det_g(const FamilyParams& p, double r, double x) {
  detail::require_nondegenerate(p, r, x);
  return p.rho2(r, x);
}

}  // namespace carterlab
