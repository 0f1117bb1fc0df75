#pragma once

#include <boost/numeric/odeint.hpp>

#include <complex>
#include <vector>

#include "carterlab/frobenius.hpp"
#include "carterlab/modes.hpp"

namespace carterlab {

struct RadialTrajectory {
  std::vector<double> r;
  std::vector<std::complex<double>> R, dR;
  std::vector<std::complex<double>> wronskian;  // Delta (conj R R' - conj R' R)
  double wronskian_drift = 0.0;
};

namespace detail {

using CState = std::vector<std::complex<double>>;

template <class Rhs, class Obs>
inline void integrate_samples(Rhs rhs, CState& y, const std::vector<double>& ts, double tol,
                              Obs obs) {
  namespace od = boost::numeric::odeint;
  const double dt0 = (ts.back() > ts.front() ? 1.0 : -1.0) * 1e-4;
  try {
    od::integrate_times(od::make_controlled(tol, tol, od::runge_kutta_dopri5<CState>()), rhs,
                        y, ts.begin(), ts.end(), dt0, obs);
  } catch (const std::exception& e) {
    throw StepFailure(std::string("adaptive integration stalled: ") + e.what());
  }
}

}  // namespace detail

// Integrates (Delta_r R')' + [nu^2/Delta_r + V] R = 0 across a span where
// Delta_r stays positive, sampling on a uniform grid. Launch from Frobenius
// data when the span would otherwise touch a zero of Delta_r.
inline RadialTrajectory integrate_radial(const ModeParams& mp, double r0, double r1,
                                         std::complex<double> R0, std::complex<double> dR0,
                                         double tol = 1e-12, int samples = 201) {
  using C = std::complex<double>;
  if (samples < 2) throw RangeError("need at least two radial samples");
  if (r0 == r1) throw RangeError("radial span is empty");
  const SeparatedCoeffs sc = separated_coeffs(mp, SeparatedVar::radial);

  RadialTrajectory tr;
  tr.r.resize(samples);
  for (int i = 0; i < samples; ++i)
    tr.r[i] = r0 + (r1 - r0) * static_cast<double>(i) / (samples - 1);
  for (double r : tr.r)
    if (!(mp.bg.delta_r(r) > 0.0))
      throw StepFailure("span touches a zero of the radial factor; launch from the series");

  auto rhs = [&](const detail::CState& y, detail::CState& dy, double r) {
    const double D = mp.bg.delta_r(r), Dp = mp.bg.delta_r_prime(r);
    const C nu = cpoly::eval(sc.nu, C(r));
    const C W = nu * nu / D + cpoly::eval(sc.V, C(r));
    dy[0] = y[1];
    dy[1] = -(Dp * y[1] + W * y[0]) / D;
  };

  detail::CState y{R0, dR0};
  tr.R.reserve(samples);
  tr.dR.reserve(samples);
  detail::integrate_samples(rhs, y, tr.r, tol, [&](const detail::CState& s, double) {
    tr.R.push_back(s[0]);
    tr.dR.push_back(s[1]);
  });

  tr.wronskian.resize(samples);
  for (int i = 0; i < samples; ++i) {
    const double D = mp.bg.delta_r(tr.r[i]);
    tr.wronskian[i] = D * (std::conj(tr.R[i]) * tr.dR[i] - std::conj(tr.dR[i]) * tr.R[i]);
  }
  for (int i = 0; i < samples; ++i)
    tr.wronskian_drift =
        std::max(tr.wronskian_drift, std::abs(tr.wronskian[i] - tr.wronskian[0]));
  return tr;
}

// Two-solution Wronskian Delta (R1 R2' - R1' R2) on matching sample grids.
struct PairWronskian {
  std::vector<std::complex<double>> values;
  double drift = 0.0;
};

inline PairWronskian pair_wronskian(const ModeParams& mp, const RadialTrajectory& t1,
                                    const RadialTrajectory& t2) {
  if (t1.r.size() != t2.r.size()) throw DimensionMismatch("trajectories sample different grids");
  for (std::size_t i = 0; i < t1.r.size(); ++i)
    if (t1.r[i] != t2.r[i]) throw DimensionMismatch("trajectories sample different grids");
  PairWronskian out;
  out.values.resize(t1.r.size());
  for (std::size_t i = 0; i < t1.r.size(); ++i) {
    const double D = mp.bg.delta_r(t1.r[i]);
    out.values[i] = D * (t1.R[i] * t2.dR[i] - t1.dR[i] * t2.R[i]);
  }
  for (const auto& w : out.values)
    out.drift = std::max(out.drift, std::abs(w - out.values[0]));
  return out;
}

}  // namespace carterlab
