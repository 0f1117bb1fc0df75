#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "carterlab/errors.hpp"
#include "carterlab/modes.hpp"

namespace carterlab {

// Regular-branch Frobenius data at a simple zero of Delta. Everything lives
// in the local inward variable w >= 0, so x = endpoint + interior_sign * w
// and kappa = dDelta/dw(0) after the shift (and reflection for
// interior_sign = -1).
struct FrobeniusData {
  double endpoint = 0.0;
  int interior_sign = 1;
  double kappa = 0.0;
  std::complex<double> s_plus{0.0, 0.0}, s_minus{0.0, 0.0};
  bool log_branch = false;  // degenerate indicial root; series is the analytic branch
  std::vector<std::complex<double>> coeffs;  // c_0 = 1
  cpoly::Coeffs delta_local, P_local;

  std::pair<std::complex<double>, std::complex<double>> eval_local(double w) const {
    using C = std::complex<double>;
    if (!(w > 0.0)) throw RangeError("series evaluation needs w > 0");
    C sum = 0.0, dsum = 0.0, wn = 1.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
      sum += coeffs[n] * wn;
      dsum += (s_plus + static_cast<double>(n)) * coeffs[n] * wn;
      wn *= w;
    }
    const C ws = std::exp(s_plus * std::log(w));
    return {ws * sum, ws / w * dsum};
  }

  // value and d/dx at a chart point on the interior side
  std::pair<std::complex<double>, std::complex<double>> eval(double x) const {
    const double w = interior_sign * (x - endpoint);
    auto [f, dfdw] = eval_local(w);
    return {f, static_cast<double>(interior_sign) * dfdw};
  }
};

namespace detail {

// coefficient of y^{s+q} in Delta (Delta F')' + P F for the truncated series
inline std::complex<double> frobenius_row(const cpoly::Coeffs& d, const cpoly::Coeffs& p,
                                          const std::complex<double>& s,
                                          const std::vector<std::complex<double>>& c, int q) {
  using C = std::complex<double>;
  C acc = 0.0;
  const int nmax = std::min<int>(q, static_cast<int>(c.size()) - 1);
  for (int n = 0; n <= nmax; ++n) {
    C t = 0.0;
    const int pow2 = q - n + 2;  // i + i' total
    for (int i = 1; i < pow2; ++i) {
      const int ip = pow2 - i;
      if (i >= static_cast<int>(d.size()) || ip >= static_cast<int>(d.size())) continue;
      t += d[i] * d[ip] * (s + static_cast<double>(n)) * (s + static_cast<double>(n - 1 + i));
    }
    const int j = q - n;
    if (j < static_cast<int>(p.size())) t += p[j];
    acc += c[n] * t;
  }
  return acc;
}

}  // namespace detail

inline FrobeniusData frobenius_data(const ModeParams& mp, SeparatedVar which, double endpoint,
                                    int interior_sign, int order) {
  using C = std::complex<double>;
  if (interior_sign != 1 && interior_sign != -1)
    throw RangeError("interior side must be +1 or -1");
  if (order < 1) throw RangeError("series order must be at least 1");
  const SeparatedCoeffs sc = separated_coeffs(mp, which);

  cpoly::Coeffs d = cpoly::shift(sc.delta, C(endpoint));
  cpoly::Coeffs p = cpoly::shift(sc.P(), C(endpoint));
  if (interior_sign < 0) {
    d = cpoly::reflect(d);
    p = cpoly::reflect(p);
  }
  double dscale = 0.0;
  for (const auto& v : sc.delta) dscale = std::max(dscale, std::abs(v));
  if (std::abs(d[0]) > 1e-10 * dscale)
    throw RangeError("expansion endpoint is not a zero of the coordinate factor");
  d[0] = 0.0;  // exact zero by assumption; drop the rounding residue
  if (std::abs(d[1]) <= 1e-10 * dscale)
    throw NotSimpleZero("coordinate factor has a higher-order zero; extremal branch");

  FrobeniusData fd;
  fd.endpoint = endpoint;
  fd.interior_sign = interior_sign;
  fd.kappa = d[1].real();
  fd.delta_local = d;

  // indicial equation kappa^2 s^2 + P(0) = 0.  P(0) inherits rounding noise of
  // size pscale * eps from evaluating at the double-precision endpoint; below
  // that it is a true double root.
  double pscale = 0.0;
  for (const auto& v : p) pscale = std::max(pscale, std::abs(v));
  if (std::abs(p[0]) <= 1e-12 * std::max(1.0, pscale)) p[0] = 0.0;
  fd.P_local = p;
  C s = std::sqrt(-p[0]) / d[1];
  if (s.real() < 0.0 || (s.real() == 0.0 && s.imag() < 0.0)) s = -s;
  fd.s_plus = s;
  fd.s_minus = -s;
  fd.log_branch = std::abs(s) <= 1e-12;

  fd.coeffs.assign(order + 1, C(0.0));
  fd.coeffs[0] = 1.0;
  const C kap2 = d[1] * d[1];
  for (int q = 1; q <= order; ++q) {
    // I(s+q) c_q = -(rows below q); I(t) = kappa^2 t^2 + P(0)
    const C sq = s + static_cast<double>(q);
    const C I = kap2 * sq * sq + p[0];
    std::vector<C> head(fd.coeffs.begin(), fd.coeffs.begin() + q);
    const C rhs = detail::frobenius_row(d, p, s, head, q);
    fd.coeffs[q] = -rhs / I;
  }
  return fd;
}

// Residual series of the truncated regular branch: entries q = 0..qmax of
// Delta (Delta F')' + P F in powers w^{s+q}. The first order+1 of them vanish
// identically; the next one is the genuine truncation defect.
inline std::vector<std::complex<double>> frobenius_residual_rows(const FrobeniusData& fd,
                                                                 int qmax) {
  std::vector<std::complex<double>> rows(qmax + 1);
  for (int q = 0; q <= qmax; ++q)
    rows[q] = detail::frobenius_row(fd.delta_local, fd.P_local, fd.s_plus, fd.coeffs, q);
  return rows;
}

}  // namespace carterlab
