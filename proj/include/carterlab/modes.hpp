#pragma once

#include <complex>
#include <vector>

#include "carterlab/errors.hpp"
#include "carterlab/params.hpp"

namespace carterlab {

// One separated mode channel. Self-adjoint angular solves need Omega real.
struct ModeParams {
  std::complex<double> Omega{0.0, 0.0};
  int m = 0;
  std::complex<double> lambda{0.0, 0.0};
  FamilyParams bg;
};

enum class SeparatedVar { radial, angular };

namespace cpoly {

using C = std::complex<double>;
using Coeffs = std::vector<C>;

inline C eval(const Coeffs& p, C y) {
  C v = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * y + p[i];
  return v;
}

inline Coeffs derivative(const Coeffs& p) {
  if (p.size() <= 1) return {C(0.0)};
  Coeffs d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = static_cast<double>(i) * p[i];
  return d;
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b) {
  Coeffs c(a.size() + b.size() - 1, C(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline Coeffs add(Coeffs a, const Coeffs& b) {
  if (b.size() > a.size()) a.resize(b.size(), C(0.0));
  for (std::size_t j = 0; j < b.size(); ++j) a[j] += b[j];
  return a;
}

// Taylor shift p(y + e) by repeated synthetic division.
inline Coeffs shift(Coeffs p, C e) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) p[j - 1] += e * p[j];
  return p;
}

// p(-y): interior on the other side of the endpoint
inline Coeffs reflect(Coeffs p) {
  for (std::size_t i = 1; i < p.size(); i += 2) p[i] = -p[i];
  return p;
}

}  // namespace cpoly

// Coefficient data of one separated equation in the form
//   (Delta F')' + [ sign * nu(y)^2 / Delta + V(y) ] F = 0,
// sign +1 radial, -1 angular. All coefficients in the raw coordinate.
struct SeparatedCoeffs {
  cpoly::Coeffs delta;  // quartic
  cpoly::Coeffs nu;     // frequency combination
  cpoly::Coeffs V;      // conformal term minus/plus the separation constant
  double sign = 1.0;

  // multiplied-through polynomial P = sign nu^2 + V Delta; the ODE becomes
  // Delta (Delta F')' + P F = 0 with polynomial data only
  cpoly::Coeffs P() const {
    return cpoly::add(cpoly::mul(cpoly::mul(nu, nu),
                                 cpoly::Coeffs{cpoly::C(sign)}),
                      cpoly::mul(V, delta));
  }
};

inline SeparatedCoeffs separated_coeffs(const ModeParams& mp, SeparatedVar which) {
  const FamilyParams& p = mp.bg;
  using cpoly::C;
  SeparatedCoeffs sc;
  if (which == SeparatedVar::radial) {
    sc.delta = {C(p.alpha0()), C(p.alpha1()), C(p.alpha2()), C(0.0), C(-p.k / 12.0)};
    sc.nu = {C(p.a * p.a) * mp.Omega - C(p.a * mp.m), C(0.0), mp.Omega};
    sc.V = {-mp.lambda, C(0.0), C(p.k / 3.0)};
    sc.sign = 1.0;
  } else {
    sc.delta = {C(p.beta0()), C(p.beta1()), C(p.beta2()), C(0.0),
                C(-p.k * p.a * p.a / 12.0)};
    sc.nu = {C(p.a) * mp.Omega - C(static_cast<double>(mp.m)), C(0.0), -C(p.a) * mp.Omega};
    sc.V = {mp.lambda, C(0.0), C(p.k * p.a * p.a / 3.0)};
    sc.sign = -1.0;
  }
  return sc;
}

}  // namespace carterlab
