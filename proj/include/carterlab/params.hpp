#pragma once

#include <cmath>

#include "carterlab/errors.hpp"

namespace carterlab {

// Parameters of the four-parameter-deformed Carter family. The radial and
// angular quartics are
//   Delta_r(r) = -(k/12) r^4 + alpha2 r^2 + alpha1 r + alpha0,
//   Delta_x(x) = -(k a^2/12) x^4 + beta2 x^2 + beta1 x + beta0,
// with the coefficient dictionary fixed below; beta2 = -alpha2 exactly.
struct FamilyParams {
  double a = 0.0;
  double k = 0.0;
  double Lambda = 0.0;
  double M = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double C4 = 0.0;
  double C5 = 0.0;

  double alpha2() const { return 1.0 - Lambda * a * a / 3.0 + C1 / 2.0; }
  double alpha1() const { return C2 - 2.0 * M; }
  double alpha0() const { return a * a + C3; }
  double beta2() const { return -alpha2(); }
  double beta1() const { return -C4; }
  double beta0() const { return 1.0 + C5; }

  // Coefficient of the 1/rho^4 source eigenvalue; Q^2 for the charged cases.
  double source_charge() const { return C3 - a * a * C5; }

  double delta_r(double r) const {
    return ((-k / 12.0 * r + 0.0) * r + alpha2()) * r * r + alpha1() * r + alpha0();
  }
  double delta_r_prime(double r) const {
    return -k / 3.0 * r * r * r + 2.0 * alpha2() * r + alpha1();
  }
  double delta_r_second(double r) const { return -k * r * r + 2.0 * alpha2(); }

  double delta_x(double x) const {
    return -(k * a * a / 12.0) * x * x * x * x + beta2() * x * x + beta1() * x + beta0();
  }
  double delta_x_prime(double x) const {
    return -(k * a * a / 3.0) * x * x * x + 2.0 * beta2() * x + beta1();
  }

  double rho2(double r, double x) const { return r * r + a * a * x * x; }

  static FamilyParams kerr(double M, double a) {
    FamilyParams p;
    p.M = M;
    p.a = a;
    return p;
  }

  // Charged embedding: only C3 = Q^2 is switched on, so source_charge() = Q^2.
  static FamilyParams kerr_newman(double M, double a, double Q) {
    FamilyParams p;
    p.M = M;
    p.a = a;
    p.C3 = Q * Q;
    return p;
  }

  static FamilyParams schwarzschild(double M) { return kerr(M, 0.0); }

  // Scalar curvature k and cosmological constant ride together as k = 4 Lambda.
  static FamilyParams schwarzschild_de_sitter(double M, double Lambda) {
    FamilyParams p;
    p.M = M;
    p.Lambda = Lambda;
    p.k = 4.0 * Lambda;
    return p;
  }
};

}  // namespace carterlab
