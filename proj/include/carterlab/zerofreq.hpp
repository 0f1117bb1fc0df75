#pragma once

#include <cmath>
#include <string>

#include "carterlab/errors.hpp"

namespace carterlab {

enum class StaticFamily { kerr, rn, kn, extremal_kn };

inline const char* to_string(StaticFamily f) {
  switch (f) {
    case StaticFamily::kerr: return "kerr";
    case StaticFamily::rn: return "rn";
    case StaticFamily::kn: return "kn";
    case StaticFamily::extremal_kn: return "extremal-kn";
  }
  return "?";
}

// Classification of static (Omega = 0, m = 0) radial solutions per multipole.
// Subextremal: Legendre pair P_ell / Q_ell in xi = (r - M)/alpha, with the
// singular branch logarithmic at the horizon xi = 1. Extremal: Euler pair
// y^ell / y^{-ell-1} in y = r - M; at ell = 0 the pair is {1, -1/y}.
struct BranchReport {
  StaticFamily family = StaticFamily::kerr;
  int ell = 0;
  bool extremal = false;
  double alpha = 0.0;  // sqrt(M^2 - a^2 - Q^2); zero iff extremal
  double indicial_plus = 0.0, indicial_minus = 0.0;
  int growth_power = 0;        // far-field power of the regular branch
  bool log_at_horizon = false; // singular branch carries a logarithm there
  std::string regular_branch;
  std::string singular_branch;
  bool admissible_decaying_regular = false;
  std::string verdict;
};

inline BranchReport zero_frequency_classify(StaticFamily family, double M, double a, double Q,
                                            int ell) {
  if (ell < 0) throw RangeError("multipole degree must be nonnegative");
  if (!(M > 0.0)) throw ParameterDomain("mass must be positive");
  if (family == StaticFamily::kerr && Q != 0.0)
    throw ParameterDomain("Kerr family has no charge");
  if (family == StaticFamily::rn && a != 0.0)
    throw ParameterDomain("Reissner-Nordstrom family does not rotate");
  const double disc = M * M - a * a - Q * Q;
  const bool want_extremal = (family == StaticFamily::extremal_kn);
  if (want_extremal) {
    if (std::abs(disc) > 1e-12 * M * M)
      throw ParameterDomain("extremal family needs a^2 + Q^2 = M^2");
  } else if (!(disc > 0.0)) {
    throw ParameterDomain(disc < 0.0 ? "superextremal parameters" : "parameters are extremal");
  }

  BranchReport rep;
  rep.family = family;
  rep.ell = ell;
  rep.extremal = want_extremal;
  rep.growth_power = ell;
  rep.admissible_decaying_regular = false;
  if (want_extremal) {
    rep.alpha = 0.0;
    rep.indicial_plus = ell;
    rep.indicial_minus = -ell - 1;
    rep.log_at_horizon = false;
    if (ell == 0) {
      rep.regular_branch = "1";
      rep.singular_branch = "-1/y";
    } else {
      rep.regular_branch = "y^" + std::to_string(ell);
      rep.singular_branch = "y^" + std::to_string(-ell - 1);
    }
    rep.verdict = ell == 0
                      ? "regular branch is a nondecaying constant; no admissible state"
                      : "regular branch grows like y^" + std::to_string(ell) +
                            "; decaying branch is singular at the horizon";
  } else {
    rep.alpha = std::sqrt(disc);
    rep.indicial_plus = 0.0;
    rep.indicial_minus = 0.0;
    rep.log_at_horizon = true;
    rep.regular_branch = "P_" + std::to_string(ell) + "((r-M)/alpha)";
    rep.singular_branch = "Q_" + std::to_string(ell) + "((r-M)/alpha), log at the horizon";
    rep.verdict = ell == 0
                      ? "regular branch is a nondecaying constant; no admissible state"
                      : "regular branch grows like xi^" + std::to_string(ell) +
                            "; decaying branch is logarithmically singular at the horizon";
  }
  return rep;
}

}  // namespace carterlab
