#pragma once

#include <cmath>
#include <vector>

#include "carterlab/errors.hpp"

namespace carterlab {

// P_0..P_lmax by the forward three-term recurrence; stable for all real x.
inline std::vector<double> legendre_p_table(int lmax, double x) {
  if (lmax < 0) throw RangeError("negative Legendre degree");
  std::vector<double> P(lmax + 1);
  P[0] = 1.0;
  if (lmax >= 1) P[1] = x;
  for (int l = 1; l < lmax; ++l)
    P[l + 1] = ((2 * l + 1) * x * P[l] - l * P[l - 1]) / (l + 1);
  return P;
}

// Q_0..Q_lmax on x > 1. Forward recurrence is unstable here (Q decays while
// P grows), so run Miller's downward recurrence from lmax + 30 and normalize
// by the closed seed Q_0 = atanh(1/x).
inline std::vector<double> legendre_q_table(int lmax, double x) {
  if (lmax < 0) throw RangeError("negative Legendre degree");
  if (!(x > 1.0)) throw RangeError("second-kind table needs x > 1");
  const int top = lmax + 30;
  std::vector<double> Q(top + 2);
  Q[top + 1] = 0.0;
  Q[top] = 1.0;
  for (int l = top; l >= 1; --l) {
    Q[l - 1] = ((2 * l + 1) * x * Q[l] - (l + 1) * Q[l + 1]) / l;
    if (std::abs(Q[l - 1]) > 1e250) {  // rescale to dodge overflow
      for (int j = l - 1; j <= top + 1; ++j) Q[j] *= 1e-250;
    }
  }
  const double q0 = std::atanh(1.0 / x);
  const double scale = q0 / Q[0];
  Q.resize(lmax + 1);
  for (double& v : Q) v *= scale;
  return Q;
}

// dP_l/dx from the table via (x^2 - 1) P_l' = l (x P_l - P_{l-1}); x != +-1.
inline std::vector<double> legendre_deriv_table(const std::vector<double>& F, double x) {
  const double den = x * x - 1.0;
  if (den == 0.0) throw EvaluationAtPole("Legendre derivative formula degenerates at |x| = 1");
  std::vector<double> D(F.size());
  D[0] = 0.0;
  for (std::size_t l = 1; l < F.size(); ++l)
    D[l] = static_cast<double>(l) * (x * F[l] - F[l - 1]) / den;
  return D;
}

// dQ_0/dx has its own closed form; higher degrees share the P relation.
inline std::vector<double> legendre_q_deriv_table(const std::vector<double>& Q, double x) {
  std::vector<double> D = legendre_deriv_table(Q, x);
  D[0] = 1.0 / (1.0 - x * x);
  return D;
}

}  // namespace carterlab
