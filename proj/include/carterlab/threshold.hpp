#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <vector>

#include "carterlab/assemble.hpp"
#include "carterlab/errors.hpp"

namespace carterlab {

// Coefficient of the constant mode in the mass-weighted projection.
inline double pi0_coefficient(const SlabOperator& op, const Eigen::VectorXd& f) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < op.size(); ++k) {
    num += op.wA[k] * f[static_cast<int>(k)];
    den += op.wA[k];
  }
  return num / den;
}

struct ResolventResult {
  Eigen::VectorXd u;
  double pi0_u = 0.0;
  double pi0_f = 0.0;
};

// Solves (H - sigma2 M_A) u = M_A f. Refuses spectral parameters within
// guard of a computed eigenvalue; sigma2 = 0 always hits the threshold.
inline ResolventResult resolvent_solve(const SlabOperator& op, double sigma2,
                                       const Eigen::VectorXd& f,
                                       const std::vector<double>& known_lambda,
                                       double guard = 1e-10) {
  for (double lam : known_lambda)
    if (std::abs(sigma2 - lam) <= guard * std::max({1.0, std::abs(sigma2), std::abs(lam)}))
      throw NearResonance("spectral parameter within guard distance of the spectrum");
  const std::size_t n = op.size();
  Eigen::SparseMatrix<double> P = op.H;
  for (int k = 0; k < static_cast<int>(n); ++k) P.coeffRef(k, k) -= sigma2 * op.wA[k];
  P.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(P);
  if (lu.info() != Eigen::Success)
    throw LinearSolveFailure("resolvent factorization failed");
  Eigen::VectorXd rhs(n);
  for (std::size_t k = 0; k < n; ++k) rhs[static_cast<int>(k)] = op.wA[k] * f[static_cast<int>(k)];
  ResolventResult out;
  out.u = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw LinearSolveFailure("resolvent solve failed");
  out.pi0_u = pi0_coefficient(op, out.u);
  out.pi0_f = pi0_coefficient(op, f);
  return out;
}

struct SchurProbe {
  double sigma = 0.0;
  double p11 = 0.0;           // <P0(sigma) 1, 1>, computed through the flux form
  double minus_sigma2_mass = 0.0;  // the exact closed form of p11
  double offdiag_norm = 0.0;  // norm of the coupling to the mean-zero block
  double D = 0.0;             // effective scalar after eliminating that block
  double correction = 0.0;    // D - p11, fourth order in sigma
};

// Grushin elimination of the mean-zero block for P0(sigma) = H - sigma^2 M_A.
// The splitting is constants against quadrature-mean-zero vectors; the
// diagonal scalar is exact because the flux form kills constants exactly.
inline SchurProbe schur_probe(const SlabOperator& op, double sigma) {
  if (op.m != 0) throw WrongMode("threshold elimination is an m = 0 statement");
  if (sigma == 0.0) throw NearResonance("elimination needs sigma away from zero");
  const std::size_t n = op.size();
  const double s2 = sigma * sigma;

  SchurProbe probe;
  probe.sigma = sigma;
  std::vector<double> ones(n, 1.0), H1(n);
  op.apply_H(ones.data(), H1.data());
  double quad = 0.0, mass = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    quad += H1[k];  // exactly zero termwise
    mass += op.wA[k];
  }
  probe.p11 = quad - s2 * mass;
  probe.minus_sigma2_mass = -s2 * mass;

  // bordered system [P0, w; w^T, 0] [z; mu] = [P0 1; 0]
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  Eigen::SparseMatrix<double> P = op.H;
  for (int k = 0; k < static_cast<int>(n); ++k) P.coeffRef(k, k) -= s2 * op.wA[k];
  trips.reserve(P.nonZeros() + 2 * n);
  for (int c = 0; c < P.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(P, c); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int k = 0; k < static_cast<int>(n); ++k) {
    trips.emplace_back(k, static_cast<int>(n), op.w[k]);
    trips.emplace_back(static_cast<int>(n), k, op.w[k]);
  }
  Eigen::SparseMatrix<double> K(n + 1, n + 1);
  K.setFromTriplets(trips.begin(), trips.end());
  K.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(K);
  if (lu.info() != Eigen::Success)
    throw LinearSolveFailure("bordered elimination factorization failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  for (std::size_t k = 0; k < n; ++k)
    rhs[static_cast<int>(k)] = H1[k] - s2 * op.wA[k];  // P0 applied to constants
  const Eigen::VectorXd zmu = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw LinearSolveFailure("bordered elimination solve failed");

  double bz = 0.0, bnorm2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    bz += rhs[static_cast<int>(k)] * zmu[static_cast<int>(k)];
    bnorm2 += rhs[static_cast<int>(k)] * rhs[static_cast<int>(k)];
  }
  probe.offdiag_norm = std::sqrt(bnorm2);
  probe.D = probe.p11 - bz;
  probe.correction = probe.D - probe.p11;
  return probe;
}

}  // namespace carterlab
