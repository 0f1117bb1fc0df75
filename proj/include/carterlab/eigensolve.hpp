#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "carterlab/assemble.hpp"
#include "carterlab/errors.hpp"

namespace carterlab {

struct SpectrumResult {
  std::vector<double> lambda;  // ascending
  Eigen::MatrixXd psi;         // columns, M_A-orthonormal
  double max_residual = 0.0;   // relative pencil residual over returned pairs
  std::string method;
};

namespace detail {

// symmetric fold of the pencil (H, M_A) by the diagonal mass square root
inline Eigen::SparseMatrix<double> folded_matrix(const SlabOperator& op,
                                                 std::vector<double>& dinv) {
  const std::size_t n = op.size();
  dinv.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(op.wA[k] > 0.0)) throw NotStrictSlab("mass weight must be positive to fold");
    dinv[k] = 1.0 / std::sqrt(op.wA[k]);
  }
  Eigen::SparseMatrix<double> Hf = op.H;
  for (int c = 0; c < Hf.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(Hf, c); it; ++it)
      it.valueRef() *= dinv[it.row()] * dinv[it.col()];
  return Hf;
}

inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  int imax = 0;
  double amax = 0.0;
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > amax) {
      amax = std::abs(v[i]);
      imax = i;
    }
  if (v[imax] < 0.0) v = -v;
}

}  // namespace detail

// Lowest `count` modes of H psi = lambda M_A psi. Dense solve below the size
// threshold, shift-inverted Lanczos with locking above it. Degenerate levels
// are recovered by deflated restarts; a single Krylov space carries at most
// one vector per eigenvalue.
inline SpectrumResult lowest_modes(const SlabOperator& op, int count, double tol = 1e-9,
                                   std::uint64_t seed = 0, int dense_threshold = 1400) {
  const std::size_t n = op.size();
  if (count < 1 || static_cast<std::size_t>(count) > n)
    throw RangeError("mode count out of range");
  std::vector<double> dinv;
  const Eigen::SparseMatrix<double> Hf = detail::folded_matrix(op, dinv);
  const double scale = Hf.coeffs().cwiseAbs().maxCoeff();

  SpectrumResult out;
  Eigen::MatrixXd vecs;  // folded eigenvectors

  if (n <= static_cast<std::size_t>(dense_threshold)) {
    const Eigen::MatrixXd Hd(Hf);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hd);
    if (es.info() != Eigen::Success) throw SolverFailure("dense symmetric eigensolve failed");
    out.lambda.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
    vecs = es.eigenvectors().leftCols(count);
    out.method = "dense";
  } else {
    // shift-invert Lanczos with full reorthogonalization and locking
    const double tau = std::max(1e-10 * scale, 1e-12);
    Eigen::SparseMatrix<double> J = Hf;
    for (int k = 0; k < J.rows(); ++k) J.coeffRef(k, k) += tau;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(J);
    if (ldlt.info() != Eigen::Success)
      throw LinearSolveFailure("factorization of the shifted stiffness failed");

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> locked;
    std::vector<double> locked_lambda;
    const int m_iter = std::min<std::size_t>(n, std::max(80, 10 * count));

    for (int restart = 0; restart < 8 && static_cast<int>(locked.size()) < count; ++restart) {
      Eigen::VectorXd v(n);
      for (std::size_t k = 0; k < n; ++k) v[k] = gauss(rng);
      for (const auto& q : locked) v -= q.dot(v) * q;
      const double nv = v.norm();
      if (nv == 0.0) continue;
      v /= nv;

      std::vector<Eigen::VectorXd> V{v};
      std::vector<double> alpha, beta;
      for (int it = 0; it < m_iter; ++it) {
        Eigen::VectorXd w = ldlt.solve(V.back());
        if (ldlt.info() != Eigen::Success)
          throw LinearSolveFailure("triangular solve failed in the Lanczos sweep");
        const double a = V.back().dot(w);
        alpha.push_back(a);
        w -= a * V.back();
        if (V.size() > 1) w -= beta.back() * V[V.size() - 2];
        for (const auto& q : locked) w -= q.dot(w) * q;  // deflate
        for (const auto& q : V) w -= q.dot(w) * q;       // full reorth
        for (const auto& q : V) w -= q.dot(w) * q;
        const double b = w.norm();
        if (b < 1e-13) break;
        beta.push_back(b);
        V.push_back(w / b);
      }
      const int mdim = static_cast<int>(alpha.size());
      if (mdim == 0) continue;
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mdim, mdim);
      for (int i = 0; i < mdim; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < mdim) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> te(T);
      // largest theta corresponds to smallest lambda
      for (int c = mdim - 1; c >= 0 && static_cast<int>(locked.size()) < count + 2; --c) {
        const double theta = te.eigenvalues()[c];
        if (theta <= 0.0) continue;
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < mdim; ++i) z += te.eigenvectors()(i, c) * V[i];
        for (const auto& q : locked) z -= q.dot(z) * q;
        const double nz = z.norm();
        if (nz < 1e-8) continue;
        z /= nz;
        const double lam = z.dot(Hf * z);
        const double res = (Hf * z - lam * z).norm();
        if (res <= std::max(tol * scale, 1e-12)) {
          locked.push_back(z);
          locked_lambda.push_back(lam);
        }
      }
    }
    if (static_cast<int>(locked.size()) < count)
      throw SolverFailure("Lanczos failed to converge the requested mode count");

    std::vector<int> order(locked.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return locked_lambda[a] < locked_lambda[b]; });
    vecs.resize(n, count);
    out.lambda.resize(count);
    for (int c = 0; c < count; ++c) {
      out.lambda[c] = locked_lambda[order[c]];
      vecs.col(c) = locked[order[c]];
    }
    out.method = "lanczos";
  }

  // unfold, normalize in M_A, fix signs, measure residuals against the
  // operator scale (a raw relative residual is meaningless at lambda = 0)
  const double hscale = op.H.coeffs().cwiseAbs().maxCoeff();
  out.psi.resize(n, count);
  for (int c = 0; c < count; ++c) {
    Eigen::VectorXd p = vecs.col(c);
    for (std::size_t k = 0; k < n; ++k) p[k] *= dinv[k];
    double nrm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) nrm2 += op.wA[k] * p[k] * p[k];
    p /= std::sqrt(nrm2);
    detail::fix_sign(p);
    out.psi.col(c) = p;
    Eigen::VectorXd Hp = op.H * p, Mp(n);
    for (std::size_t k = 0; k < n; ++k) Mp[k] = op.wA[k] * p[k];
    const double res = (Hp - out.lambda[c] * Mp).norm() /
                       (hscale * p.norm() + std::abs(out.lambda[c]) * Mp.norm() + 1e-300);
    out.max_residual = std::max(out.max_residual, res);
  }
  return out;
}

// Two-stage Richardson extrapolation of a second-order-accurate scalar
// sequence computed at h, h/2, h/4.
inline double richardson2(double vh, double vh2, double vh4) {
  const double a1 = (4.0 * vh2 - vh) / 3.0;
  const double a2 = (4.0 * vh4 - vh2) / 3.0;
  return (16.0 * a2 - a1) / 15.0;
}

}  // namespace carterlab
