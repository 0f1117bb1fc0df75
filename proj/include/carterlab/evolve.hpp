#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "carterlab/assemble.hpp"
#include "carterlab/errors.hpp"
#include "carterlab/threshold.hpp"

namespace carterlab {

using Complex = std::complex<double>;

inline Complex pi0_coefficient(const SlabOperator& op, const Eigen::VectorXcd& f) {
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < op.size(); ++k) {
    num += op.wA[k] * f[static_cast<int>(k)];
    den += op.wA[k];
  }
  return num / den;
}

// E = (1/2)(w^H M_A w + q[u, u]); conserved by the midpoint stepper because
// the gyroscopic term does no work.
inline double slab_energy(const SlabOperator& op, const Eigen::VectorXcd& u,
                          const Eigen::VectorXcd& w) {
  double kin = 0.0;
  for (std::size_t k = 0; k < op.size(); ++k) kin += op.wA[k] * std::norm(w[static_cast<int>(k)]);
  const Eigen::VectorXd ur = u.real(), ui = u.imag();
  double pot = op.quad_form(ur.data());
  if (!ui.isZero(0.0)) pot += op.quad_form(ui.data());
  return 0.5 * (kin + pot);
}

struct EvolveOptions {
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::size_t save_every = 0;  // 0 keeps only the first and last slice
};

struct EvolveResult {
  std::vector<double> save_times;
  std::vector<Eigen::VectorXcd> u, w;
  std::vector<Complex> pi0_u, pi0_w;
  std::vector<double> energy;  // one value per step, starting at t = 0
  // weighted averages at every step, same indexing as energy; cheap enough to
  // keep even when full slices are not saved
  std::vector<Complex> pi0_u_step, pi0_w_step;
  double energy_drift_abs = 0.0;
  double energy_drift_rel = 0.0;
  std::string method;
};

// Implicit midpoint for M_A u_tt - 2 i m G_B u_t + H u = 0 on (u, w = u_t):
//   [M_A - i m dt G_B + (dt^2/4) H] w+ = [M_A + i m dt G_B] w - H (dt u + (dt^2/4) w)
//   u+ = u + (dt/2)(w + w+).
// One factorization for the whole run; real Cholesky-type when m = 0.
inline EvolveResult evolve_slab(const SlabOperator& op, const Eigen::VectorXcd& u0,
                                const Eigen::VectorXcd& w0, const EvolveOptions& opt) {
  const std::size_t n = op.size();
  if (!(opt.dt > 0.0)) throw RangeError("time step must be positive");
  if (opt.steps < 1) throw RangeError("need at least one time step");
  if (u0.size() != static_cast<int>(n) || w0.size() != static_cast<int>(n))
    throw DimensionMismatch("initial data does not match the grid");
  const double dt = opt.dt, q = dt * dt / 4.0;

  EvolveResult out;
  Eigen::VectorXcd u = u0, w = w0;
  const auto save = [&](double t) {
    out.save_times.push_back(t);
    out.u.push_back(u);
    out.w.push_back(w);
    out.pi0_u.push_back(pi0_coefficient(op, u));
    out.pi0_w.push_back(pi0_coefficient(op, w));
  };
  const auto track = [&] {
    out.energy.push_back(slab_energy(op, u, w));
    out.pi0_u_step.push_back(pi0_coefficient(op, u));
    out.pi0_w_step.push_back(pi0_coefficient(op, w));
  };
  out.energy.reserve(opt.steps + 1);
  track();
  save(0.0);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  const bool real_path = (op.m == 0);
  if (real_path) {
    Eigen::SparseMatrix<double> S = q * op.H;
    for (int k = 0; k < static_cast<int>(n); ++k) S.coeffRef(k, k) += op.wA[k];
    S.makeCompressed();
    ldlt.compute(S);
    if (ldlt.info() != Eigen::Success)
      throw LinearSolveFailure("midpoint system factorization failed");
    out.method = "midpoint-ldlt";
  } else {
    Eigen::SparseMatrix<Complex> S = (q * op.H).cast<Complex>();
    const Complex mi(0.0, -static_cast<double>(op.m) * dt);
    for (int k = 0; k < static_cast<int>(n); ++k)
      S.coeffRef(k, k) += Complex(op.wA[k], 0.0) + mi * op.wB[k];
    S.makeCompressed();
    lu.compute(S);
    if (lu.info() != Eigen::Success)
      throw LinearSolveFailure("midpoint system factorization failed");
    out.method = "midpoint-lu";
  }
  // m = 0 keeps exactly real data real; skip the second back-substitution then
  const bool imag_live = !(real_path && u0.imag().isZero(0.0) && w0.imag().isZero(0.0));

  for (std::size_t step = 1; step <= opt.steps; ++step) {
    Eigen::VectorXcd wn(n);
    if (real_path) {
      const Eigen::VectorXd vr = dt * u.real() + q * w.real();
      Eigen::VectorXd rr = -(op.H * vr);
      for (std::size_t k = 0; k < n; ++k) rr[static_cast<int>(k)] += op.wA[k] * w[static_cast<int>(k)].real();
      const Eigen::VectorXd wr = ldlt.solve(rr);
      if (ldlt.info() != Eigen::Success) throw LinearSolveFailure("midpoint solve failed");
      if (imag_live) {
        const Eigen::VectorXd vi = dt * u.imag() + q * w.imag();
        Eigen::VectorXd ri = -(op.H * vi);
        for (std::size_t k = 0; k < n; ++k) ri[static_cast<int>(k)] += op.wA[k] * w[static_cast<int>(k)].imag();
        const Eigen::VectorXd wi = ldlt.solve(ri);
        if (ldlt.info() != Eigen::Success) throw LinearSolveFailure("midpoint solve failed");
        wn.real() = wr;
        wn.imag() = wi;
      } else {
        wn.real() = wr;
        wn.imag().setZero();
      }
    } else {
      const Eigen::VectorXcd v = dt * u + q * w;
      Eigen::VectorXcd rhs = -(op.H.cast<Complex>() * v);
      const Complex mi(0.0, static_cast<double>(op.m) * dt);
      for (std::size_t k = 0; k < n; ++k) {
        const int ki = static_cast<int>(k);
        rhs[ki] += (Complex(op.wA[k], 0.0) + mi * op.wB[k]) * w[ki];
      }
      wn = lu.solve(rhs);
      if (lu.info() != Eigen::Success) throw LinearSolveFailure("midpoint solve failed");
    }
    u += (dt / 2.0) * (w + wn);
    w = wn;
    track();
    const double t = dt * static_cast<double>(step);
    const bool last = (step == opt.steps);
    if (last || (opt.save_every > 0 && step % opt.save_every == 0)) save(t);
  }

  const double e0 = out.energy.front();
  for (double e : out.energy)
    out.energy_drift_abs = std::max(out.energy_drift_abs, std::abs(e - e0));
  out.energy_drift_rel = out.energy_drift_abs / std::max(std::abs(e0), 1e-300);
  return out;
}

// Unweighted state norm sum w (|w|^2 + |u|^2) + plain gradient square of u.
inline double standard_state_norm2(const SlabOperator& op, const Eigen::VectorXcd& u,
                                   const Eigen::VectorXcd& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < op.size(); ++k) {
    const int ki = static_cast<int>(k);
    s += op.w[k] * (std::norm(w[ki]) + std::norm(u[ki]));
  }
  const Eigen::VectorXd ur = u.real(), ui = u.imag();
  s += op.grad_form(ur.data());
  if (!ui.isZero(0.0)) s += op.grad_form(ui.data());
  return s;
}

// Coefficient-weighted state norm w^H M_A w + u^H M_A u + q[u, u].
inline double weighted_state_norm2(const SlabOperator& op, const Eigen::VectorXcd& u,
                                   const Eigen::VectorXcd& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < op.size(); ++k) {
    const int ki = static_cast<int>(k);
    s += op.wA[k] * (std::norm(w[ki]) + std::norm(u[ki]));
  }
  const Eigen::VectorXd ur = u.real(), ui = u.imag();
  s += op.quad_form(ur.data());
  if (!ui.isZero(0.0)) s += op.quad_form(ui.data());
  return s;
}

// Every quantity in the uniform-boundedness chain, evaluated on the discrete
// coefficient samples. The Poincare constant is taken in the conservative
// unweighted form 1 / (lambda_1 a_-); the weighted pair (mass norm against
// energy) obeys the sharper bound sqrt(1 + 1/lambda_1) with no coefficient
// ratios at all.
struct StabilityReport {
  double a_min = 0, a_max = 0;
  double phi_min = 0, phi_max = 0;
  double dr_min = 0, dr_max = 0;
  double dx_min = 0, dx_max = 0;
  double grad_min = 0, grad_max = 0;  // m_grad, M_grad
  double lambda1 = 0;
  double poincare = 0;  // 1 / (lambda1 * a_min)
  double c_low = 0, c_high = 0;
  double c_stab = 0;
  double weighted_bound = 0;  // sqrt(1 + 1/lambda1)
};

inline StabilityReport stability_constants(const SlabOperator& op, double lambda1) {
  if (!(lambda1 > 0.0)) throw RangeError("stability constants need a positive ground tone");
  const auto span = [](const std::vector<double>& v) {
    return std::pair<double, double>{*std::min_element(v.begin(), v.end()),
                                     *std::max_element(v.begin(), v.end())};
  };
  StabilityReport rep;
  std::tie(rep.a_min, rep.a_max) = span(op.A);
  std::tie(rep.phi_min, rep.phi_max) = span(op.Phi);
  std::tie(rep.dr_min, rep.dr_max) = span(op.face_dr);
  std::tie(rep.dx_min, rep.dx_max) = span(op.face_dx);
  rep.grad_min = std::min({rep.phi_min, rep.dr_min, rep.dx_min});
  rep.grad_max = std::max({rep.phi_max, rep.dr_max, rep.dx_max});
  if (!(rep.a_min > 0.0 && rep.grad_min > 0.0))
    throw NotStrictSlab("stability constants need positive coefficient samples");
  rep.lambda1 = lambda1;
  rep.poincare = 1.0 / (lambda1 * rep.a_min);
  rep.c_low = std::min(rep.a_min / 2.0, 1.0 / (2.0 * (rep.poincare + 1.0 / rep.grad_min)));
  rep.c_high = 0.5 * std::max(rep.a_max, rep.grad_max);
  rep.c_stab = std::sqrt(rep.c_high / rep.c_low);
  rep.weighted_bound = std::sqrt(1.0 + 1.0 / lambda1);
  return rep;
}

}  // namespace carterlab
