#pragma once

// Extremal-horizon collar laboratory in ingoing coordinates: the conserved
// transversal charge, a characteristic scheme for extremal RN, a first-order
// reduced scheme for extremal KN (experimental), and the horizon-equation
// residual that mirrors the conservation proof.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "carterlab/errors.hpp"
#include "carterlab/legendre.hpp"

namespace carterlab {

// Gauss-Legendre rule on [-1,1] by the Jacobi-matrix eigenproblem.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw RangeError("quadrature order must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k - 1, k) = J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    w[i] = 2.0 * v0 * v0;
  }
}

// Axisymmetric angular Laplacian d/dx((1-x^2) d/dx) applied spectrally at the
// quadrature nodes. Exact for polynomial data up to the node count, and the
// constant mode is annihilated identically.
inline std::vector<double> angular_laplacian_apply(const std::vector<double>& x,
                                                   const std::vector<double>& w,
                                                   const std::vector<double>& f) {
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(f.size()) != n || static_cast<int>(w.size()) != n)
    throw DimensionMismatch("angular node count mismatch");
  std::vector<std::vector<double>> P(n);
  for (int q = 0; q < n; ++q) P[q] = legendre_p_table(n - 1, x[q]);
  std::vector<double> out(n, 0.0);
  for (int l = 1; l < n; ++l) {
    double c = 0.0;
    for (int q = 0; q < n; ++q) c += w[q] * P[q][l] * f[q];
    c *= 0.5 * (2 * l + 1);
    const double ev = -static_cast<double>(l) * (l + 1);
    for (int q = 0; q < n; ++q) out[q] += ev * c * P[q][l];
  }
  return out;
}

struct ExtremalState {
  double M = 1.0, a = 0.0, Q = 1.0;  // a^2 + Q^2 == M^2
  std::vector<double> r;             // collar grid [M, M + delta_c]
  std::vector<double> x, wx;         // Gauss-Legendre nodes/weights in cos(theta)
  std::vector<double> u;             // layout u[q * nr + i]
  std::vector<double> p;             // dv u, carried by the a != 0 scheme
  double v = 0.0;

  // recent horizon slices (x-resolved rows) for v-derivative estimates
  std::deque<double> hist_v;
  std::deque<std::vector<double>> hist_u, hist_du, hist_p;

  int nr() const { return static_cast<int>(r.size()); }
  int nth() const { return static_cast<int>(x.size()); }
  double h() const { return r[1] - r[0]; }
  int idx(int i, int q) const { return q * nr() + i; }
};

inline ExtremalState make_extremal_state(double M, double a, double Q, int nr, int nth,
                                         double delta_c = 0.0) {
  if (M <= 0.0) throw RangeError("mass must be positive");
  if (std::abs(a * a + Q * Q - M * M) > 1e-12 * M * M)
    throw NotExtremal("collar requires a^2 + Q^2 = M^2");
  if (nr < 5) throw RangeError("need at least 5 radial samples");
  if (nth < 2) throw RangeError("need at least 2 angular nodes");
  if (delta_c == 0.0) delta_c = 0.5 * M;
  if (delta_c <= 0.0) throw RangeError("collar width must be positive");
  ExtremalState s;
  s.M = M;
  s.a = a;
  s.Q = Q;
  s.r.resize(nr);
  for (int i = 0; i < nr; ++i) s.r[i] = M + delta_c * i / (nr - 1);
  gauss_legendre(nth, s.x, s.wx);
  s.u.assign(static_cast<size_t>(nr) * nth, 0.0);
  if (a != 0.0) s.p.assign(static_cast<size_t>(nr) * nth, 0.0);
  return s;
}

namespace detail {

// second-order first/second radial derivatives of one angular column
inline void radial_d1(const double* f, int n, double h, double* out) {
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
}

inline void radial_d2(const double* f, int n, double h, double* out) {
  const double h2 = h * h;
  out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  for (int i = 1; i < n - 1; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
  out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
}

inline std::vector<double> horizon_du(const ExtremalState& s) {
  std::vector<double> out(s.nth());
  const double h = s.h();
  for (int q = 0; q < s.nth(); ++q) {
    const double* f = s.u.data() + s.idx(0, q);
    out[q] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  }
  return out;
}

inline std::vector<double> horizon_row(const ExtremalState& s, const std::vector<double>& field) {
  std::vector<double> out(s.nth());
  for (int q = 0; q < s.nth(); ++q) out[q] = field[s.idx(0, q)];
  return out;
}

inline void push_history(ExtremalState& s) {
  s.hist_v.push_back(s.v);
  s.hist_u.push_back(horizon_row(s, s.u));
  s.hist_du.push_back(horizon_du(s));
  s.hist_p.push_back(s.p.empty() ? std::vector<double>(s.nth(), 0.0) : horizon_row(s, s.p));
  while (s.hist_v.size() > 6) {
    s.hist_v.pop_front();
    s.hist_u.pop_front();
    s.hist_du.pop_front();
    s.hist_p.pop_front();
  }
}

// ingoing-time reach of the frozen outer trace: data deviating from the trace
// only inside r_s stays causally clean until the outgoing characteristic from
// r_s arrives at the boundary, dv/dr = 2(r^2+a^2)/Delta with Delta = (r-M)^2
inline double domain_of_dependence_window(const ExtremalState& s) {
  const int nr = s.nr(), nth = s.nth();
  double scale = 1e-300;
  for (const double uu : s.u) scale = std::max(scale, std::abs(uu));
  for (const double pp : s.p) scale = std::max(scale, std::abs(pp));
  int edge = -1;
  for (int i = nr - 1; i >= 0; --i) {
    double dev = 0.0;
    for (int q = 0; q < nth; ++q) {
      dev = std::max(dev, std::abs(s.u[s.idx(i, q)] - s.u[s.idx(nr - 1, q)]));
      if (!s.p.empty()) dev = std::max(dev, std::abs(s.p[s.idx(i, q)]));
    }
    if (dev > 1e-13 * scale) {
      edge = i;
      break;
    }
  }
  if (edge < 0) return std::numeric_limits<double>::infinity();
  if (edge == nr - 1) return 0.0;
  const double msq = s.M * s.M + s.a * s.a;
  auto F = [&](double rr) {
    return rr + 2.0 * s.M * std::log(rr - s.M) - msq / (rr - s.M);
  };
  return 2.0 * (F(s.r[nr - 1]) - F(s.r[edge]));
}

}  // namespace detail

inline double extremal_charge(const ExtremalState& s) {
  if (std::abs(s.a * s.a + s.Q * s.Q - s.M * s.M) > 1e-12 * s.M * s.M)
    throw NotExtremal("charge requires an extremal background");
  const auto du = detail::horizon_du(s);
  double c = 0.0;
  for (int q = 0; q < s.nth(); ++q) {
    const double uu = s.u[s.idx(0, q)];
    const double pp = s.p.empty() ? 0.0 : s.p[s.idx(0, q)];
    c += s.wx[q] * (2.0 * (s.M * s.M + s.a * s.a) * du[q] + 2.0 * s.M * uu +
                    s.a * s.a * (1.0 - s.x[q] * s.x[q]) * pp);
  }
  return c;
}

// full-sphere normalization of the same charge; spherical backgrounds only
inline double extremal_charge_sphere(const ExtremalState& s) {
  if (s.a != 0.0) throw ParameterDomain("sphere-average form needs a = 0");
  return 2.0 * M_PI * extremal_charge(s);
}

struct ChargeSeries {
  std::vector<double> v;
  std::vector<double> charge;
  std::vector<double> mean_du;  // sin(theta)-average of dr u at the horizon
  std::vector<double> mean_u;   // same average of u (tangential-decay reporting)
  std::vector<double> mean_p;   // same average of dv u
  double drift = 0.0;           // max |charge(v) - charge(0)|
  double plateau = 0.0;         // predicted late mean_du: charge(0)/(4(M^2+a^2))
  double late_mean_du = 0.0;    // mean_du averaged over the last quarter window
  double tangential_late = 0.0;  // max |mean_u|, |mean_p| over that window
  bool obstruction = false;      // |late_mean_du| >= 0.5 |plateau|
};

namespace detail {

inline void record_sample(const ExtremalState& s, ChargeSeries& cs, double prev_mean_u,
                          double dv, bool first) {
  const auto du = horizon_du(s);
  double mdu = 0.0, mu = 0.0, mp = 0.0;
  for (int q = 0; q < s.nth(); ++q) {
    mdu += s.wx[q] * du[q];
    mu += s.wx[q] * s.u[s.idx(0, q)];
    if (!s.p.empty()) mp += s.wx[q] * s.p[s.idx(0, q)];
  }
  cs.v.push_back(s.v);
  cs.charge.push_back(extremal_charge(s));
  cs.mean_du.push_back(0.5 * mdu);
  cs.mean_u.push_back(0.5 * mu);
  if (!s.p.empty())
    cs.mean_p.push_back(0.5 * mp);
  else
    cs.mean_p.push_back(first ? 0.0 : (0.5 * mu - prev_mean_u) / dv);
}

inline void finish_series(const ExtremalState& s, ChargeSeries& cs) {
  for (const double c : cs.charge) cs.drift = std::max(cs.drift, std::abs(c - cs.charge[0]));
  cs.plateau = cs.charge[0] / (4.0 * (s.M * s.M + s.a * s.a));
  const size_t n = cs.v.size();
  const size_t lo = n - std::max<size_t>(1, n / 4);
  double acc = 0.0;
  for (size_t i = lo; i < n; ++i) {
    acc += cs.mean_du[i];
    cs.tangential_late =
        std::max({cs.tangential_late, std::abs(cs.mean_u[i]), std::abs(cs.mean_p[i])});
  }
  cs.late_mean_du = acc / (n - lo);
  cs.obstruction = std::abs(cs.late_mean_du) >= 0.5 * std::abs(cs.plateau);
}

}  // namespace detail

// Characteristic extremal-RN scheme. W := 2r^2 dr u + 2ru obeys
// dv W = -dr(Delta dr u) - L_theta u, and u returns by inward integration of
// dr(ru) = W/(2r) from the frozen outer trace. Heun in v.
inline std::pair<ExtremalState, ChargeSeries> evolve_extremal_rn(const ExtremalState& s0,
                                                                 double dv, int n_steps) {
  if (s0.a != 0.0) throw WrongMode("characteristic scheme is the a = 0 reduction");
  if (dv <= 0.0) throw RangeError("step must be positive");
  if (n_steps < 1) throw RangeError("need at least one step");
  ExtremalState s = s0;
  const int nr = s.nr(), nth = s.nth();
  const double h = s.h();
  const double window = detail::domain_of_dependence_window(s);
  if (dv * n_steps > window)
    throw DomainOfDependenceExceeded("frozen outer trace valid only to v = " +
                                     std::to_string(window));

  std::vector<double> trace(nth);
  for (int q = 0; q < nth; ++q) trace[q] = s.u[s.idx(nr - 1, q)];

  auto delta = [&](double rr) { return (rr - s.M) * (rr - s.M); };

  std::vector<double> d1(nr), d2(nr), lrow;
  auto rhs_of = [&](const std::vector<double>& uu, std::vector<double>& out) {
    for (int q = 0; q < nth; ++q) {
      const double* f = uu.data() + s.idx(0, q);
      detail::radial_d1(f, nr, h, d1.data());
      detail::radial_d2(f, nr, h, d2.data());
      for (int i = 0; i < nr; ++i) {
        const double rr = s.r[i];
        out[s.idx(i, q)] = -(delta(rr) * d2[i] + 2.0 * (rr - s.M) * d1[i]);
      }
    }
    std::vector<double> slice(nth);
    for (int i = 0; i < nr; ++i) {
      for (int q = 0; q < nth; ++q) slice[q] = uu[s.idx(i, q)];
      lrow = angular_laplacian_apply(s.x, s.wx, slice);
      for (int q = 0; q < nth; ++q) out[s.idx(i, q)] -= lrow[q];
    }
  };
  auto w_of = [&](const std::vector<double>& uu, std::vector<double>& out) {
    for (int q = 0; q < nth; ++q) {
      const double* f = uu.data() + s.idx(0, q);
      detail::radial_d1(f, nr, h, d1.data());
      for (int i = 0; i < nr; ++i)
        out[s.idx(i, q)] = 2.0 * s.r[i] * s.r[i] * d1[i] + 2.0 * s.r[i] * uu[s.idx(i, q)];
    }
  };
  auto recover = [&](const std::vector<double>& W, std::vector<double>& uu) {
    for (int q = 0; q < nth; ++q) {
      double ru = s.r[nr - 1] * trace[q];
      uu[s.idx(nr - 1, q)] = trace[q];
      for (int i = nr - 2; i >= 0; --i) {
        ru -= 0.5 * h *
              (W[s.idx(i, q)] / (2.0 * s.r[i]) + W[s.idx(i + 1, q)] / (2.0 * s.r[i + 1]));
        uu[s.idx(i, q)] = ru / s.r[i];
      }
    }
  };

  ChargeSeries cs;
  if (s.hist_v.empty()) detail::push_history(s);
  detail::record_sample(s, cs, 0.0, dv, true);

  const size_t sz = s.u.size();
  std::vector<double> W(sz), k1(sz), k2(sz), ustar(sz), Wstar(sz);
  w_of(s.u, W);
  for (int step = 0; step < n_steps; ++step) {
    rhs_of(s.u, k1);
    for (size_t j = 0; j < sz; ++j) Wstar[j] = W[j] + dv * k1[j];
    recover(Wstar, ustar);
    rhs_of(ustar, k2);
    for (size_t j = 0; j < sz; ++j) W[j] += 0.5 * dv * (k1[j] + k2[j]);
    recover(W, s.u);
    s.v += dv;
    detail::push_history(s);
    detail::record_sample(s, cs, cs.mean_u.back(), dv, false);
  }
  detail::finish_series(s, cs);
  return {std::move(s), std::move(cs)};
}

// First-order reduced extremal-KN scheme with p = dv u. EXPERIMENTAL: the
// transversal transport 2(r^2+a^2) dr p is upwinded implicitly, the angular
// mass a^2 (1-x^2) keeps every node nondegenerate, and the outer trace stays
// frozen. Trusted only for the constant-solution and refinement-order checks.
inline std::pair<ExtremalState, ChargeSeries> evolve_extremal_kn(const ExtremalState& s0,
                                                                 double dv, int n_steps) {
  if (s0.a == 0.0) throw WrongMode("reduced scheme needs a != 0");
  if (dv <= 0.0) throw RangeError("step must be positive");
  if (n_steps < 1) throw RangeError("need at least one step");
  ExtremalState s = s0;
  const int nr = s.nr(), nth = s.nth();
  const double h = s.h();
  if (s.p.empty()) s.p.assign(s.u.size(), 0.0);
  const double window = detail::domain_of_dependence_window(s);
  if (dv * n_steps > window)
    throw DomainOfDependenceExceeded("frozen outer trace valid only to v = " +
                                     std::to_string(window));

  std::vector<double> trace(nth);
  for (int q = 0; q < nth; ++q) trace[q] = s.u[s.idx(nr - 1, q)];
  auto delta = [&](double rr) { return (rr - s.M) * (rr - s.M); };

  ChargeSeries cs;
  if (s.hist_v.empty()) detail::push_history(s);
  detail::record_sample(s, cs, 0.0, dv, true);

  std::vector<double> d1(nr), d2(nr), G(s.u.size()), slice(nth), lrow;
  for (int step = 0; step < n_steps; ++step) {
    for (int q = 0; q < nth; ++q) {
      const double* f = s.u.data() + s.idx(0, q);
      detail::radial_d1(f, nr, h, d1.data());
      detail::radial_d2(f, nr, h, d2.data());
      for (int i = 0; i < nr; ++i) {
        const double rr = s.r[i];
        G[s.idx(i, q)] = -(delta(rr) * d2[i] + 2.0 * (rr - s.M) * d1[i]);
      }
    }
    for (int i = 0; i < nr; ++i) {
      for (int q = 0; q < nth; ++q) slice[q] = s.u[s.idx(i, q)];
      lrow = angular_laplacian_apply(s.x, s.wx, slice);
      for (int q = 0; q < nth; ++q) G[s.idx(i, q)] -= lrow[q];
    }

    for (int q = 0; q < nth; ++q) {
      const double ang = s.a * s.a * (1.0 - s.x[q] * s.x[q]);
      // horizon node: outward transport has its inflow here; one-sided slope
      {
        const double adv =
            2.0 * (s.r[0] * s.r[0] + s.a * s.a) *
            (s.p[s.idx(1, q)] - s.p[s.idx(0, q)]) / h;
        const double num = ang / dv * s.p[s.idx(0, q)] - adv + G[s.idx(0, q)];
        s.p[s.idx(0, q)] = num / (ang / dv + 2.0 * s.r[0]);
      }
      for (int i = 1; i < nr; ++i) {
        const double adv = 2.0 * (s.r[i] * s.r[i] + s.a * s.a) / h;
        const double num = ang / dv * s.p[s.idx(i, q)] + adv * s.p[s.idx(i - 1, q)] +
                           G[s.idx(i, q)];
        s.p[s.idx(i, q)] = num / (ang / dv + adv + 2.0 * s.r[i]);
      }
    }
    for (size_t j = 0; j < s.u.size(); ++j) s.u[j] += dv * s.p[j];
    for (int q = 0; q < nth; ++q) {
      s.u[s.idx(nr - 1, q)] = trace[q];
      s.p[s.idx(nr - 1, q)] = 0.0;
    }
    s.v += dv;
    detail::push_history(s);
    detail::record_sample(s, cs, cs.mean_u.back(), dv, false);
  }
  detail::finish_series(s, cs);
  return {std::move(s), std::move(cs)};
}

// theta-integrated residual of the horizon-restricted equation at the middle
// of the last three stored slices; equals the discrete d/dv of the charge.
inline double horizon_equation_residual(const ExtremalState& s) {
  if (s.hist_v.size() < 3)
    throw InsufficientHistory("need three horizon slices for a v-derivative");
  const size_t n = s.hist_v.size();
  const double dv2 = s.hist_v[n - 1] - s.hist_v[n - 3];
  const auto& u0 = s.hist_u[n - 3];
  const auto& u2 = s.hist_u[n - 1];
  const auto& um = s.hist_u[n - 2];
  const auto& d0 = s.hist_du[n - 3];
  const auto& d2 = s.hist_du[n - 1];
  const auto& p0 = s.hist_p[n - 3];
  const auto& p2 = s.hist_p[n - 1];
  const auto& pm = s.hist_p[n - 2];
  const auto lmid = angular_laplacian_apply(s.x, s.wx, um);
  double acc = 0.0;
  for (int q = 0; q < s.nth(); ++q) {
    const double drv = (d2[q] - d0[q]) / dv2;
    double dvu;
    if (s.a != 0.0)
      dvu = pm[q];
    else
      dvu = (u2[q] - u0[q]) / dv2;
    const double dvv = s.a != 0.0 ? (p2[q] - p0[q]) / dv2 : 0.0;
    acc += s.wx[q] * (2.0 * (s.M * s.M + s.a * s.a) * drv + 2.0 * s.M * dvu +
                      s.a * s.a * (1.0 - s.x[q] * s.x[q]) * dvv + lmid[q]);
  }
  return acc;
}

}  // namespace carterlab
