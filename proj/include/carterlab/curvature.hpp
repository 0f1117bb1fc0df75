#pragma once

#include <array>
#include <cstdlib>
#include <functional>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "carterlab/metric_sym.hpp"

namespace carterlab {

namespace detail {

inline unsigned worker_count() {
  if (const char* env = std::getenv("CARTERLAB_THREADS")) {
    const long n = std::atol(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1u;
}

inline Poly ring_subst(const FamilyRing& R, Poly p) {
  return R.subst.empty() ? p : p.eval_partial(R.subst);
}

}  // namespace detail

// Gamma^alpha_{mu nu} of the stationary-axisymmetric block metric; t and phi
// derivatives vanish identically.
inline std::array<Rf4x4, 4> christoffel(const SymMetric& m) {
  Rf4x4 dg_r, dg_x;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      dg_r[mu][nu] = m.g[mu][nu].is_zero() ? RatFun() : m.g[mu][nu].derivative(v_r);
      dg_x[mu][nu] = m.g[mu][nu].is_zero() ? RatFun() : m.g[mu][nu].derivative(v_x);
    }
  static const RatFun rf_zero;
  const auto D = [&](int c, int mu, int nu) -> const RatFun& {
    if (c == c_r) return dg_r[mu][nu];
    if (c == c_x) return dg_x[mu][nu];
    return rf_zero;
  };

  std::array<Rf4x4, 4> G;
  for (int alpha = 0; alpha < 4; ++alpha)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu <= mu; ++nu) {
        RatFun sum;
        for (int lam = 0; lam < 4; ++lam) {
          if (m.ginv[alpha][lam].is_zero()) continue;
          RatFun t = D(mu, lam, nu) + D(nu, lam, mu) - D(lam, mu, nu);
          if (t.is_zero()) continue;
          sum += m.ginv[alpha][lam] * t;
        }
        sum = sum * Rational(1, 2);
        G[alpha][mu][nu] = sum;
        G[alpha][nu][mu] = sum;
      }
  return G;
}

// Ricci tensor from the coordinate formula
//   R_{mu nu} = d_alpha Gamma^alpha_{mu nu} - d_nu Gamma^alpha_{mu alpha}
//             + Gamma^alpha_{alpha beta} Gamma^beta_{mu nu}
//             - Gamma^alpha_{nu beta} Gamma^beta_{mu alpha}.
inline Rf4x4 ricci(const std::array<Rf4x4, 4>& G,
                   const std::function<void(const std::string&)>& progress = {}) {
  std::array<RatFun, 4> T;  // contracted symbols
  for (int mu = 0; mu < 4; ++mu)
    for (int alpha = 0; alpha < 4; ++alpha) T[mu] += G[alpha][mu][alpha];

  std::vector<std::pair<int, int>> pairs;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu <= mu; ++nu) pairs.emplace_back(mu, nu);

  const auto component = [&](int mu, int nu) {
    RatFun sum;
    if (!G[c_r][mu][nu].is_zero()) sum += G[c_r][mu][nu].derivative(v_r);
    if (!G[c_x][mu][nu].is_zero()) sum += G[c_x][mu][nu].derivative(v_x);
    if (nu == c_r && !T[mu].is_zero()) sum -= T[mu].derivative(v_r);
    if (nu == c_x && !T[mu].is_zero()) sum -= T[mu].derivative(v_x);
    for (int beta = 0; beta < 4; ++beta)
      if (!T[beta].is_zero() && !G[beta][mu][nu].is_zero()) sum += T[beta] * G[beta][mu][nu];
    for (int alpha = 0; alpha < 4; ++alpha)
      for (int beta = 0; beta < 4; ++beta)
        if (!G[alpha][nu][beta].is_zero() && !G[beta][mu][alpha].is_zero())
          sum -= G[alpha][nu][beta] * G[beta][mu][alpha];
    return sum;
  };

  Rf4x4 R;
  const unsigned workers = detail::worker_count();
  if (workers <= 1) {
    for (const auto& [mu, nu] : pairs) {
      R[mu][nu] = R[nu][mu] = component(mu, nu);
      if (progress) progress("ricci " + std::to_string(mu) + std::to_string(nu));
    }
  } else {
    std::vector<std::future<RatFun>> futs;
    futs.reserve(pairs.size());
    for (const auto& [mu, nu] : pairs)
      futs.push_back(std::async(std::launch::async, component, mu, nu));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [mu, nu] = pairs[i];
      R[mu][nu] = R[nu][mu] = futs[i].get();
      if (progress) progress("ricci " + std::to_string(mu) + std::to_string(nu));
    }
  }
  return R;
}

struct CurvatureData {
  SymMetric metric;
  std::array<Rf4x4, 4> gamma;
  Rf4x4 ric;      // lower indices
  Rf4x4 source;   // S^mu_nu = R^mu_nu - (k/4) delta^mu_nu
  RatFun scalar;  // R(g)
};

inline CurvatureData compute_curvature(const FamilyRing& ring,
                                       FaultInjection fault = FaultInjection::none,
                                       const std::function<void(const std::string&)>& progress = {}) {
  const auto note = [&](const std::string& s) {
    if (progress) progress(s);
  };
  CurvatureData d;
  d.metric = build_sym_metric(ring, fault);
  note("metric");
  d.gamma = christoffel(d.metric);
  note("christoffel");
  d.ric = ricci(d.gamma, progress);
  note("ricci");
  Rf4x4 up;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      RatFun sum;
      for (int lam = 0; lam < 4; ++lam)
        if (!d.metric.ginv[mu][lam].is_zero() && !d.ric[lam][nu].is_zero())
          sum += d.metric.ginv[mu][lam] * d.ric[lam][nu];
      up[mu][nu] = sum;
    }
  d.scalar = RatFun();
  for (int mu = 0; mu < 4; ++mu) d.scalar += up[mu][mu];
  d.source = up;
  const RatFun quarter_k(&ring, ring.k_poly * Rational(1, 4));
  for (int mu = 0; mu < 4; ++mu) d.source[mu][mu] -= quarter_k;
  note("source");
  return d;
}

struct CertificateCheck {
  std::string name;
  bool zero = false;
  std::size_t residual_terms = 0;
};

struct CurvatureCertificate {
  bool pass = false;
  std::vector<CertificateCheck> checks;
};

// Verifies that the scalar curvature normalization and every component of the
// trace-free source match their closed forms as identities in the coefficient
// ring. Any nonzero residual is a failure; nothing is evaluated numerically.
inline CurvatureCertificate certify_family(
    const CurvatureData& d, const FamilyRing& ring) {
  CurvatureCertificate cert;
  const auto push = [&cert](const std::string& name, const RatFun& residual) {
    cert.checks.push_back({name, residual.is_zero(), residual.num().n_terms()});
  };

  const Poly ddrr = ring.delta_r.derivative(v_r).derivative(v_r);
  const Poly ddxx = ring.delta_x.derivative(v_x).derivative(v_x);
  push("scalar_normalization",
       d.scalar * RatFun(&ring, ring.rho2) + RatFun(&ring, ddrr + ddxx));

  const auto P = [&ring](Poly p) { return detail::ring_subst(ring, std::move(p)); };
  const Poly a = P(Poly::var(v_a));
  const Poly a2 = a * a;
  const Poly s2 = Poly::constant(1) - Poly::var(v_x, 2);
  const Poly ra = Poly::var(v_r, 2) + a2;
  const Poly& del = ring.source_delta;

  push("source_tt",
       d.source[c_t][c_t] -
           RatFun(&ring, del * (a2 * Poly::var(v_x, 2) - Poly::var(v_r, 2) - Rational(2) * a2),
                  {3, 0, 0}));
  push("source_tphi",
       d.source[c_t][c_phi] - RatFun(&ring, Rational(2) * (a * del * ra * s2), {3, 0, 0}));
  push("source_phit", d.source[c_phi][c_t] + RatFun(&ring, Rational(2) * (a * del), {3, 0, 0}));
  push("source_phiphi_plus_tt", d.source[c_phi][c_phi] + d.source[c_t][c_t]);
  push("source_rr", d.source[c_r][c_r] + RatFun(&ring, del, {2, 0, 0}));
  push("source_xx", d.source[c_x][c_x] - RatFun(&ring, del, {2, 0, 0}));

  static const char* coord[4] = {"t", "r", "x", "phi"};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const bool stated = (mu == nu) || (mu == c_t && nu == c_phi) || (mu == c_phi && nu == c_t);
      if (stated) continue;
      push(std::string("offdiag_") + coord[mu] + coord[nu], d.source[mu][nu]);
    }

  RatFun trace;
  for (int mu = 0; mu < 4; ++mu) trace += d.source[mu][mu];
  push("trace_free", trace);

  cert.pass = true;
  for (const auto& c : cert.checks) cert.pass = cert.pass && c.zero;
  return cert;
}

inline CurvatureCertificate certify_family(
    const FamilyRing& ring, FaultInjection fault = FaultInjection::none,
    const std::function<void(const std::string&)>& progress = {}) {
  const CurvatureData d = compute_curvature(ring, fault, progress);
  return certify_family(d, ring);
}

}  // namespace carterlab
