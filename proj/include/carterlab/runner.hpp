#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "angular.hpp"
#include "assemble.hpp"
#include "config.hpp"
#include "curvature.hpp"
#include "eigensolve.hpp"
#include "errors.hpp"
#include "evolve.hpp"
#include "extremal.hpp"
#include "frobenius.hpp"
#include "kn.hpp"
#include "modes.hpp"
#include "params.hpp"
#include "radial.hpp"

namespace carterlab {
namespace cli {

namespace detail {

// Shortest round-trip decimal form; the reason CSV output is byte-stable.
inline std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(long v) { return std::to_string(v); }
inline std::string fmt(bool v) { return v ? "1" : "0"; }

inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw RangeError("cannot open output path " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw RangeError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw RangeError("cannot move output into place at " + path);
}

// Writes the data file and the resolved-config sidecar, prints the one-line
// verdict, and turns the pass flag into the process exit code.
inline int finish(const RunConfig& cfg, const std::string& content, bool pass,
                  const std::string& detail) {
  atomic_write(cfg.output.path, content);
  atomic_write(cfg.output.path + ".config.json", cfg.resolved.dump(2) + "\n");
  std::cout << "[carterlab] " << cfg.command << (pass ? " PASS " : " FAIL ") << detail << " -> "
            << cfg.output.path << "\n";
  return pass ? 0 : 1;
}

inline FamilyParams family_of(const RunConfig& cfg) {
  return cfg.params.Q == 0.0 ? FamilyParams::kerr(cfg.params.M, cfg.params.a)
                             : FamilyParams::kerr_newman(cfg.params.M, cfg.params.a, cfg.params.Q);
}

inline json summary_json(const RunConfig& cfg) {
  return {{"schema_version", schema_version}, {"command", cfg.command}};
}

}  // namespace detail

inline int run_cert(const RunConfig& cfg) {
  using detail::fmt;
  FaultInjection fault = FaultInjection::none;
  if (cfg.cert.fault == "flip-tphi-sign") fault = FaultInjection::flip_tphi_sign;
  if (cfg.cert.fault == "shift-rr") fault = FaultInjection::shift_rr;

  CurvatureCertificate sym;
  bool sym_pass = true;
  if (cfg.cert.symbolic) {
    const FamilyRing ring = FamilyRing::symbolic();
    sym = certify_family(ring, fault);
    sym_pass = sym.pass;
  }

  int spot_fail = 0;
  std::vector<bool> spot_ok;
  if (cfg.cert.spot_points > 0) {
    std::mt19937_64 rng(cfg.numerics.seed);
    for (int i = 0; i < cfg.cert.spot_points; ++i) {
      std::vector<std::pair<Var, Rational>> subst = {
          {v_a, random_rational(rng, 3)},      {v_k, random_rational(rng, 3)},
          {v_Lambda, random_rational(rng, 3)}, {v_M, random_rational(rng, 3)},
          {v_C1, random_rational(rng, 4)},     {v_C2, random_rational(rng, 4)},
          {v_C3, random_rational(rng, 4)},     {v_C4, random_rational(rng, 4)},
          {v_C5, random_rational(rng, 4)}};
      const FamilyRing ring = FamilyRing::substituted(subst);
      const CurvatureCertificate c = certify_family(ring, fault);
      spot_ok.push_back(c.pass);
      if (!c.pass) ++spot_fail;
    }
  }

  const bool pass = sym_pass && spot_fail == 0;
  std::string content;
  if (cfg.output.format == "csv") {
    content = "check,zero,residual_terms\n";
    for (const auto& c : sym.checks)
      content += c.name + "," + fmt(c.zero) + "," + fmt(static_cast<long>(c.residual_terms)) + "\n";
    for (std::size_t i = 0; i < spot_ok.size(); ++i)
      content += "spot_point_" + std::to_string(i) + "," + fmt(static_cast<bool>(spot_ok[i])) + ",0\n";
  } else {
    json j = detail::summary_json(cfg);
    j["fault"] = cfg.cert.fault;
    j["symbolic"] = {{"run", cfg.cert.symbolic}, {"pass", sym_pass}};
    json checks = json::array();
    for (const auto& c : sym.checks)
      checks.push_back({{"name", c.name}, {"zero", c.zero}, {"residual_terms", c.residual_terms}});
    j["symbolic"]["checks"] = checks;
    j["spot"] = {{"points", cfg.cert.spot_points}, {"failures", spot_fail}};
    j["pass"] = pass;
    content = j.dump(2) + "\n";
  }

  std::string detail_line;
  if (cfg.cert.symbolic) {
    int zero = 0;
    for (const auto& c : sym.checks) zero += c.zero ? 1 : 0;
    detail_line += "symbolic " + std::to_string(zero) + "/" + std::to_string(sym.checks.size()) +
                   " identities zero";
  }
  if (cfg.cert.spot_points > 0) {
    if (!detail_line.empty()) detail_line += "; ";
    detail_line += "spot " + std::to_string(cfg.cert.spot_points - spot_fail) + "/" +
                   std::to_string(cfg.cert.spot_points) + " points zero";
  }
  if (detail_line.empty()) detail_line = "nothing to check";
  return detail::finish(cfg, content, pass, detail_line);
}

inline int run_slab_spectrum(const RunConfig& cfg) {
  using detail::fmt;
  const FamilyParams p = detail::family_of(cfg);
  const SlabOperator op = build_slab_operator(p, cfg.slab.rect, cfg.slab.nr, cfg.slab.nx,
                                              cfg.slab.m, cfg.slab.flat);
  const SpectrumResult sr =
      lowest_modes(op, cfg.numerics.count, cfg.numerics.tol, cfg.numerics.seed);

  const double residual_budget = 1e-6;
  const bool pass = sr.max_residual <= residual_budget;

  std::string content;
  if (cfg.output.format == "csv") {
    content = "index,lambda\n";
    for (std::size_t j = 0; j < sr.lambda.size(); ++j)
      content += std::to_string(j) + "," + fmt(sr.lambda[j]) + "\n";
  } else {
    json j = detail::summary_json(cfg);
    j["lambda"] = sr.lambda;
    j["max_residual"] = sr.max_residual;
    j["method"] = sr.method;
    j["pass"] = pass;
    content = j.dump(2) + "\n";
  }
  return detail::finish(cfg, content, pass,
                        "lowest " + std::to_string(sr.lambda.size()) + " tones, max residual " +
                            fmt(sr.max_residual) + " (budget " + fmt(residual_budget) + ")");
}

inline int run_slab_evolve(const RunConfig& cfg) {
  using detail::fmt;
  const FamilyParams p = detail::family_of(cfg);
  const SlabOperator op = build_slab_operator(p, cfg.slab.rect, cfg.slab.nr, cfg.slab.nx,
                                              cfg.slab.m, cfg.slab.flat);
  const int n = static_cast<int>(op.size());

  Eigen::VectorXcd u0(n), w0(n);
  if (cfg.evolve.data == "affine") {
    u0.setOnes();
    w0.setOnes();
  } else if (cfg.evolve.data == "eigenmode") {
    const SpectrumResult sr = lowest_modes(op, std::max(cfg.numerics.count, cfg.evolve.mode_index + 1),
                                           cfg.numerics.tol, cfg.numerics.seed);
    u0 = sr.psi.col(cfg.evolve.mode_index).cast<std::complex<double>>();
    w0.setZero();
  } else {  // random-mean-zero
    std::mt19937_64 rng(cfg.numerics.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
      u0[k] = gauss(rng);
      w0[k] = gauss(rng);
    }
    u0.array() -= pi0_coefficient(op, u0);
    w0.array() -= pi0_coefficient(op, w0);
  }

  EvolveOptions opt;
  opt.dt = cfg.numerics.dt;
  opt.steps = static_cast<std::size_t>(cfg.numerics.steps);
  opt.save_every = std::max<std::size_t>(1, opt.steps / 200);
  const EvolveResult er = evolve_slab(op, u0, w0, opt);

  // Step-halving disagreement over a short prefix. The midpoint rule conserves
  // the energy at any dt, so conservation alone cannot flag a wild time step.
  const std::size_t prefix = std::min<std::size_t>(opt.steps, 64);
  EvolveOptions o1{opt.dt, prefix, 0};
  EvolveOptions o2{opt.dt / 2.0, 2 * prefix, 0};
  const EvolveResult e1 = evolve_slab(op, u0, w0, o1);
  const EvolveResult e2 = evolve_slab(op, u0, w0, o2);
  const Eigen::VectorXcd du = e1.u.back() - e2.u.back(), dw = e1.w.back() - e2.w.back();
  const double ref = std::sqrt(std::max(weighted_state_norm2(op, e2.u.back(), e2.w.back()), 1e-300));
  const double halving = std::sqrt(weighted_state_norm2(op, du, dw)) / ref;

  const bool pass = er.energy_drift_rel <= cfg.evolve.drift_tol && halving <= cfg.evolve.accuracy_tol;

  std::string content;
  if (cfg.output.format == "csv") {
    content = "t,energy,re_pi0_u,im_pi0_u,re_pi0_w,im_pi0_w\n";
    for (std::size_t s = 0; s < er.save_times.size(); ++s) {
      const double t = er.save_times[s];
      const std::size_t ei =
          std::min(er.energy.size() - 1, static_cast<std::size_t>(std::llround(t / opt.dt)));
      content += fmt(t) + "," + fmt(er.energy[ei]) + "," + fmt(er.pi0_u[s].real()) + "," +
                 fmt(er.pi0_u[s].imag()) + "," + fmt(er.pi0_w[s].real()) + "," +
                 fmt(er.pi0_w[s].imag()) + "\n";
    }
  } else {
    json j = detail::summary_json(cfg);
    j["data"] = cfg.evolve.data;
    j["method"] = er.method;
    j["dt"] = opt.dt;
    j["steps"] = opt.steps;
    j["energy_drift_rel"] = er.energy_drift_rel;
    j["halving_error"] = halving;
    j["pass"] = pass;
    json t = json::array(), e = json::array(), pu = json::array(), pw = json::array();
    for (std::size_t s = 0; s < er.save_times.size(); ++s) {
      const std::size_t ei = std::min(
          er.energy.size() - 1, static_cast<std::size_t>(std::llround(er.save_times[s] / opt.dt)));
      t.push_back(er.save_times[s]);
      e.push_back(er.energy[ei]);
      pu.push_back({er.pi0_u[s].real(), er.pi0_u[s].imag()});
      pw.push_back({er.pi0_w[s].real(), er.pi0_w[s].imag()});
    }
    j["series"] = {{"t", t}, {"energy", e}, {"pi0_u", pu}, {"pi0_w", pw}};
    content = j.dump(2) + "\n";
  }
  return detail::finish(cfg, content, pass,
                        "energy drift " + fmt(er.energy_drift_rel) + " (budget " +
                            fmt(cfg.evolve.drift_tol) + "), step-halving error " + fmt(halving) +
                            " (budget " + fmt(cfg.evolve.accuracy_tol) + ")");
}

inline int run_modes(const RunConfig& cfg) {
  using detail::fmt;
  const FamilyParams p = detail::family_of(cfg);
  const AngularBC bc = cfg.modes.bc == "neumann"
                           ? AngularBC::neumann
                           : (cfg.modes.bc == "dirichlet" ? AngularBC::dirichlet : AngularBC::regular);
  // regular means regular at both poles; the slab window only applies to the
  // interior boundary conditions
  const double ax0 = bc == AngularBC::regular ? -1.0 : cfg.slab.rect.x0;
  const double ax1 = bc == AngularBC::regular ? 1.0 : cfg.slab.rect.x1;

  if (cfg.modes.scan_steps > 0) {
    std::string content = "omega,index,lambda\n";
    json rows = json::array();
    for (int k = 0; k < cfg.modes.scan_steps; ++k) {
      const double w =
          cfg.modes.scan_steps == 1
              ? cfg.modes.omega0
              : cfg.modes.omega0 + (cfg.modes.omega1 - cfg.modes.omega0) * k / (cfg.modes.scan_steps - 1);
      const auto lam = angular_eigenvalues(p, w, cfg.slab.m, ax0, ax1, bc, cfg.numerics.count);
      for (std::size_t j = 0; j < lam.size(); ++j) {
        content += fmt(w) + "," + std::to_string(j) + "," + fmt(lam[j]) + "\n";
        rows.push_back({{"omega", w}, {"index", j}, {"lambda", lam[j]}});
      }
    }
    if (cfg.output.format != "csv") {
      json j = detail::summary_json(cfg);
      j["scan"] = rows;
      j["pass"] = true;
      content = j.dump(2) + "\n";
    }
    return detail::finish(cfg, content, true,
                          "angular scan over " + std::to_string(cfg.modes.scan_steps) + " frequencies");
  }

  const auto lam =
      angular_eigenvalues(p, cfg.modes.Omega, cfg.slab.m, ax0, ax1, bc, cfg.numerics.count);
  ModeParams mp;
  mp.bg = p;
  mp.Omega = cfg.modes.Omega;
  mp.m = cfg.slab.m;
  mp.lambda = lam[static_cast<std::size_t>(cfg.modes.lambda_index)];

  const double r0 = cfg.slab.rect.r0, r1 = cfg.slab.rect.r1;
  const RadialTrajectory t1 = integrate_radial(mp, r0, r1, 1.0, 0.0, cfg.numerics.tol);
  const RadialTrajectory t2 = integrate_radial(mp, r0, r1, 0.0, 1.0, cfg.numerics.tol);
  const PairWronskian pw = pair_wronskian(mp, t1, t2);
  const double launch = p.delta_r(r0);
  const double drift_budget = 1e-8 * std::max(1.0, std::abs(launch));
  bool pass = pw.drift <= drift_budget;

  bool have_horizon = false;
  double r_plus = 0.0;
  std::complex<double> exponent;
  bool log_branch = false;
  try {
    const HorizonConstants hc = horizon_constants(cfg.params.M, cfg.params.a, cfg.params.Q);
    const FrobeniusData fd =
        frobenius_data(mp, SeparatedVar::radial, hc.r_plus, +1, cfg.numerics.order);
    have_horizon = true;
    r_plus = hc.r_plus;
    exponent = fd.s_plus;
    log_branch = fd.log_branch;
  } catch (const Superextremal&) {
    // no horizon, no indicial data to report
  }

  std::string content;
  if (cfg.output.format == "csv") {
    content = "key,value\n";
    for (std::size_t j = 0; j < lam.size(); ++j)
      content += "angular_lambda_" + std::to_string(j) + "," + fmt(lam[j]) + "\n";
    content += "radial_lambda," + fmt(mp.lambda.real()) + "\n";
    content += "launch_wronskian," + fmt(launch) + "\n";
    content += "wronskian_drift," + fmt(pw.drift) + "\n";
    if (have_horizon) {
      content += "r_plus," + fmt(r_plus) + "\n";
      content += "exponent_re," + fmt(exponent.real()) + "\n";
      content += "exponent_im," + fmt(exponent.imag()) + "\n";
      content += "log_branch," + fmt(log_branch) + "\n";
    }
  } else {
    json j = detail::summary_json(cfg);
    j["angular"] = {{"bc", cfg.modes.bc}, {"Omega", cfg.modes.Omega}, {"m", cfg.slab.m},
                    {"lambda", lam}};
    j["radial"] = {{"r0", r0},
                   {"r1", r1},
                   {"lambda_index", cfg.modes.lambda_index},
                   {"lambda", mp.lambda.real()},
                   {"launch_wronskian", launch},
                   {"wronskian_drift", pw.drift}};
    if (have_horizon)
      j["horizon"] = {{"r_plus", r_plus},
                      {"exponent", {exponent.real(), exponent.imag()}},
                      {"log_branch", log_branch}};
    else
      j["horizon"] = nullptr;
    j["pass"] = pass;
    content = j.dump(2) + "\n";
  }
  return detail::finish(cfg, content, pass,
                        "wronskian drift " + fmt(pw.drift) + " (budget " + fmt(drift_budget) + ")");
}

inline int run_kn_check(const RunConfig& cfg) {
  using detail::fmt;
  const double M = cfg.params.M, a = cfg.params.a, Q = cfg.params.Q;
  const HorizonConstants hc = horizon_constants(M, a, Q);
  const MarginReport margin = nontrapping_margin(M, a, Q, cfg.wall.R_w, cfg.numerics.resolution);

  std::array<std::array<double, 3>, 3> sens{};
  bool have_sens = !hc.extremal;
  if (have_sens) sens = horizon_sensitivity(M, a, Q);

  ObstructionReport jr{};
  // a degenerate horizon has no two-root potential profile to integrate
  const bool have_jordan = !hc.extremal;
  if (have_jordan) jr = wall_jordan_obstruction(M, a, Q, cfg.wall.R_w);

  const double gap_budget = 1e-8;
  const bool pass = margin.identity_exact && (!have_jordan || jr.rel_gap <= gap_budget);

  static const char* row_names[3] = {"r_plus", "Omega_H", "kappa_plus"};
  static const char* col_names[3] = {"M", "a", "Q"};

  std::string content;
  if (cfg.output.format == "csv") {
    content = "key,value\n";
    content += "r_plus," + fmt(hc.r_plus) + "\n";
    content += "r_minus," + fmt(hc.r_minus) + "\n";
    content += "Omega_H," + fmt(hc.Omega_H) + "\n";
    content += "kappa_plus," + fmt(hc.kappa_plus) + "\n";
    content += "extremal," + fmt(hc.extremal) + "\n";
    content += "identity_exact," + fmt(margin.identity_exact) + "\n";
    content += "factor_max," + fmt(margin.factor_max) + "\n";
    content += "argmax," + fmt(margin.argmax) + "\n";
    content += "nontrapping," + fmt(margin.nontrapping) + "\n";
    if (have_sens)
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 3; ++c)
          content += std::string("d_") + row_names[i] + "_d" + col_names[c] + "," +
                     fmt(sens[i][c]) + "\n";
    if (have_jordan) {
      content += "jordan_closed_form," + fmt(jr.closed_form) + "\n";
      content += "jordan_numeric," + fmt(jr.numeric) + "\n";
      content += "jordan_rel_gap," + fmt(jr.rel_gap) + "\n";
      content += "jordan_pointwise_gap," + fmt(jr.pointwise_gap) + "\n";
      content += "psi0_wall," + fmt(jr.psi0_wall) + "\n";
      content += "obstructed," + fmt(jr.obstructed) + "\n";
    }
  } else {
    json j = detail::summary_json(cfg);
    j["horizon"] = {{"r_plus", hc.r_plus},
                    {"r_minus", hc.r_minus},
                    {"Omega_H", hc.Omega_H},
                    {"kappa_plus", hc.kappa_plus},
                    {"extremal", hc.extremal}};
    if (have_sens) {
      json s = json::object();
      for (int i = 0; i < 3; ++i) {
        json row = json::object();
        for (int c = 0; c < 3; ++c) row[col_names[c]] = sens[i][c];
        s[row_names[i]] = row;
      }
      j["sensitivity"] = s;
    } else {
      j["sensitivity"] = nullptr;
    }
    j["wall"] = {{"R_w", cfg.wall.R_w},
                 {"identity_exact", margin.identity_exact},
                 {"factor_max", margin.factor_max},
                 {"argmax", margin.argmax},
                 {"nontrapping", margin.nontrapping}};
    if (have_jordan)
      j["jordan"] = {{"closed_form", jr.closed_form},
                     {"numeric", jr.numeric},
                     {"rel_gap", jr.rel_gap},
                     {"pointwise_gap", jr.pointwise_gap},
                     {"psi0_wall", jr.psi0_wall},
                     {"obstructed", jr.obstructed}};
    else
      j["jordan"] = nullptr;
    j["pass"] = pass;
    content = j.dump(2) + "\n";
  }

  std::string detail_line = std::string("sign identity ") +
                            (margin.identity_exact ? "exact" : "BROKEN") + ", margin " +
                            fmt(margin.factor_max);
  if (have_jordan) detail_line += ", jordan gap " + fmt(jr.rel_gap);
  return detail::finish(cfg, content, pass, detail_line);
}

inline int run_horizon_extremal(const RunConfig& cfg) {
  using detail::fmt;
  const double M = cfg.params.M, a = cfg.params.a, Q = cfg.params.Q;

  const auto build_state = [&](int nr, double dc) {
    ExtremalState s = make_extremal_state(M, a, Q, nr, cfg.extremal.nth, dc);
    const double span = s.r.back() - M;
    const auto radial = [&](double r) -> double {
      const double t = r - M;
      if (cfg.extremal.profile == "constant") return cfg.extremal.amplitude;
      if (cfg.extremal.profile == "slope-bump") {
        const double B = 0.5 * span;
        if (t >= B) return 0.0;
        const double w = B - t;
        return cfg.extremal.amplitude * t * w * w * w * w * w / std::pow(B, 5);
      }
      // zero-bump: u and its slope both vanish at the horizon, so the charge is
      // analytically zero
      const double B = 0.5 * span;
      if (t >= B) return 0.0;
      return cfg.extremal.amplitude * 16.0 * t * t * (B - t) * (B - t) / (B * B * B * B);
    };
    for (int q = 0; q < s.nth(); ++q)
      for (int i = 0; i < s.nr(); ++i) s.u[static_cast<std::size_t>(s.idx(i, q))] = radial(s.r[i]);
    return s;
  };

  const int nr = std::max(5, cfg.numerics.resolution);
  const double dv = cfg.numerics.dt;
  const long steps = cfg.numerics.steps;
  ExtremalState s0 = build_state(nr, cfg.extremal.delta_c);
  const double charge0 = extremal_charge(s0);

  const auto evolve = [&](const ExtremalState& st, double h, long n) {
    return a == 0.0 ? evolve_extremal_rn(st, h, n) : evolve_extremal_kn(st, h, n);
  };
  auto [sf, series] = evolve(s0, dv, steps);

  // order probe: half the radial resolution, double the step, half the count
  double order_estimate = 0.0;
  bool have_order = false;
  const int nrc = std::max(5, (nr + 1) / 2);
  const long stepsc = std::max<long>(1, steps / 2);
  if (nrc < nr && steps >= 2) {
    ExtremalState sc = build_state(nrc, cfg.extremal.delta_c);
    auto [scf, coarse] = evolve(sc, 2.0 * dv, stepsc);
    if (coarse.drift > 1e-12 && series.drift > 1e-12) {
      order_estimate = std::log2(coarse.drift / series.drift);
      have_order = true;
    }
  }

  double residual = 0.0;
  bool have_residual = false;
  try {
    residual = horizon_equation_residual(sf);
    have_residual = true;
  } catch (const InsufficientHistory&) {
  }

  const double drift_budget = cfg.extremal.drift_tol * std::max(1.0, std::abs(charge0));
  const bool pass = series.drift <= drift_budget;

  std::string content;
  if (cfg.output.format == "csv") {
    content = "v,charge,mean_du,mean_u,mean_p\n";
    for (std::size_t k = 0; k < series.v.size(); ++k)
      content += fmt(series.v[k]) + "," + fmt(series.charge[k]) + "," + fmt(series.mean_du[k]) +
                 "," + fmt(series.mean_u[k]) + "," + fmt(series.mean_p[k]) + "\n";
  } else {
    json j = detail::summary_json(cfg);
    j["scheme"] = a == 0.0 ? "spherical-characteristic" : "rotating-reduced";
    j["charge0"] = charge0;
    j["drift"] = series.drift;
    j["drift_budget"] = drift_budget;
    j["plateau"] = series.plateau;
    j["late_mean_du"] = series.late_mean_du;
    j["tangential_late"] = series.tangential_late;
    j["obstruction"] = series.obstruction;
    if (have_order)
      j["order_estimate"] = order_estimate;
    else
      j["order_estimate"] = nullptr;
    if (have_residual)
      j["horizon_residual"] = residual;
    else
      j["horizon_residual"] = nullptr;
    j["pass"] = pass;
    j["series"] = {{"v", series.v},
                   {"charge", series.charge},
                   {"mean_du", series.mean_du},
                   {"mean_u", series.mean_u},
                   {"mean_p", series.mean_p}};
    content = j.dump(2) + "\n";
  }

  std::string detail_line = "charge drift " + fmt(series.drift) + " (budget " + fmt(drift_budget) +
                            ")" + (series.obstruction ? ", decay obstruction raised" : "");
  if (have_order) detail_line += ", order estimate " + fmt(order_estimate);
  return detail::finish(cfg, content, pass, detail_line);
}

inline int run_config(const RunConfig& cfg) {
  if (cfg.command == "cert") return run_cert(cfg);
  if (cfg.command == "slab-spectrum") return run_slab_spectrum(cfg);
  if (cfg.command == "slab-evolve") return run_slab_evolve(cfg);
  if (cfg.command == "modes") return run_modes(cfg);
  if (cfg.command == "kn-check") return run_kn_check(cfg);
  if (cfg.command == "horizon-extremal") return run_horizon_extremal(cfg);
  throw SchemaError("unknown command \"" + cfg.command + "\"");
}

}  // namespace cli
}  // namespace carterlab
