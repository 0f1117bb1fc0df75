#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "carterlab/blocks.hpp"
#include "carterlab/errors.hpp"
#include "carterlab/params.hpp"

namespace carterlab {

struct Rect {
  double r0, r1, x0, x1;
};

enum class SlabVerdict { strict, reject, indeterminate };

inline const char* to_string(SlabVerdict v) {
  switch (v) {
    case SlabVerdict::strict: return "STRICT";
    case SlabVerdict::reject: return "REJECT";
    default: return "INDETERMINATE";
  }
}

struct FunctionBound {
  std::string name;
  double grid_min = 0.0;
  // grid_min minus a finite-difference Lipschitz slack; positivity of this
  // value certifies positivity on the whole rectangle.
  double guaranteed_min = 0.0;
  double argmin_r = 0.0;
  double argmin_x = 0.0;
};

struct SlabReport {
  SlabVerdict verdict = SlabVerdict::indeterminate;
  std::vector<std::string> failing;  // functions with a nonpositive grid value
  std::vector<FunctionBound> bounds; // rho2, Delta_r, Delta_x, A, Phi in order
  int resolution = 0;

  const FunctionBound& bound(const std::string& name) const {
    for (const auto& b : bounds)
      if (b.name == name) return b;
    throw DimensionMismatch("no bound named " + name);
  }
};

namespace detail {

struct GridScan {
  FunctionBound bound;
  bool any_nonpositive = false;
};

inline GridScan scan_function(const std::string& name,
                              const std::function<double(double, double)>& f,
                              const Rect& rect, int n) {
  GridScan out;
  out.bound.name = name;
  const double hr = (rect.r1 - rect.r0) / n, hx = (rect.x1 - rect.x0) / n;
  double mn = std::numeric_limits<double>::infinity();
  double mr = rect.r0, mx = rect.x0;
  std::vector<double> row_prev, row_cur;
  double max_slope = 0.0;
  row_prev.resize(n + 1);
  row_cur.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double x = rect.x0 + hx * j;
    for (int i = 0; i <= n; ++i) {
      const double r = rect.r0 + hr * i;
      const double v = f(r, x);
      row_cur[i] = v;
      if (v < mn) {
        mn = v;
        mr = r;
        mx = x;
      }
      if (i > 0 && hr > 0.0)
        max_slope = std::max(max_slope, std::abs(v - row_cur[i - 1]) / hr);
      if (j > 0 && hx > 0.0)
        max_slope = std::max(max_slope, std::abs(v - row_prev[i]) / hx);
    }
    std::swap(row_prev, row_cur);
  }
  const double h = std::max(hr, hx);
  out.bound.grid_min = mn;
  // factor 2 guards against slope growth between samples
  out.bound.guaranteed_min = mn - 2.0 * max_slope * h;
  out.bound.argmin_r = mr;
  out.bound.argmin_x = mx;
  out.any_nonpositive = !(mn > 0.0);
  return out;
}

}  // namespace detail

// Classifies a coordinate rectangle: STRICT when rho^2, Delta_r, Delta_x, A,
// Phi are certified positive on all of it, REJECT when any of them attains a
// nonpositive value at a sample point, INDETERMINATE otherwise (resolution is
// doubled up to max_refine times before giving up).
inline SlabReport classify_slab(const FamilyParams& p, const Rect& rect,
                                int base_res = 64, int max_refine = 3) {
  if (!(rect.r1 > rect.r0) || !(rect.x1 > rect.x0))
    throw RangeError("slab rectangle must have positive extent");
  const auto rho2 = [&](double r, double x) { return p.rho2(r, x); };
  const auto dr = [&](double r, double) { return p.delta_r(r); };
  const auto dx = [&](double, double x) { return p.delta_x(x); };
  const auto fa = [&](double r, double x) {
    const double Dr = p.delta_r(r), Dx = p.delta_x(x);
    if (Dr == 0.0 || Dx == 0.0) return -std::numeric_limits<double>::infinity();
    const double a = p.a, s2 = 1.0 - x * x, ra = r * r + a * a;
    return ra * ra / Dr - a * a * s2 * s2 / Dx;
  };
  const auto fphi = [&](double r, double x) {
    const double Dr = p.delta_r(r), Dx = p.delta_x(x);
    if (Dr == 0.0 || Dx == 0.0) return -std::numeric_limits<double>::infinity();
    return (Dr - p.a * p.a * Dx) / (Dr * Dx);
  };

  const std::vector<std::pair<std::string, std::function<double(double, double)>>> fns = {
      {"rho2", rho2}, {"Delta_r", dr}, {"Delta_x", dx}, {"A", fa}, {"Phi", fphi}};

  SlabReport report;
  int n = base_res;
  for (int pass = 0; pass <= max_refine; ++pass, n *= 2) {
    report = SlabReport{};
    report.resolution = n;
    bool all_guaranteed = true, any_reject = false;
    for (const auto& [name, f] : fns) {
      auto scan = detail::scan_function(name, f, rect, n);
      report.bounds.push_back(scan.bound);
      if (scan.any_nonpositive) {
        any_reject = true;
        report.failing.push_back(name);
      }
      if (!(scan.bound.guaranteed_min > 0.0)) all_guaranteed = false;
    }
    if (any_reject) {
      report.verdict = SlabVerdict::reject;
      return report;
    }
    if (all_guaranteed) {
      report.verdict = SlabVerdict::strict;
      return report;
    }
  }
  report.verdict = SlabVerdict::indeterminate;
  return report;
}

}  // namespace carterlab
