#pragma once

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <vector>

#include "carterlab/frobenius.hpp"
#include "carterlab/modes.hpp"

namespace carterlab {

enum class AngularBC { neumann, dirichlet, regular };

namespace detail {

// -(Delta_x S')' + Vpot S = lambda S with Vpot = nu^2/Delta_x - (k/3) a^2 x^2
struct AngularProblem {
  FamilyParams bg;
  double Omega = 0.0;
  int m = 0;
  double x0 = 0.0, x1 = 0.0;
  AngularBC bc = AngularBC::neumann;
  double launch_offset = 1e-5;  // 10 sqrt(integrator tol) in the local variable
  double int_tol = 1e-12;

  double vpot(double x) const {
    const double D = bg.delta_x(x);
    const double nu = bg.a * (1.0 - x * x) * Omega - m;
    return nu * nu / D - bg.k / 3.0 * bg.a * bg.a * x * x;
  }

  ModeParams mode(double lambda) const {
    ModeParams mp;
    mp.Omega = Omega;
    mp.m = m;
    mp.lambda = lambda;
    mp.bg = bg;
    return mp;
  }

  // Pruefer chart S = rho sin th, Delta S' = rho cos th.
  double theta_from(double S, double DSp) const { return std::atan2(S, DSp); }

  // launch phase at the integration start (just inside for regular ends)
  std::pair<double, double> left_start(double lambda) const {
    switch (bc) {
      case AngularBC::neumann:
        return {x0, M_PI / 2.0};
      case AngularBC::dirichlet:
        return {x0, 0.0};
      case AngularBC::regular: {
        const auto fd = frobenius_data(mode(lambda), SeparatedVar::angular, x0, +1, 14);
        const double xs = x0 + launch_offset;
        const auto [S, Sx] = fd.eval(xs);
        return {xs, theta_from(S.real(), bg.delta_x(xs) * Sx.real())};
      }
    }
    throw RangeError("unknown boundary condition");
  }

  // target phase representative in (0, pi] at the right end of integration
  std::pair<double, double> right_target(double lambda) const {
    switch (bc) {
      case AngularBC::neumann:
        return {x1, M_PI / 2.0};
      case AngularBC::dirichlet:
        return {x1, M_PI};
      case AngularBC::regular: {
        const auto fd = frobenius_data(mode(lambda), SeparatedVar::angular, x1, -1, 14);
        const double xs = x1 - launch_offset;
        const auto [S, Sx] = fd.eval(xs);
        double th = theta_from(S.real(), bg.delta_x(xs) * Sx.real());
        while (th <= 0.0) th += M_PI;
        while (th > M_PI) th -= M_PI;
        return {xs, th};
      }
    }
    throw RangeError("unknown boundary condition");
  }

  double shoot_phase(double lambda, double xa, double xb, double theta0) const {
    namespace od = boost::numeric::odeint;
    std::vector<double> th{theta0};
    auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy, double x) {
      const double c = std::cos(y[0]), s = std::sin(y[0]);
      dy[0] = c * c / bg.delta_x(x) + (lambda - vpot(x)) * s * s;
    };
    try {
      od::integrate_adaptive(
          od::make_controlled(int_tol, int_tol, od::runge_kutta_dopri5<std::vector<double>>()),
          rhs, th, xa, xb, 1e-4);
    } catch (const std::exception& e) {
      throw StepFailure(std::string("phase integration stalled: ") + e.what());
    }
    return th[0];
  }

  // counting function: zero at the j-th eigenvalue, strictly increasing
  double mismatch(double lambda, int j) const {
    const auto [xa, th0] = left_start(lambda);
    const auto [xb, target] = right_target(lambda);
    return shoot_phase(lambda, xa, xb, th0) - target - j * M_PI;
  }
};

}  // namespace detail

// First `count` eigenvalues by Pruefer-phase shooting: the phase mismatch is
// monotone in lambda, so bracket by doubling and bisect, then polish by
// secant. Ordering and multiplicity-one come with the phase count.
inline std::vector<double> angular_eigenvalues(const FamilyParams& bg, double Omega, int m,
                                               double x0, double x1, AngularBC bc, int count,
                                               double tol = 1e-10) {
  if (!(x1 > x0)) throw RangeError("angular interval is empty");
  if (count < 1) throw RangeError("eigenvalue count must be positive");
  detail::AngularProblem prob;
  prob.bg = bg;
  prob.Omega = Omega;
  prob.m = m;
  prob.x0 = x0;
  prob.x1 = x1;
  prob.bc = bc;
  const int probe = 64;
  for (int i = 0; i <= probe; ++i) {
    const double x = x0 + (x1 - x0) * i / probe;
    const bool endpoint = (i == 0 || i == probe);
    const double D = bg.delta_x(x);
    if (endpoint && bc == AngularBC::regular) continue;
    if (!(D > 0.0)) throw RangeError("angular factor must be positive on the interval");
  }
  double vmin = 0.0;
  for (int i = 1; i < probe; ++i)
    vmin = std::min(vmin, prob.vpot(x0 + (x1 - x0) * i / probe));

  std::vector<double> out;
  double lo_seed = vmin - 1.0;
  for (int j = 0; j < count; ++j) {
    double lo = lo_seed, hi = lo + 4.0;
    double flo = prob.mismatch(lo, j);
    int guard = 0;
    while (flo > 0.0) {
      lo -= (hi - lo);
      flo = prob.mismatch(lo, j);
      if (++guard > 60) throw BracketFailure("no lower bracket for the phase count");
    }
    double fhi = prob.mismatch(hi, j);
    guard = 0;
    while (fhi <= 0.0) {
      hi += (hi - lo);
      fhi = prob.mismatch(hi, j);
      if (++guard > 60) throw BracketFailure("no upper bracket for the phase count");
    }
    for (int it = 0; it < 60 && hi - lo > tol * (1.0 + std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = prob.mismatch(mid, j);
      if (fm <= 0.0) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
        fhi = fm;
      }
    }
    // secant polish inside the bracket
    double va = lo, vb = hi, fa = flo, fb = fhi;
    for (int it = 0; it < 4 && fb != fa; ++it) {
      const double vc = vb - fb * (vb - va) / (fb - fa);
      if (!(vc > lo && vc < hi)) break;
      va = vb;
      fa = fb;
      vb = vc;
      fb = prob.mismatch(vb, j);
    }
    out.push_back(std::abs(fb) < std::abs(fa) ? vb : va);
    lo_seed = out.back();
  }
  return out;
}

// Samples of the eigenfunction (or any solution at given lambda) launched
// from the left boundary condition, normalized to unit max magnitude.
inline std::vector<double> angular_solution_samples(const FamilyParams& bg, double Omega, int m,
                                                    double x0, double x1, AngularBC bc,
                                                    double lambda,
                                                    const std::vector<double>& xs,
                                                    std::vector<double>* deriv = nullptr) {
  namespace od = boost::numeric::odeint;
  detail::AngularProblem prob;
  prob.bg = bg;
  prob.Omega = Omega;
  prob.m = m;
  prob.x0 = x0;
  prob.x1 = x1;
  prob.bc = bc;
  if (xs.size() < 2) throw RangeError("need at least two sample points");

  double xa = x0;
  std::vector<double> y(2);
  switch (bc) {
    case AngularBC::neumann:
      y = {1.0, 0.0};
      break;
    case AngularBC::dirichlet:
      y = {0.0, 1.0};
      break;
    case AngularBC::regular: {
      const auto fd = frobenius_data(prob.mode(lambda), SeparatedVar::angular, x0, +1, 14);
      xa = x0 + prob.launch_offset;
      const auto [S, Sx] = fd.eval(xa);
      y = {S.real(), Sx.real()};
      break;
    }
  }
  if (xs.front() <= xa || xs.back() >= x1)
    throw RangeError("sample points must lie strictly inside the launch window");

  auto rhs = [&](const std::vector<double>& s, std::vector<double>& ds, double x) {
    const double D = bg.delta_x(x), Dp = bg.delta_x_prime(x);
    ds[0] = s[1];
    ds[1] = -(Dp * s[1] + (lambda - prob.vpot(x)) * s[0]) / D;
  };
  std::vector<double> ts{xa};
  ts.insert(ts.end(), xs.begin(), xs.end());
  std::vector<double> S, dS;
  try {
    od::integrate_times(
        od::make_controlled(prob.int_tol, prob.int_tol,
                            od::runge_kutta_dopri5<std::vector<double>>()),
        rhs, y, ts.begin(), ts.end(), 1e-4, [&](const std::vector<double>& s, double) {
          S.push_back(s[0]);
          dS.push_back(s[1]);
        });
  } catch (const std::exception& e) {
    throw StepFailure(std::string("eigenfunction sampling stalled: ") + e.what());
  }
  S.erase(S.begin());
  dS.erase(dS.begin());
  double scale = 0.0;
  for (double v : S) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  for (double& v : S) v /= scale;
  if (deriv) {
    for (double& v : dS) v /= scale;
    *deriv = dS;
  }
  return S;
}

}  // namespace carterlab
