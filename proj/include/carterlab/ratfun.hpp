#pragma once

#include <array>
#include <utility>
#include <vector>

#include "carterlab/errors.hpp"
#include "carterlab/poly.hpp"

namespace carterlab {

// Coefficient ring data for one member (or the fully symbolic member) of the
// family: the three localized denominators and their nonvanishing partials.
struct FamilyRing {
  Poly rho2;
  Poly delta_r;
  Poly delta_x;
  Poly drho2_r, drho2_x;   // partials of rho2
  Poly ddelta_r;           // d/dr of delta_r
  Poly ddelta_x;           // d/dx of delta_x
  Poly source_delta;       // C3 - a^2 C5
  Poly k_poly;             // curvature scale k as a ring element
  std::vector<std::pair<Var, Rational>> subst;  // empty for the symbolic ring

  static FamilyRing symbolic() {
    FamilyRing R;
    const Poly a2 = Poly::var(v_a, 2);
    const Poly r = Poly::var(v_r), x = Poly::var(v_x);
    const Poly alpha2 = Poly::constant(1) - Rational(1, 3) * (Poly::var(v_Lambda) * a2) +
                        Rational(1, 2) * Poly::var(v_C1);
    const Poly alpha1 = Poly::var(v_C2) - Rational(2) * Poly::var(v_M);
    const Poly alpha0 = a2 + Poly::var(v_C3);
    R.delta_r = Rational(-1, 12) * (Poly::var(v_k) * r.pow(4)) + alpha2 * r.pow(2) +
                alpha1 * r + alpha0;
    R.delta_x = Rational(-1, 12) * (Poly::var(v_k) * a2 * x.pow(4)) - alpha2 * x.pow(2) -
                Poly::var(v_C4) * x + Poly::constant(1) + Poly::var(v_C5);
    R.rho2 = r.pow(2) + a2 * x.pow(2);
    R.source_delta = Poly::var(v_C3) - a2 * Poly::var(v_C5);
    R.k_poly = Poly::var(v_k);
    R.finish();
    return R;
  }

  // Same structure with the nine family parameters pinned to rationals;
  // r and x stay symbolic.
  static FamilyRing substituted(const std::vector<std::pair<Var, Rational>>& s) {
    FamilyRing R = symbolic();
    R.rho2 = R.rho2.eval_partial(s);
    R.delta_r = R.delta_r.eval_partial(s);
    R.delta_x = R.delta_x.eval_partial(s);
    R.source_delta = R.source_delta.eval_partial(s);
    R.k_poly = R.k_poly.eval_partial(s);
    R.subst = s;
    R.finish();
    return R;
  }

  void finish() {
    drho2_r = rho2.derivative(v_r);
    drho2_x = rho2.derivative(v_x);
    ddelta_r = delta_r.derivative(v_r);
    ddelta_x = delta_x.derivative(v_x);
  }
};

// Element of the localization: num / (rho2^p * delta_r^q * delta_x^s).
// Denominator exponents are tracked as the triple dp = {p, q, s}.
class RatFun {
public:
  RatFun() = default;

  RatFun(const FamilyRing* ring, Poly num, std::array<unsigned, 3> dp = {0, 0, 0})
      : ring_(ring), num_(std::move(num)), dp_(dp) {
    if (num_.is_zero()) dp_ = {0, 0, 0};
  }

  static RatFun zero() { return RatFun(); }

  bool is_zero() const { return num_.is_zero(); }
  const Poly& num() const { return num_; }
  const std::array<unsigned, 3>& den_pows() const { return dp_; }
  const FamilyRing* ring() const { return ring_; }

  RatFun operator-() const {
    RatFun out = *this;
    out.num_ = -out.num_;
    return out;
  }

  friend RatFun operator+(const RatFun& f, const RatFun& g) {
    if (f.is_zero()) return g;
    if (g.is_zero()) return f;
    const FamilyRing* ring = f.ring_ ? f.ring_ : g.ring_;
    std::array<unsigned, 3> dp;
    for (int i = 0; i < 3; ++i) dp[i] = std::max(f.dp_[i], g.dp_[i]);
    Poly nf = f.lift_num(ring, dp), ng = g.lift_num(ring, dp);
    RatFun out(ring, nf + ng, dp);
    out.reduce();
    return out;
  }

  friend RatFun operator-(const RatFun& f, const RatFun& g) { return f + (-g); }

  friend RatFun operator*(const RatFun& f, const RatFun& g) {
    if (f.is_zero() || g.is_zero()) return RatFun();
    std::array<unsigned, 3> dp;
    for (int i = 0; i < 3; ++i) dp[i] = f.dp_[i] + g.dp_[i];
    RatFun out(f.ring_ ? f.ring_ : g.ring_, f.num_ * g.num_, dp);
    out.reduce();
    return out;
  }

  friend RatFun operator*(const RatFun& f, const Poly& p) {
    if (f.is_zero() || p.is_zero()) return RatFun();
    RatFun out(f.ring_, f.num_ * p, f.dp_);
    out.reduce();
    return out;
  }

  friend RatFun operator*(const RatFun& f, const Rational& c) {
    if (f.is_zero() || c == 0) return RatFun();
    RatFun out = f;
    out.num_ *= c;
    return out;
  }

  RatFun& operator+=(const RatFun& g) { return *this = *this + g; }
  RatFun& operator-=(const RatFun& g) { return *this = *this - g; }

  // Quotient-rule derivative with respect to r or x. Only the denominators
  // that actually depend on the variable contribute.
  RatFun derivative(Var v) const {
    if (is_zero()) return RatFun();
    if (v != v_r && v != v_x)
      throw DimensionMismatch("rational sections are differentiated in r or x only");
    const FamilyRing& R = *ring_;
    RatFun out(ring_, num_.derivative(v), dp_);
    const Poly& dA = (v == v_r) ? R.drho2_r : R.drho2_x;
    if (dp_[0] > 0 && !dA.is_zero()) {
      std::array<unsigned, 3> dp = dp_;
      ++dp[0];
      out += RatFun(ring_, num_ * dA * Rational(-static_cast<int>(dp_[0])), dp);
    }
    if (v == v_r && dp_[1] > 0) {
      std::array<unsigned, 3> dp = dp_;
      ++dp[1];
      out += RatFun(ring_, num_ * R.ddelta_r * Rational(-static_cast<int>(dp_[1])), dp);
    }
    if (v == v_x && dp_[2] > 0) {
      std::array<unsigned, 3> dp = dp_;
      ++dp[2];
      out += RatFun(ring_, num_ * R.ddelta_x * Rational(-static_cast<int>(dp_[2])), dp);
    }
    out.reduce();
    return out;
  }

  // Cancels denominator factors that divide the numerator exactly.
  void reduce() {
    if (num_.is_zero()) {
      dp_ = {0, 0, 0};
      return;
    }
    if (!ring_) return;
    const Poly* basis[3] = {&ring_->rho2, &ring_->delta_r, &ring_->delta_x};
    for (int i = 0; i < 3; ++i) {
      while (dp_[i] > 0) {
        Poly q;
        if (!num_.try_divide(*basis[i], &q)) break;
        num_ = std::move(q);
        --dp_[i];
      }
    }
  }

  Rational eval(const std::array<Rational, n_vars>& pt) const {
    if (is_zero()) return 0;
    Rational den = 1;
    const Rational bA = ring_->rho2.eval(pt), bB = ring_->delta_r.eval(pt),
                   bC = ring_->delta_x.eval(pt);
    if ((dp_[0] && bA == 0) || (dp_[1] && bB == 0) || (dp_[2] && bC == 0))
      throw EvaluationAtPole("denominator vanishes at the requested point");
    den *= rational_pow(bA, dp_[0]);
    den *= rational_pow(bB, dp_[1]);
    den *= rational_pow(bC, dp_[2]);
    return num_.eval(pt) / den;
  }

private:
  Poly lift_num(const FamilyRing* ring, const std::array<unsigned, 3>& target) const {
    Poly out = num_;
    const Poly* basis[3] = {&ring->rho2, &ring->delta_r, &ring->delta_x};
    for (int i = 0; i < 3; ++i)
      if (target[i] > dp_[i]) out *= basis[i]->pow(target[i] - dp_[i]);
    return out;
  }

  const FamilyRing* ring_ = nullptr;
  Poly num_;
  std::array<unsigned, 3> dp_{0, 0, 0};
};

}  // namespace carterlab
