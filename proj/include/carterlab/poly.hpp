#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "carterlab/errors.hpp"
#include "carterlab/rational.hpp"

namespace carterlab {

// Variables of the coefficient ring. The first nine are family parameters,
// the last two are the coordinates.
enum Var : unsigned {
  v_a = 0,
  v_k,
  v_Lambda,
  v_M,
  v_C1,
  v_C2,
  v_C3,
  v_C4,
  v_C5,
  v_r,
  v_x,
  n_vars
};

inline const char* var_name(Var v) {
  static const char* names[n_vars] = {"a",  "k",  "Lambda", "M",  "C1", "C2",
                                      "C3", "C4", "C5",     "r",  "x"};
  return names[static_cast<unsigned>(v)];
}

// Sparse multivariate polynomial over Q. Keys are exponent vectors; the map
// order is lex, which is a monomial order, so rbegin() is the leading term.
// Invariant: no stored coefficient is zero.
class Poly {
public:
  using Key = std::array<std::uint8_t, n_vars>;
  using Terms = std::map<Key, Rational>;

  Poly() = default;

  static Poly constant(const Rational& c) {
    Poly p;
    if (c != 0) p.terms_[Key{}] = c;
    return p;
  }

  static Poly var(Var v, unsigned power = 1) {
    Poly p;
    Key k{};
    if (power > 255) throw DimensionMismatch("monomial exponent exceeds 255");
    k[static_cast<unsigned>(v)] = static_cast<std::uint8_t>(power);
    p.terms_[k] = 1;
    return p;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t n_terms() const noexcept { return terms_.size(); }

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly& operator+=(const Poly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }

  Poly& operator-=(const Poly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  Poly operator-() const {
    Poly p(*this);
    for (auto& [k, c] : p.terms_) c = -c;
    return p;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.add_term(key_mul(ka, kb), ca * cb);
    return out;
  }

  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
  }

  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }

  Poly pow(unsigned e) const {
    Poly out = constant(1);
    Poly base = *this;
    while (e) {
      if (e & 1u) out *= base;
      if (e >>= 1u) base *= base;
    }
    return out;
  }

  Poly derivative(Var v) const {
    const unsigned i = static_cast<unsigned>(v);
    Poly out;
    for (const auto& [k, c] : terms_) {
      if (k[i] == 0) continue;
      Key kk = k;
      kk[i] = static_cast<std::uint8_t>(k[i] - 1);
      out.add_term(kk, c * static_cast<int>(k[i]));
    }
    return out;
  }

  unsigned degree(Var v) const {
    const unsigned i = static_cast<unsigned>(v);
    unsigned d = 0;
    for (const auto& [k, c] : terms_) d = std::max<unsigned>(d, k[i]);
    return d;
  }

  Rational eval(const std::array<Rational, n_vars>& vals) const {
    // Per-variable power tables keep this near-linear in term count.
    std::array<std::vector<Rational>, n_vars> pows;
    for (unsigned i = 0; i < n_vars; ++i) pows[i].push_back(Rational(1));
    Rational sum = 0;
    for (const auto& [k, c] : terms_) {
      Rational t = c;
      for (unsigned i = 0; i < n_vars; ++i) {
        if (k[i] == 0) continue;
        auto& pv = pows[i];
        while (pv.size() <= k[i]) pv.push_back(pv.back() * vals[i]);
        t *= pv[k[i]];
      }
      sum += t;
    }
    return sum;
  }

  // Substitutes rational values for a subset of variables, keeping the rest.
  Poly eval_partial(const std::vector<std::pair<Var, Rational>>& subst) const {
    std::array<int, n_vars> which;
    which.fill(-1);
    for (std::size_t j = 0; j < subst.size(); ++j)
      which[static_cast<unsigned>(subst[j].first)] = static_cast<int>(j);
    Poly out;
    for (const auto& [k, c] : terms_) {
      Rational coeff = c;
      Key kk = k;
      for (unsigned i = 0; i < n_vars; ++i) {
        if (which[i] < 0 || k[i] == 0) continue;
        coeff *= rational_pow(subst[static_cast<std::size_t>(which[i])].second, k[i]);
        kk[i] = 0;
      }
      out.add_term(kk, coeff);
    }
    return out;
  }

  // Exact division test. Single-divisor reduction in lex order: if *this is
  // divisible the leading term stays divisible at every step, so the first
  // failed leading-term check is conclusive.
  bool try_divide(const Poly& d, Poly* quotient = nullptr) const {
    if (d.is_zero()) throw DimensionMismatch("division by zero polynomial");
    Poly f = *this;
    Poly q;
    const auto& [dk, dc] = *d.terms_.rbegin();
    while (!f.is_zero()) {
      const auto& [fk, fc] = *f.terms_.rbegin();
      Key mono;
      for (unsigned i = 0; i < n_vars; ++i) {
        if (fk[i] < dk[i]) return false;
        mono[i] = static_cast<std::uint8_t>(fk[i] - dk[i]);
      }
      const Rational c = fc / dc;
      q.add_term(mono, c);
      for (const auto& [k, v] : d.terms_) f.add_term(key_mul(mono, k), -c * v);
    }
    if (quotient) *quotient = std::move(q);
    return true;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [k, c] = *it;
      if (!first) os << (c > 0 ? " + " : " - ");
      else if (c < 0) os << "-";
      first = false;
      Rational ac = abs(c);
      bool printed = false;
      if (ac != 1) {
        os << ac.str();
        printed = true;
      }
      for (unsigned i = 0; i < n_vars; ++i) {
        if (k[i] == 0) continue;
        if (printed) os << "*";
        os << var_name(static_cast<Var>(i));
        if (k[i] > 1) os << "^" << static_cast<unsigned>(k[i]);
        printed = true;
      }
      if (!printed) os << "1";
    }
    return os.str();
  }

private:
  static Key key_mul(const Key& a, const Key& b) {
    Key out;
    for (unsigned i = 0; i < n_vars; ++i) {
      const unsigned s = static_cast<unsigned>(a[i]) + static_cast<unsigned>(b[i]);
      if (s > 255) throw DimensionMismatch("monomial exponent exceeds 255");
      out[i] = static_cast<std::uint8_t>(s);
    }
    return out;
  }

  void add_term(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Terms terms_;
};

// Uniform random rational with numerator in [-range, range] and denominator
// in [1, range], for Schwartz-Zippel style spot checks.
inline Rational random_rational(std::mt19937_64& rng, int range = 50) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, range);
  return Rational(num(rng), den(rng));
}

}  // namespace carterlab
