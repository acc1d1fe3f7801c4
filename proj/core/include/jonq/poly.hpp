#pragma once

#include <cassert>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "jonq/scalar.hpp"

namespace jonq {

/* Dense univariate polynomial over a field K.  Coefficients run from degree
   zero upward and never end in a zero; the zero polynomial is the empty
   list and reports degree -1. */
template <typename K>
class Poly {
  std::vector<K> c_;

  void trim() {
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }

public:
  using coeff_type = K;

  Poly() = default;
  Poly(std::initializer_list<K> cs) : c_(cs) { trim(); }
  explicit Poly(std::vector<K> cs) : c_(std::move(cs)) { trim(); }
  explicit Poly(const K& k) { c_.push_back(k); trim(); }

  static Poly x() { return Poly{K(0), K(1)}; }
  static Poly constant(const K& k) { return Poly(k); }
  static Poly monomial(const K& k, int n) {
    std::vector<K> cs(n + 1, K(0));
    cs[n] = k;
    return Poly(std::move(cs));
  }

  int deg() const { return (int)c_.size() - 1; }
  bool is_zero_p() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<K>& coeffs() const { return c_; }
  K coeff(int i) const { return (i >= 0 && i < (int)c_.size()) ? c_[i] : K(0); }
  const K& lead() const {
    assert(!c_.empty());
    return c_.back();
  }
  K constant_term() const { return coeff(0); }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero_p() || b.is_zero_p()) return Poly();
    std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (is_zero(a.c_[i])) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const K& k) {
    Poly r = a;
    for (auto& x : r.c_) x = x * k;
    r.trim();
    return r;
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  /* euclidean division, denominator-free since K is a field */
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero_p()) throw domain_error("polynomial division by zero");
    Poly q, r = a;
    K il = field_inv(b.lead());
    std::vector<K> qc;
    if (r.deg() >= b.deg()) qc.assign(r.deg() - b.deg() + 1, K(0));
    while (r.deg() >= b.deg()) {
      int sh = r.deg() - b.deg();
      K f = r.lead() * il;
      qc[sh] = f;
      /* r -= f * x^sh * b */
      std::vector<K> rc = r.c_;
      for (int i = 0; i <= b.deg(); ++i) rc[i + sh] = rc[i + sh] - f * b.c_[i];
      r = Poly(std::move(rc));
    }
    q = Poly(std::move(qc));
    return {q, r};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  bool divides(const Poly& a) const { return divmod(a, *this).second.is_zero_p(); }

  Poly monic() const {
    if (is_zero_p()) return *this;
    return *this * field_inv(lead());
  }

  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero_p()) {
      Poly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /* extended gcd: returns (g, s, t) with s*a + t*b = g, g monic */
  static std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b) {
    Poly r0 = a, r1 = b;
    Poly s0 = Poly(K(1)), s1;
    Poly t0, t1 = Poly(K(1));
    while (!r1.is_zero_p()) {
      auto [q, r2] = divmod(r0, r1);
      Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
      r0 = std::move(r1); r1 = std::move(r2);
      s0 = std::move(s1); s1 = std::move(s2);
      t0 = std::move(t1); t1 = std::move(t2);
    }
    if (r0.is_zero_p()) return {r0, s0, t0};
    K il = field_inv(r0.lead());
    return {r0 * il, s0 * il, t0 * il};
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<K> r(c_.size() - 1, K(0));
    for (size_t i = 1; i < c_.size(); ++i) {
      K m(0);
      for (size_t j = 0; j < i; ++j) m += c_[i];  /* i * c_i without K(long) product */
      r[i - 1] = m;
    }
    return Poly(std::move(r));
  }

  K eval(const K& x) const {
    K r(0);
    for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  Poly compose(const Poly& g) const {
    Poly r;
    for (size_t i = c_.size(); i-- > 0;) r = r * g + Poly(c_[i]);
    return r;
  }

  Poly pow(unsigned long e) const {
    Poly r(K(1)), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  /* x -> x + a */
  Poly shift(const K& a) const { return compose(Poly{a, K(1)}); }
  /* x^deg * p(1/x), the coefficient-reversed polynomial */
  Poly reversed() const {
    std::vector<K> r(c_.rbegin(), c_.rend());
    return Poly(std::move(r));
  }

  /* multiplicity of the monic irreducible q in this polynomial */
  int multiplicity(const Poly& q) const {
    assert(!is_zero_p() && q.deg() >= 1);
    int m = 0;
    Poly r = *this;
    for (;;) {
      auto [d, rem] = divmod(r, q);
      if (!rem.is_zero_p()) return m;
      r = d;
      ++m;
      if (r.deg() < q.deg()) return m;
    }
  }

  std::string str(const std::string& var = "x") const;

  size_t hash() const {
    size_t h = 0x51ed2701u;
    for (auto& x : c_) h = h * 1000003u ^ std::hash<K>()(x);
    return h;
  }

  /* deterministic total order: by degree, then coefficients from the top */
  static bool less(const Poly& a, const Poly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    for (int i = a.deg(); i >= 0; --i) {
      if (a.coeff(i) != b.coeff(i)) return coeff_less(a.coeff(i), b.coeff(i));
    }
    return false;
  }
};

template <typename K>
std::string Poly<K>::str(const std::string& var) const {
  if (is_zero_p()) return "0";
  std::string s;
  for (int i = deg(); i >= 0; --i) {
    K c = coeff(i);
    if (is_zero(c)) continue;
    std::string cs = to_str(c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (neg) cs = cs.substr(1);
    if (!s.empty()) s += neg ? " - " : " + ";
    else if (neg) s += "-";
    bool unit = cs == "1";
    bool needs_paren = cs.find('+') != std::string::npos || cs.find('-') != std::string::npos ||
                       cs.find('/') != std::string::npos;
    if (i == 0) {
      s += needs_paren ? "(" + cs + ")" : cs;
    } else {
      if (!unit) s += (needs_paren ? "(" + cs + ")" : cs) + "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

/* Rational function num/den over K[x]: den monic, gcd(num, den) = 1, and
   zero is 0/1. */
template <typename K>
class RatFunc {
  Poly<K> num_, den_;

  void reduce() {
    if (num_.is_zero_p()) {
      den_ = Poly<K>(K(1));
      return;
    }
    Poly<K> g = Poly<K>::gcd(num_, den_);
    if (g.deg() > 0) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    K il = field_inv(den_.lead());
    num_ = num_ * il;
    den_ = den_ * il;
  }

public:
  using coeff_type = K;

  RatFunc() : den_(Poly<K>(K(1))) {}
  RatFunc(Poly<K> n, Poly<K> d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero_p()) throw domain_error("rational function with zero denominator");
    reduce();
  }
  explicit RatFunc(Poly<K> n) : num_(std::move(n)), den_(Poly<K>(K(1))) {}
  explicit RatFunc(const K& k) : num_(Poly<K>(k)), den_(Poly<K>(K(1))) {}

  static RatFunc x() { return RatFunc(Poly<K>::x()); }

  const Poly<K>& num() const { return num_; }
  const Poly<K>& den() const { return den_; }
  bool is_zero_r() const { return num_.is_zero_p(); }
  bool is_poly() const { return den_.deg() == 0; }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero_r()) throw domain_error("rational function division by zero");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

  RatFunc inv() const {
    if (is_zero_r()) throw domain_error("inverse of the zero function");
    return RatFunc(den_, num_);
  }

  /* substitute another rational function for the variable */
  RatFunc compose(const RatFunc& g) const {
    RatFunc r(K(0));
    for (int i = num_.deg(); i >= 0; --i) r = r * g + RatFunc(num_.coeff(i));
    RatFunc s(K(0));
    for (int i = den_.deg(); i >= 0; --i) s = s * g + RatFunc(den_.coeff(i));
    return r / s;
  }

  std::string str(const std::string& var = "x") const {
    if (is_poly()) return num_.str(var);
    std::string n = num_.str(var), d = den_.str(var);
    auto atomic = [](const std::string& s) {
      return s.find('+') == std::string::npos && s.find('-') == std::string::npos &&
             s.find('*') == std::string::npos && s.find('/') == std::string::npos;
    };
    return (atomic(n) ? n : "(" + n + ")") + "/" + (atomic(d) ? d : "(" + d + ")");
  }

  size_t hash() const { return num_.hash() * 2654435761u ^ den_.hash(); }
};

template <typename K> inline bool is_zero(const Poly<K>& x) { return x.is_zero_p(); }
template <typename K> inline bool is_zero(const RatFunc<K>& x) { return x.is_zero_r(); }
template <typename K> inline bool is_one(const Poly<K>& x) { return x.deg() == 0 && is_one(x.coeff(0)); }
template <typename K> inline bool is_one(const RatFunc<K>& x) { return x.is_poly() && is_one(x.num()); }

template <typename K> struct one_of<Poly<K>> {
  static Poly<K> get() { return Poly<K>(K(1)); }
};
template <typename K> struct one_of<RatFunc<K>> {
  static RatFunc<K> get() { return RatFunc<K>(K(1)); }
};

}  // namespace jonq

template <typename K> struct std::hash<jonq::Poly<K>> {
  size_t operator()(const jonq::Poly<K>& p) const { return p.hash(); }
};
template <typename K> struct std::hash<jonq::RatFunc<K>> {
  size_t operator()(const jonq::RatFunc<K>& p) const { return p.hash(); }
};
