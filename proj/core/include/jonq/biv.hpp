#pragma once

#include "jonq/place.hpp"

namespace jonq {

/* Polynomial in two variables, stored as Y-power coefficients in K[x].
   Multiplication of rational-coefficient operands packs both factors into
   GMP integers so that one big multiply replaces the coefficient
   convolution; other fields use the naive product. */
template <typename K>
class Biv {
  std::vector<Poly<K>> c_;

  void trim() {
    while (!c_.empty() && c_.back().is_zero_p()) c_.pop_back();
  }

public:
  Biv() = default;
  explicit Biv(Poly<K> p) {
    c_.push_back(std::move(p));
    trim();
  }
  explicit Biv(const K& k) : Biv(Poly<K>(k)) {}

  static Biv X() { return Biv(Poly<K>::x()); }
  static Biv Y() {
    Biv b;
    b.c_ = {Poly<K>(), Poly<K>(K(1))};
    return b;
  }

  static Biv from_ycoeffs(std::vector<Poly<K>> v) {
    Biv b;
    b.c_ = std::move(v);
    b.trim();
    return b;
  }

  bool is_zero_b() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1 && (c_.empty() || c_[0].is_constant()); }
  int deg_y() const { return (int)c_.size() - 1; }

  int deg_x() const {
    int d = -1;
    for (auto& p : c_) d = std::max(d, p.deg());
    return d;
  }

  int deg_total() const {
    int d = -1;
    for (int j = 0; j < (int)c_.size(); ++j)
      if (!c_[j].is_zero_p()) d = std::max(d, j + c_[j].deg());
    return d;
  }

  Poly<K> ycoeff(int j) const {
    return (j >= 0 && j < (int)c_.size()) ? c_[j] : Poly<K>();
  }
  const std::vector<Poly<K>>& ycoeffs() const { return c_; }

  size_t term_count() const {
    size_t n = 0;
    for (auto& p : c_)
      for (auto& k : p.coeffs())
        if (!is_zero(k)) ++n;
    return n;
  }

  friend bool operator==(const Biv& a, const Biv& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Biv& a, const Biv& b) { return !(a == b); }

  Biv operator-() const {
    Biv r = *this;
    for (auto& p : r.c_) p = -p;
    return r;
  }

  friend Biv operator+(const Biv& a, const Biv& b) {
    Biv r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()));
    for (size_t j = 0; j < r.c_.size(); ++j)
      r.c_[j] = a.ycoeff((int)j) + b.ycoeff((int)j);
    r.trim();
    return r;
  }

  friend Biv operator-(const Biv& a, const Biv& b) { return a + (-b); }

  static Biv mul_naive(const Biv& a, const Biv& b) {
    if (a.is_zero_b() || b.is_zero_b()) return Biv();
    Biv r;
    r.c_.resize(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero_p()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j)
        r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
  }

  friend Biv operator*(const Biv& a, const Biv& b) {
    if constexpr (std::is_same_v<K, Rat>)
      return mul_packed(a, b);
    else
      return mul_naive(a, b);
  }

  friend Biv operator*(const Biv& a, const Poly<K>& p) {
    Biv r = a;
    for (auto& q : r.c_) q = q * p;
    r.trim();
    return r;
  }

  friend Biv operator*(const Biv& a, const K& k) {
    Biv r = a;
    for (auto& q : r.c_) q = q * k;
    r.trim();
    return r;
  }

  Biv& operator+=(const Biv& o) { return *this = *this + o; }
  Biv& operator-=(const Biv& o) { return *this = *this - o; }
  Biv& operator*=(const Biv& o) { return *this = *this * o; }

  Biv pow(unsigned long e) const {
    Biv r(K(1)), b = *this;
    while (e != 0) {
      if (e & 1) r = r * b;
      if (e >>= 1) b = b * b;
    }
    return r;
  }

  /* monic gcd of the Y-coefficients */
  Poly<K> content() const {
    Poly<K> g;
    for (auto& p : c_) {
      g = Poly<K>::gcd(g, p);
      if (g.deg() == 0) break;
    }
    return g;
  }

  Poly<RatFunc<K>> to_yrat() const {
    std::vector<RatFunc<K>> v;
    v.reserve(c_.size());
    for (auto& p : c_) v.push_back(RatFunc<K>(p));
    Poly<RatFunc<K>> r;
    for (int j = (int)v.size() - 1; j >= 0; --j)
      r = r * Poly<RatFunc<K>>::x() + Poly<RatFunc<K>>(v[j]);
    return r;
  }

  /* clears coefficient denominators, then strips the content */
  static Biv primitive_from_yrat(const Poly<RatFunc<K>>& f) {
    Poly<K> l(K(1));
    for (int j = 0; j <= f.deg(); ++j) {
      Poly<K> d = f.coeff(j).den();
      l = l * (d / Poly<K>::gcd(l, d));
    }
    Biv r;
    r.c_.resize(f.deg() + 1);
    for (int j = 0; j <= f.deg(); ++j) {
      RatFunc<K> s = f.coeff(j) * RatFunc<K>(l);
      r.c_[j] = s.num() * field_inv(s.den().lead());
    }
    r.trim();
    Poly<K> ct = r.content();
    if (ct.deg() > 0) r = divexact(r, Biv(ct));
    return r.unit_normalized();
  }

  /* scales so the coefficient of the lex-top monomial is 1 */
  Biv unit_normalized() const {
    if (is_zero_b()) return *this;
    return *this * field_inv(c_.back().lead());
  }

  static Biv divexact(const Biv& a, const Biv& d) {
    if (d.is_zero_b()) throw domain_error("bivariate division by zero");
    if (a.is_zero_b()) return a;
    if (d.deg_y() == 0) {
      Biv r;
      r.c_.resize(a.c_.size());
      for (size_t j = 0; j < a.c_.size(); ++j) {
        auto [q, rem] = Poly<K>::divmod(a.c_[j], d.c_[0]);
        if (!rem.is_zero_p()) throw domain_error("bivariate division is not exact");
        r.c_[j] = std::move(q);
      }
      r.trim();
      return r;
    }
    auto [q, rem] = Poly<RatFunc<K>>::divmod(a.to_yrat(), d.to_yrat());
    if (!rem.is_zero_p()) throw domain_error("bivariate division is not exact");
    Biv r;
    r.c_.resize(q.deg() + 1);
    for (int j = 0; j <= q.deg(); ++j) {
      const RatFunc<K>& f = q.coeff(j);
      if (f.den().deg() != 0) throw domain_error("bivariate division is not exact");
      r.c_[j] = f.num() * field_inv(f.den().coeff(0));
    }
    r.trim();
    return r;
  }

  /* full gcd in K[x][y], including the common content; the result has
     monic content and a unit-normalized primitive part */
  static Biv gcd(const Biv& a, const Biv& b) {
    if (a.is_zero_b()) return b.is_zero_b() ? b : canonical_gcd_form(b);
    if (b.is_zero_b()) return canonical_gcd_form(a);
    Poly<K> ca = a.content(), cb = b.content();
    Poly<K> cg = Poly<K>::gcd(ca, cb);
    if (a.deg_y() == 0 || b.deg_y() == 0) return Biv(cg);
    Biv pa = divexact(a, Biv(ca)), pb = divexact(b, Biv(cb));
    Poly<RatFunc<K>> g = Poly<RatFunc<K>>::gcd(pa.to_yrat(), pb.to_yrat());
    if (g.deg() == 0) return Biv(cg);
    return primitive_from_yrat(g) * cg;
  }

  std::string str(const std::string& vx = "x", const std::string& vy = "y") const {
    if (is_zero_b()) return "0";
    std::string out;
    for (int j = deg_y(); j >= 0; --j) {
      const Poly<K>& p = c_[j];
      if (p.is_zero_p()) continue;
      std::string cs = p.str(vx);
      std::string ys = j == 0 ? "" : j == 1 ? vy : vy + "^" + std::to_string(j);
      std::string term;
      size_t nterms = 0;
      for (auto& k : p.coeffs())
        if (!is_zero(k)) ++nterms;
      if (ys.empty()) {
        term = cs;
      } else if (cs == "1") {
        term = ys;
      } else if (cs == "-1") {
        term = "-" + ys;
      } else if (nterms > 1) {
        term = "(" + cs + ")*" + ys;
      } else {
        term = cs + "*" + ys;
      }
      if (out.empty()) {
        out = term;
      } else if (term[0] == '-') {
        out += " - " + term.substr(1);
      } else {
        out += " + " + term;
      }
    }
    return out;
  }

  size_t hash() const {
    size_t h = 0xa0761d6478bd642fULL;
    for (auto& p : c_) h = h * 1099511628211ULL ^ p.hash();
    return h;
  }

private:
  static Biv canonical_gcd_form(const Biv& a) {
    Poly<K> ct = a.content();
    Biv p = divexact(a, Biv(ct));
    return p.unit_normalized() * ct;
  }

  static Biv mul_packed(const Biv& a, const Biv& b);
};

Biv<Rat> biv_mul_kronecker(const Biv<Rat>& a, const Biv<Rat>& b);

template <>
inline Biv<Rat> Biv<Rat>::mul_packed(const Biv<Rat>& a, const Biv<Rat>& b) {
  return biv_mul_kronecker(a, b);
}

/* Reduced fraction of bivariate polynomials.  The denominator is nonzero
   with unit lex-top coefficient and shares no factor with the numerator. */
template <typename K>
class BivFrac {
  Biv<K> num_, den_;

  void reduce() {
    if (den_.is_zero_b()) throw domain_error("bivariate fraction with zero denominator");
    if (num_.is_zero_b()) {
      den_ = Biv<K>(K(1));
      return;
    }
    Biv<K> g = Biv<K>::gcd(num_, den_);
    if (g.deg_y() > 0 || g.deg_x() > 0) {
      num_ = Biv<K>::divexact(num_, g);
      den_ = Biv<K>::divexact(den_, g);
    }
    K s = field_inv(den_.ycoeffs().back().lead());
    num_ = num_ * s;
    den_ = den_ * s;
  }

public:
  BivFrac() : den_(K(1)) {}
  explicit BivFrac(Biv<K> n) : num_(std::move(n)), den_(K(1)) {}
  explicit BivFrac(const K& k) : num_(k), den_(K(1)) {}
  BivFrac(Biv<K> n, Biv<K> d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

  static BivFrac X() { return BivFrac(Biv<K>::X()); }
  static BivFrac Y() { return BivFrac(Biv<K>::Y()); }

  const Biv<K>& num() const { return num_; }
  const Biv<K>& den() const { return den_; }
  bool is_zero_f() const { return num_.is_zero_b(); }
  bool is_poly() const { return den_.deg_y() == 0 && den_.deg_x() == 0; }

  friend bool operator==(const BivFrac& a, const BivFrac& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const BivFrac& a, const BivFrac& b) { return !(a == b); }

  BivFrac operator-() const {
    BivFrac r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend BivFrac operator+(const BivFrac& a, const BivFrac& b) {
    return BivFrac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend BivFrac operator-(const BivFrac& a, const BivFrac& b) { return a + (-b); }
  friend BivFrac operator*(const BivFrac& a, const BivFrac& b) {
    return BivFrac(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend BivFrac operator/(const BivFrac& a, const BivFrac& b) {
    if (b.is_zero_f()) throw domain_error("bivariate fraction division by zero");
    return BivFrac(a.num_ * b.den_, a.den_ * b.num_);
  }

  BivFrac& operator+=(const BivFrac& o) { return *this = *this + o; }
  BivFrac& operator-=(const BivFrac& o) { return *this = *this - o; }
  BivFrac& operator*=(const BivFrac& o) { return *this = *this * o; }
  BivFrac& operator/=(const BivFrac& o) { return *this = *this / o; }

  BivFrac inv() const {
    if (is_zero_f()) throw domain_error("bivariate fraction division by zero");
    return BivFrac(den_, num_);
  }

  BivFrac pow(long e) const {
    if (e < 0) return inv().pow(-e);
    BivFrac r(K(1)), b = *this;
    unsigned long u = (unsigned long)e;
    while (u != 0) {
      if (u & 1) r = r * b;
      if (u >>= 1) b = b * b;
    }
    return r;
  }

  std::string str(const std::string& vx = "x", const std::string& vy = "y") const {
    std::string n = num_.str(vx, vy);
    if (is_poly()) return n;
    std::string d = den_.str(vx, vy);
    bool np = n.find_first_of("+-*/^", 1) != std::string::npos;
    bool dp = d.find_first_of("+-*/^", 1) != std::string::npos;
    return (np ? "(" + n + ")" : n) + "/" + (dp ? "(" + d + ")" : d);
  }

  size_t hash() const { return num_.hash() * 2654435761u ^ den_.hash(); }
};

}  // namespace jonq

template <typename K> struct std::hash<jonq::Biv<K>> {
  size_t operator()(const jonq::Biv<K>& b) const { return b.hash(); }
};
template <typename K> struct std::hash<jonq::BivFrac<K>> {
  size_t operator()(const jonq::BivFrac<K>& b) const { return b.hash(); }
};
