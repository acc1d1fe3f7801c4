#pragma once

#include <array>
#include <map>
#include <memory>

#include "jonq/biv.hpp"
#include "jonq/expr.hpp"

namespace jonq {

/* How literals and square roots of the expression grammar land in the
   coefficient field. */
template <typename K>
struct FieldEnv;

template <>
struct FieldEnv<Rat> {
  Rat from_int(const mpz_class& z) const { return Rat(z); }
  Rat sqrt_int(const mpz_class&) const {
    throw parse_error("sqrt needs a quadratic coefficient field");
  }
};

template <>
struct FieldEnv<Fp> {
  uint64_t p = 0;
  Fp from_int(const mpz_class& z) const {
    if (p == 0) throw parse_error("prime field expressions need a modulus");
    return Fp((long)mpz_fdiv_ui(z.get_mpz_t(), p), p);
  }
  Fp sqrt_int(const mpz_class&) const {
    throw parse_error("sqrt needs a quadratic coefficient field");
  }
};

template <>
struct FieldEnv<Quad> {
  long disc = 0;
  Quad from_int(const mpz_class& z) const { return Quad(Rat(z)); }
  Quad sqrt_int(const mpz_class& d) const {
    if (disc == 0 || !d.fits_slong_p() || d.get_si() != disc)
      throw parse_error("sqrt argument does not match the field discriminant");
    return Quad(Rat(0), Rat(1), disc);
  }
};

/* Trivariate polynomial on sparse monomials, used for the homogeneous
   form of a map.  Keys are (i, j, k) exponents of x, y, z. */
template <typename K>
class TriPoly {
  std::map<std::array<int, 3>, K> t_;

  void put(const std::array<int, 3>& e, const K& c) {
    auto it = t_.find(e);
    if (it == t_.end()) {
      if (!is_zero(c)) t_.emplace(e, c);
      return;
    }
    it->second = it->second + c;
    if (is_zero(it->second)) t_.erase(it);
  }

public:
  TriPoly() = default;

  static TriPoly term(const K& c, int i, int j, int k) {
    TriPoly p;
    if (!is_zero(c)) p.t_.emplace(std::array<int, 3>{i, j, k}, c);
    return p;
  }

  bool is_zero_t() const { return t_.empty(); }
  const std::map<std::array<int, 3>, K>& terms() const { return t_; }

  bool is_homogeneous(int* deg_out = nullptr) const {
    int d = -1;
    for (auto& [e, c] : t_) {
      int s = e[0] + e[1] + e[2];
      if (d < 0) d = s;
      if (s != d) return false;
    }
    if (deg_out) *deg_out = d;
    return true;
  }

  int deg_total() const {
    int d = -1;
    for (auto& [e, c] : t_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
  }

  friend bool operator==(const TriPoly& a, const TriPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const TriPoly& a, const TriPoly& b) { return !(a == b); }

  TriPoly operator-() const {
    TriPoly r = *this;
    for (auto& [e, c] : r.t_) c = -c;
    return r;
  }

  friend TriPoly operator+(const TriPoly& a, const TriPoly& b) {
    TriPoly r = a;
    for (auto& [e, c] : b.t_) r.put(e, c);
    return r;
  }
  friend TriPoly operator-(const TriPoly& a, const TriPoly& b) { return a + (-b); }

  friend TriPoly operator*(const TriPoly& a, const TriPoly& b) {
    TriPoly r;
    for (auto& [e, c] : a.t_)
      for (auto& [f, d] : b.t_)
        r.put({e[0] + f[0], e[1] + f[1], e[2] + f[2]}, c * d);
    return r;
  }

  friend TriPoly operator*(const TriPoly& a, const K& k) {
    TriPoly r;
    for (auto& [e, c] : a.t_) r.put(e, c * k);
    return r;
  }

  TriPoly pow(unsigned long n) const {
    TriPoly r = term(K(1), 0, 0, 0), b = *this;
    while (n != 0) {
      if (n & 1) r = r * b;
      if (n >>= 1) b = b * b;
    }
    return r;
  }

  /* substitution of three polynomials for x, y, z */
  TriPoly eval_at(const std::array<TriPoly, 3>& g) const {
    std::array<std::vector<TriPoly>, 3> pw;
    for (int v = 0; v < 3; ++v) pw[v].push_back(term(K(1), 0, 0, 0));
    auto power = [&](int v, int n) {
      while ((int)pw[v].size() <= n) pw[v].push_back(pw[v].back() * g[v]);
      return pw[v][n];
    };
    TriPoly r;
    for (auto& [e, c] : t_)
      r = r + power(0, e[0]) * power(1, e[1]) * power(2, e[2]) * c;
    return r;
  }

  int z_multiplicity() const {
    int m = -1;
    for (auto& [e, c] : t_) m = m < 0 ? e[2] : std::min(m, e[2]);
    return m;
  }

  TriPoly div_z(int m) const {
    TriPoly r;
    for (auto& [e, c] : t_) {
      if (e[2] < m) throw domain_error("z power too small for exact division");
      r.t_.emplace(std::array<int, 3>{e[0], e[1], e[2] - m}, c);
    }
    return r;
  }

  Biv<K> dehomog_z() const {
    std::vector<Poly<K>> yc;
    for (auto& [e, c] : t_) {
      if ((int)yc.size() <= e[1]) yc.resize(e[1] + 1);
      std::vector<K> cs(yc[e[1]].coeffs());
      if ((int)cs.size() <= e[0]) cs.resize(e[0] + 1, K(0));
      cs[e[0]] = cs[e[0]] + c;
      yc[e[1]] = Poly<K>(std::move(cs));
    }
    return Biv<K>::from_ycoeffs(std::move(yc));
  }

  /* homogenization of an affine polynomial to total degree D */
  static TriPoly from_biv(const Biv<K>& b, int D) {
    TriPoly r;
    for (int j = 0; j <= b.deg_y(); ++j) {
      const Poly<K>& p = b.ycoeff(j);
      for (int i = 0; i <= p.deg(); ++i) {
        K c = p.coeff(i);
        if (is_zero(c)) continue;
        if (i + j > D) throw domain_error("degree bound too small for homogenization");
        r.t_.emplace(std::array<int, 3>{i, j, D - i - j}, c);
      }
    }
    return r;
  }

  /* first nonzero coefficient in descending lexicographic monomial order */
  const K* lead_coeff() const {
    if (t_.empty()) return nullptr;
    return &t_.rbegin()->second;
  }

  std::string str() const {
    if (t_.empty()) return "0";
    std::string out;
    const char* names[3] = {"x", "y", "z"};
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      auto& [e, c] = *it;
      std::string mono;
      for (int v = 0; v < 3; ++v) {
        if (e[v] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names[v];
        if (e[v] > 1) mono += "^" + std::to_string(e[v]);
      }
      std::string cs = to_str(c);
      std::string term;
      if (mono.empty()) {
        term = cs;
      } else if (cs == "1") {
        term = mono;
      } else if (cs == "-1") {
        term = "-" + mono;
      } else if (cs.find_first_of("+-", 1) != std::string::npos) {
        term = "(" + cs + ")*" + mono;
      } else {
        term = cs + "*" + mono;
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
};

/* Plane map in the affine chart (x, y) = (x/z, y/z): two reduced
   rational coordinate functions.  The homogeneous triple, its degree and
   the canonical scaling are derived from the pair; an inverse is only
   ever attached by the caller and is verified, never computed. */
template <typename K>
class CremonaMap {
  BivFrac<K> e1_, e2_;
  long deg_ = 1;
  std::shared_ptr<const CremonaMap> inv_;

  void compute_degree() {
    const Biv<K>&d1 = e1_.den(), &d2 = e2_.den();
    Biv<K> g = Biv<K>::gcd(d1, d2);
    Biv<K> c0 = e1_.num() * Biv<K>::divexact(d2, g);
    Biv<K> c1 = e2_.num() * Biv<K>::divexact(d1, g);
    Biv<K> c2 = d1 * Biv<K>::divexact(d2, g);
    deg_ = std::max({c0.deg_total(), c1.deg_total(), c2.deg_total(), 0});
  }

public:
  CremonaMap() : e1_(BivFrac<K>::X()), e2_(BivFrac<K>::Y()) {}
  CremonaMap(BivFrac<K> e1, BivFrac<K> e2) : e1_(std::move(e1)), e2_(std::move(e2)) {
    compute_degree();
  }

  const BivFrac<K>& e1() const { return e1_; }
  const BivFrac<K>& e2() const { return e2_; }
  long deg() const { return deg_; }

  bool is_identity() const {
    return e1_ == BivFrac<K>::X() && e2_ == BivFrac<K>::Y();
  }

  friend bool operator==(const CremonaMap& f, const CremonaMap& g) {
    return f.e1_ == g.e1_ && f.e2_ == g.e2_;
  }
  friend bool operator!=(const CremonaMap& f, const CremonaMap& g) { return !(f == g); }

  size_t hash() const { return e1_.hash() * 40503824891ULL ^ e2_.hash(); }

  /* homogeneous components, cleared of common factors, first nonzero
     coefficient scaled to one */
  std::array<TriPoly<K>, 3> tri() const {
    const Biv<K>&d1 = e1_.den(), &d2 = e2_.den();
    Biv<K> g = Biv<K>::gcd(d1, d2);
    Biv<K> c0 = e1_.num() * Biv<K>::divexact(d2, g);
    Biv<K> c1 = e2_.num() * Biv<K>::divexact(d1, g);
    Biv<K> c2 = d1 * Biv<K>::divexact(d2, g);
    int D = std::max({c0.deg_total(), c1.deg_total(), c2.deg_total(), 0});
    std::array<TriPoly<K>, 3> t = {TriPoly<K>::from_biv(c0, D),
                                   TriPoly<K>::from_biv(c1, D),
                                   TriPoly<K>::from_biv(c2, D)};
    const K* lead = nullptr;
    for (auto& p : t)
      if (!lead && (lead = p.lead_coeff())) break;
    if (lead) {
      K s = field_inv(*lead);
      for (auto& p : t) p = p * s;
    }
    return t;
  }

  std::string str_affine() const {
    return "(" + e1_.str() + ", " + e2_.str() + ")";
  }

  std::string str_triple() const {
    auto t = tri();
    return "[" + t[0].str() + " : " + t[1].str() + " : " + t[2].str() + "]";
  }

  bool has_inverse() const { return inv_ != nullptr; }

  const CremonaMap& inverse() const {
    if (!inv_) throw domain_error("no inverse was attached to this map");
    return *inv_;
  }

  /* attaches g after checking both composites are the identity */
  CremonaMap with_inverse(const CremonaMap& g) const;
};

/* substitution of a coordinate pair into one reduced fraction, cleared
   by the denominator powers of the pair */
template <typename K>
BivFrac<K> subst_frac(const BivFrac<K>& F, const BivFrac<K>& A, const BivFrac<K>& B) {
  int DX = std::max(F.num().deg_x(), F.den().deg_x());
  int DY = std::max(F.num().deg_y(), F.den().deg_y());
  std::vector<Biv<K>> an{Biv<K>(K(1))}, ad{Biv<K>(K(1))}, bn{Biv<K>(K(1))}, bd{Biv<K>(K(1))};
  for (int i = 1; i <= DX; ++i) {
    an.push_back(an.back() * A.num());
    ad.push_back(ad.back() * A.den());
  }
  for (int j = 1; j <= DY; ++j) {
    bn.push_back(bn.back() * B.num());
    bd.push_back(bd.back() * B.den());
  }
  auto lift = [&](const Biv<K>& p) {
    Biv<K> acc;
    for (int j = 0; j <= p.deg_y(); ++j) {
      const Poly<K>& row = p.ycoeffs()[j];
      if (row.is_zero_p()) continue;
      Biv<K> rv;
      for (int i = 0; i <= row.deg(); ++i) {
        K c = row.coeff(i);
        if (is_zero(c)) continue;
        rv += an[i] * ad[DX - i] * c;
      }
      acc += rv * bn[j] * bd[DY - j];
    }
    return acc;
  };
  Biv<K> num = lift(F.num()), den = lift(F.den());
  if (den.is_zero_b()) throw domain_error("composition is not dominant");
  return BivFrac<K>(std::move(num), std::move(den));
}

template <typename K>
CremonaMap<K> compose_cremona(const CremonaMap<K>& f, const CremonaMap<K>& g) {
  return CremonaMap<K>(subst_frac(f.e1(), g.e1(), g.e2()),
                       subst_frac(f.e2(), g.e1(), g.e2()));
}

template <typename K>
CremonaMap<K> CremonaMap<K>::with_inverse(const CremonaMap& g) const {
  if (!compose_cremona(*this, g).is_identity() || !compose_cremona(g, *this).is_identity())
    throw domain_error("supplied map is not a two-sided inverse");
  CremonaMap f = *this;
  auto gi = std::make_shared<CremonaMap>(g);
  gi->inv_ = std::make_shared<CremonaMap>(*this);
  f.inv_ = std::move(gi);
  return f;
}

/* degrees of f, f^2, ..., f^N */
template <typename K>
std::vector<long> degree_sequence(const CremonaMap<K>& f, int N) {
  if (N < 1) throw domain_error("degree sequence needs at least one iterate");
  std::vector<long> out{f.deg()};
  CremonaMap<K> acc = f;
  for (int n = 2; n <= N; ++n) {
    acc = compose_cremona(f, acc);
    out.push_back(acc.deg());
  }
  return out;
}

/* Exact enclosure of deg(f^N)^(1/N) by integer root bounds at eight
   decimal digits, plus the successive degree ratios. */
struct DynDegEstimate {
  Rat lo, hi;
  std::vector<Rat> ratios;
};

template <typename K>
DynDegEstimate dynamical_degree_estimate(const CremonaMap<K>& f, int N) {
  if (N < 4) throw domain_error("dynamical degree estimate needs at least four iterates");
  std::vector<long> degs = degree_sequence(f, N);
  mpz_class scale = 100000000;
  mpz_class t;
  mpz_pow_ui(t.get_mpz_t(), scale.get_mpz_t(), N);
  t *= degs.back();
  mpz_class r;
  mpz_root(r.get_mpz_t(), t.get_mpz_t(), N);
  DynDegEstimate e;
  e.lo = Rat(r, scale);
  e.hi = Rat(r + 1, scale);
  for (size_t i = 0; i + 1 < degs.size(); ++i)
    e.ratios.push_back(Rat(degs[i + 1], degs[i]));
  return e;
}

/* expression values for the affine coordinates of a map */
template <typename K>
struct BivExprOps {
  FieldEnv<K> env;
  BivFrac<K> from_int(const mpz_class& z) const { return BivFrac<K>(env.from_int(z)); }
  BivFrac<K> var(char c) const {
    if (c == 'x') return BivFrac<K>::X();
    if (c == 'y') return BivFrac<K>::Y();
    throw parse_error("the variable z only appears in homogeneous triples");
  }
  BivFrac<K> sqrt_int(const mpz_class& d) const { return BivFrac<K>(env.sqrt_int(d)); }
};

/* expression values for homogeneous components: polynomials only, with
   division restricted to constants */
template <typename K>
struct TriVal {
  TriPoly<K> p;

  TriVal operator-() const { return {-p}; }
  friend TriVal operator+(const TriVal& a, const TriVal& b) { return {a.p + b.p}; }
  friend TriVal operator-(const TriVal& a, const TriVal& b) { return {a.p - b.p}; }
  friend TriVal operator*(const TriVal& a, const TriVal& b) { return {a.p * b.p}; }
  friend TriVal operator/(const TriVal& a, const TriVal& b) {
    auto& t = b.p.terms();
    if (t.size() != 1 || t.begin()->first != std::array<int, 3>{0, 0, 0})
      throw parse_error("division inside a homogeneous component needs a nonzero constant");
    return {a.p * field_inv(t.begin()->second)};
  }
  TriVal pow(long n) const {
    if (n < 0) throw parse_error("homogeneous components take nonnegative exponents");
    return {p.pow((unsigned long)n)};
  }
};

template <typename K>
struct TriExprOps {
  FieldEnv<K> env;
  TriVal<K> from_int(const mpz_class& z) const {
    return {TriPoly<K>::term(env.from_int(z), 0, 0, 0)};
  }
  TriVal<K> var(char c) const {
    return {TriPoly<K>::term(K(1), c == 'x', c == 'y', c == 'z')};
  }
  TriVal<K> sqrt_int(const mpz_class& d) const {
    return {TriPoly<K>::term(env.sqrt_int(d), 0, 0, 0)};
  }
};

/* parses "(e1, e2)" in the affine chart or a homogeneous "[f0 : f1 : f2]" */
template <typename K>
CremonaMap<K> parse_map(const std::string& s, const FieldEnv<K>& env = {}) {
  auto ts = lex_expr(s);
  if (!ts.empty() && ts[0].kind == ExprToken::LParen) {
    BivExprOps<K> ops{env};
    ExprParser<BivFrac<K>, BivExprOps<K>> p(ts, ops);
    p.expect(ExprToken::LParen, "'('");
    BivFrac<K> e1 = p.expr();
    p.expect(ExprToken::Comma, "',' between the coordinates");
    BivFrac<K> e2 = p.expr();
    p.expect(ExprToken::RParen, "')'");
    p.expect(ExprToken::End, "end of map");
    return CremonaMap<K>(std::move(e1), std::move(e2));
  }
  if (!ts.empty() && ts[0].kind == ExprToken::LBracket) {
    TriExprOps<K> ops{env};
    ExprParser<TriVal<K>, TriExprOps<K>> p(ts, ops);
    p.expect(ExprToken::LBracket, "'['");
    std::array<TriPoly<K>, 3> f;
    f[0] = p.expr().p;
    p.expect(ExprToken::Colon, "':' between components");
    f[1] = p.expr().p;
    p.expect(ExprToken::Colon, "':' between components");
    f[2] = p.expr().p;
    p.expect(ExprToken::RBracket, "']'");
    p.expect(ExprToken::End, "end of map");
    int d = -1;
    for (auto& c : f) {
      int dc;
      if (!c.is_homogeneous(&dc))
        throw parse_error("component of a triple is not homogeneous");
      if (dc >= 0) {
        if (d >= 0 && dc != d)
          throw parse_error("homogeneous components must share one degree");
        d = dc;
      }
    }
    if (f[2].is_zero_t())
      throw domain_error("the map collapses to the line at infinity");
    Biv<K> b0 = f[0].dehomog_z(), b1 = f[1].dehomog_z(), b2 = f[2].dehomog_z();
    return CremonaMap<K>(BivFrac<K>(b0, b2), BivFrac<K>(b1, b2));
  }
  throw parse_error("a map is '(e1, e2)' or '[f0 : f1 : f2]'");
}

}  // namespace jonq

template <typename K> struct std::hash<jonq::CremonaMap<K>> {
  size_t operator()(const jonq::CremonaMap<K>& f) const { return f.hash(); }
};
