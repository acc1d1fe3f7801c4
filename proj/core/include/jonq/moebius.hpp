#pragma once

#include <type_traits>

#include "jonq/place.hpp"

namespace jonq {

template <typename E> struct ratfunc_entries : std::false_type {};
template <typename K> struct ratfunc_entries<RatFunc<K>> : std::true_type {};

/* Element of PGL_2 over the fraction field of the entry type E, acting on
   the projective line by t -> (a*t + b)/(c*t + d).  Canonical form: over a
   field, the first nonzero entry in reading order is 1; over K(x), entries
   are coprime polynomials and the first nonzero one is monic.  Equality and
   hashing rely on the canonical form. */
template <typename E>
class Mo {
  E a_, b_, c_, d_;

  void canonicalize() {
    if constexpr (ratfunc_entries<E>::value) {
      using P = Poly<typename E::coeff_type>;
      E* es[4] = {&a_, &b_, &c_, &d_};
      P den = one_of<P>::get();
      for (E* e : es) {
        P g = P::gcd(den, e->den());
        den = den * (e->den() / g);
      }
      E scale(den);
      P g;
      for (E* e : es) {
        *e = *e * scale;
        g = P::gcd(g, e->num());
      }
      if (g.is_zero_p()) throw domain_error("moebius map must be nonzero");
      E gi = E(g).inv();
      for (E* e : es) *e = *e * gi;
      for (E* e : es)
        if (!is_zero(*e)) {
          E s = E(P(e->num().lead())).inv();
          for (E* f : es) *f = *f * s;
          break;
        }
    } else {
      E* es[4] = {&a_, &b_, &c_, &d_};
      for (E* e : es)
        if (!is_zero(*e)) {
          E s = field_inv(*e);
          for (E* f : es) *f = *f * s;
          break;
        }
    }
    if (is_zero(det())) throw domain_error("moebius map needs a nonzero determinant");
  }

public:
  Mo() : a_(one_of<E>::get()), b_(), c_(), d_(one_of<E>::get()) {}
  Mo(E a, E b, E c, E d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    canonicalize();
  }

  const E& a() const { return a_; }
  const E& b() const { return b_; }
  const E& c() const { return c_; }
  const E& d() const { return d_; }

  E det() const { return a_ * d_ - b_ * c_; }

  /* tr^2/det, invariant under scaling and conjugation */
  E ratio_invariant() const {
    E t = a_ + d_;
    return t * t * field_inv(det());
  }

  bool is_identity() const {
    return is_zero(b_) && is_zero(c_) && a_ == d_;
  }

  friend Mo operator*(const Mo& m, const Mo& n) {
    return Mo(m.a_ * n.a_ + m.b_ * n.c_, m.a_ * n.b_ + m.b_ * n.d_,
              m.c_ * n.a_ + m.d_ * n.c_, m.c_ * n.b_ + m.d_ * n.d_);
  }

  Mo inv() const { return Mo(d_, -b_, -c_, a_); }

  Mo pow(long n) const {
    Mo r;
    Mo b = n < 0 ? inv() : *this;
    unsigned long e = n < 0 ? 0UL - (unsigned long)n : (unsigned long)n;
    while (e != 0) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  friend bool operator==(const Mo& m, const Mo& n) {
    return m.a_ == n.a_ && m.b_ == n.b_ && m.c_ == n.c_ && m.d_ == n.d_;
  }
  friend bool operator!=(const Mo& m, const Mo& n) { return !(m == n); }

  /* image of a projective point (x : z) */
  std::pair<E, E> apply_proj(const std::pair<E, E>& pt) const {
    return {a_ * pt.first + b_ * pt.second, c_ * pt.first + d_ * pt.second};
  }

  /* the map as a rational function in one variable; field entries only */
  RatFunc<E> to_fraction() const {
    return RatFunc<E>(Poly<E>{b_, a_}, Poly<E>{d_, c_});
  }

  static Mo from_fraction(const RatFunc<E>& f) {
    if (f.num().deg() > 1 || f.den().deg() > 1)
      throw domain_error("not a fractional linear map");
    return Mo(f.num().coeff(1), f.num().coeff(0), f.den().coeff(1), f.den().coeff(0));
  }

  std::string str() const {
    return "[[" + to_str(a_) + "," + to_str(b_) + "],[" + to_str(c_) + "," +
           to_str(d_) + "]]";
  }

  size_t hash() const {
    size_t h = std::hash<E>()(a_);
    h = h * 1099511628211ULL ^ std::hash<E>()(b_);
    h = h * 1099511628211ULL ^ std::hash<E>()(c_);
    h = h * 1099511628211ULL ^ std::hash<E>()(d_);
    return h;
  }
};

struct MoebiusClass {
  enum Kind { Identity, FiniteOrder, UnipotentInfinite, SemisimpleInfinite };
  Kind kind = Identity;
  long order = 0;
  Rat r;

  std::string str() const;
};

MoebiusClass classify_moebius(const Mo<Rat>& m);
MoebiusClass classify_moebius(const Mo<Fp>& m);

/* fixed points on the projective line as closed points of degree <= 2 */
std::vector<Place<Rat>> fixed_points(const Mo<Rat>& m);
std::vector<Place<Fp>> fixed_points(const Mo<Fp>& m);

/* image of a place under the substitution t -> m(t) */
template <typename K>
Place<K> place_image(const Place<K>& pl, const Mo<K>& m) {
  auto point_place = [&](const K& px, const K& pz) {
    auto [ix, iz] = m.apply_proj({px, pz});
    if (is_zero(iz)) return Place<K>::infinity();
    return Place<K>::from_irreducible(Poly<K>{-(ix * field_inv(iz)), K(1)});
  };
  if (pl.is_infinite()) return point_place(K(1), K(0));
  if (pl.degree() == 1) return point_place(-pl.pol().coeff(0), K(1));
  /* substitute the inverse map and clear denominators */
  Mo<K> n = m.inv();
  Poly<K> u{n.b(), n.a()}, v{n.d(), n.c()};
  int e = pl.degree();
  Poly<K> q;
  Poly<K> up = one_of<Poly<K>>::get();
  std::vector<Poly<K>> vps(e + 1, one_of<Poly<K>>::get());
  for (int i = e - 1; i >= 0; --i) vps[i] = vps[i + 1] * v;
  for (int i = 0; i <= e; ++i) {
    q = q + Poly<K>(pl.pol().coeff(i)) * up * vps[i];
    up = up * u;
  }
  if (q.deg() != e) throw domain_error("place image degenerated");
  return Place<K>::from_irreducible(q.monic());
}

/* A place of the rationals, or of a quadratic extension of them when disc
   is set: the real embedding with sqrt(disc) > 0, or the p-adic one in
   which sqrt(disc) reduces to sqrt_digit (mod p, and mod 8 when p = 2). */
struct NumberPlace {
  bool archimedean = true;
  mpz_class prime = 0;
  long disc = 0;
  mpz_class sqrt_digit = 0;

  std::string str() const;
};

enum class NormCmp { Less, One, Greater };

/* exact valuation of a nonzero element of Q(sqrt(disc)) at a finite place */
long quad_val(const Quad& x, const NumberPlace& v);

/* compares |x|_v with 1 */
NormCmp norm_compare(const Quad& x, const NumberPlace& v);

/* North-south data of an infinite order semisimple map: a number place
   where the eigenvalue ratio has norm away from 1, the fixed places, and
   the exact fixed points when they are finite.  A degree two fixed place is
   shared and the roots tell the poles apart.  found = false reports a map
   without such dynamics. */
struct NsResult {
  bool found = false;
  NumberPlace v;
  Place<Rat> attracting = Place<Rat>::infinity();
  Place<Rat> repelling = Place<Rat>::infinity();
  Quad att_root, rep_root;
  Quad multiplier;
};

NsResult find_ns_place(const Mo<Rat>& m);

}  // namespace jonq

template <typename E> struct std::hash<jonq::Mo<E>> {
  size_t operator()(const jonq::Mo<E>& m) const { return m.hash(); }
};
