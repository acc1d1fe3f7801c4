#pragma once

#include <optional>

#include "jonq/cremona.hpp"
#include "jonq/moebius.hpp"

namespace jonq {

struct not_jonquieres : domain_error {
  explicit not_jonquieres(const std::string& m) : domain_error(m) {}
};

/* Fibration-preserving plane map (x, y) -> (h(x), A(x)(y)): a Moebius
   map h on the base and a Moebius map A with coefficients in k(x) on
   the fibre coordinate. */
template <typename K>
struct JonqElem {
  Mo<K> h;
  Mo<RatFunc<K>> A;

  JonqElem() = default;
  JonqElem(Mo<K> hh, Mo<RatFunc<K>> aa) : h(std::move(hh)), A(std::move(aa)) {}

  bool is_identity() const { return h.is_identity() && A.is_identity(); }

  friend bool operator==(const JonqElem& f, const JonqElem& g) {
    return f.h == g.h && f.A == g.A;
  }
  friend bool operator!=(const JonqElem& f, const JonqElem& g) { return !(f == g); }

  size_t hash() const { return h.hash() ^ A.hash() * 1099511628211ULL; }

  std::string str() const;
};

/* f evaluated along another fraction of the same variable */
template <typename K>
RatFunc<K> subst_ratfunc(const RatFunc<K>& f, const RatFunc<K>& s) {
  auto ev = [&](const Poly<K>& p) {
    RatFunc<K> acc;
    for (int i = p.deg(); i >= 0; --i) acc = acc * s + RatFunc<K>(p.coeff(i));
    return acc;
  };
  RatFunc<K> d = ev(f.den());
  if (d.is_zero_r()) throw domain_error("substitution lands in a pole");
  return ev(f.num()) / d;
}

template <typename K>
Mo<RatFunc<K>> mo_subst(const Mo<RatFunc<K>>& A, const RatFunc<K>& s) {
  return Mo<RatFunc<K>>(subst_ratfunc(A.a(), s), subst_ratfunc(A.b(), s),
                        subst_ratfunc(A.c(), s), subst_ratfunc(A.d(), s));
}

/* (h1, A1)(h2, A2) = (h1 h2, A1(h2(x)) A2(x)) */
template <typename K>
JonqElem<K> compose_jonq(const JonqElem<K>& f1, const JonqElem<K>& f2) {
  return JonqElem<K>(f1.h * f2.h,
                     mo_subst(f1.A, f2.h.to_fraction()) * f2.A);
}

template <typename K>
JonqElem<K> inverse_jonq(const JonqElem<K>& f) {
  Mo<K> hi = f.h.inv();
  return JonqElem<K>(hi, mo_subst(f.A, hi.to_fraction()).inv());
}

template <typename K>
JonqElem<K> jonq_pow(const JonqElem<K>& f, long n) {
  JonqElem<K> b = n < 0 ? inverse_jonq(f) : f;
  unsigned long e = n < 0 ? 0UL - (unsigned long)n : (unsigned long)n;
  JonqElem<K> r;
  while (e != 0) {
    if (e & 1) r = compose_jonq(r, b);
    if (e >>= 1) b = compose_jonq(b, b);
  }
  return r;
}

template <typename K>
CremonaMap<K> jonq_to_cremona(const JonqElem<K>& f) {
  RatFunc<K> hf = f.h.to_fraction();
  BivFrac<K> e1(Biv<K>(hf.num()), Biv<K>(hf.den()));
  /* canonical A has polynomial entries, so the numerators carry them */
  Biv<K> n = Biv<K>::from_ycoeffs({f.A.b().num(), f.A.a().num()});
  Biv<K> d = Biv<K>::from_ycoeffs({f.A.d().num(), f.A.c().num()});
  return CremonaMap<K>(std::move(e1), BivFrac<K>(std::move(n), std::move(d)));
}

template <typename K>
JonqElem<K> cremona_to_jonq(const CremonaMap<K>& g) {
  const BivFrac<K>&e1 = g.e1(), &e2 = g.e2();
  if (e1.num().deg_y() > 0 || e1.den().deg_y() > 0)
    throw not_jonquieres("the first coordinate moves across the fibres of x");
  Mo<K> h;
  try {
    h = Mo<K>::from_fraction(RatFunc<K>(e1.num().ycoeff(0), e1.den().ycoeff(0)));
  } catch (const domain_error&) {
    throw not_jonquieres("the base coordinate is not a Moebius map of x");
  }
  if (e2.num().deg_y() > 1 || e2.den().deg_y() > 1)
    throw not_jonquieres("the fibre coordinate is not a Moebius map of y");
  try {
    Mo<RatFunc<K>> A(RatFunc<K>(e2.num().ycoeff(1)), RatFunc<K>(e2.num().ycoeff(0)),
                     RatFunc<K>(e2.den().ycoeff(1)), RatFunc<K>(e2.den().ycoeff(0)));
    return JonqElem<K>(std::move(h), std::move(A));
  } catch (const domain_error&) {
    throw not_jonquieres("the fibre coordinate is not a Moebius map of y");
  }
}

template <typename K>
std::string JonqElem<K>::str() const {
  return jonq_to_cremona(*this).str_affine();
}

template <typename K>
JonqElem<K> parse_jonq(const std::string& s, const FieldEnv<K>& env = {}) {
  return cremona_to_jonq(parse_map<K>(s, env));
}

struct JonqDegree {
  long deg = 1;
  long base_point_count = 0;
};

/* degree of the plane map, and the base point count 2 deg - 1 away from
   the linear case */
template <typename K>
JonqDegree jonq_degree(const JonqElem<K>& f) {
  long d = jonq_to_cremona(f).deg();
  return {d, d >= 2 ? 2 * d - 1 : 0};
}

/* The class of M in the fibre tree over P is trivial when a scalar
   multiple of M is invertible over the local ring: the valuation of the
   determinant must equal twice the entry minimum. */
template <typename K>
bool matrix_class_trivial(const Mo<RatFunc<K>>& M, const Place<K>& P) {
  long m = std::min(std::min(P.val(M.a()), P.val(M.b())),
                    std::min(P.val(M.c()), P.val(M.d())));
  return P.val(M.det()) == 2 * m;
}

template <typename K>
using SingularitySet = std::vector<Place<K>>;

/* places where f moves the base vertex of its fibre tree; finite ones
   divide det(A), Infinity is found through the 1/x chart */
template <typename K>
SingularitySet<K> singular_places(const JonqElem<K>& f) {
  SingularitySet<K> out;
  for (const auto& [P, mult] : support(f.A.det()))
    if (!P.is_infinite() && !matrix_class_trivial(f.A, P)) out.push_back(P);
  if (!matrix_class_trivial(f.A, Place<K>::infinity()))
    out.push_back(Place<K>::infinity());
  std::sort(out.begin(), out.end(), Place<K>::less);
  return out;
}

template <typename K>
bool is_biregular_over(const JonqElem<K>& f, const Place<K>& P) {
  return matrix_class_trivial(f.A, P);
}

/* the places of a singularity set carried along the base map */
template <typename K>
SingularitySet<K> place_image_set(const SingularitySet<K>& S, const Mo<K>& h) {
  SingularitySet<K> out;
  out.reserve(S.size());
  for (const Place<K>& P : S) out.push_back(place_image(P, h));
  std::sort(out.begin(), out.end(), Place<K>::less);
  return out;
}

/* Proof sketch that f^n is singular and f^-n biregular over a place for
   every n >= l.  A conclusive certificate rests on exactly solved orbit
   hit times; otherwise the statement was only checked up to the horizon. */
struct FibreCert {
  long l = 0;
  bool conclusive = false;
  std::string reason;
};

/* All integers j with h^j(P) = Q, for h of infinite order with rational
   fixed points and P off them; at most one such j exists.  solvable
   reports whether the class of h admits the exact solve at all. */
struct HitSolve {
  bool solvable = false;
  std::optional<long> j;
};

HitSolve orbit_hit_time(const Mo<Rat>& h, const Place<Rat>& P, const Place<Rat>& Q);

std::optional<FibreCert> persistent_fibre_certificate(const JonqElem<Rat>& f,
                                                      const Place<Rat>& P, int N);

}  // namespace jonq

template <typename K> struct std::hash<jonq::JonqElem<K>> {
  size_t operator()(const jonq::JonqElem<K>& f) const { return f.hash(); }
};
