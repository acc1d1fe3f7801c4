#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "jonq/jonquieres.hpp"

namespace jonq {

template <typename K>
RatFunc<K> rf_pow(const RatFunc<K>& f, long e) {
  if (e == 0) return RatFunc<K>(K(1));
  RatFunc<K> b = e < 0 ? f.inv() : f;
  unsigned long n = (unsigned long)(e < 0 ? -e : e);
  return RatFunc<K>(b.num().pow(n), b.den().pow(n));
}

template <typename K>
RatFunc<K> uniformizer_pow(const Place<K>& P, long e) {
  return rf_pow(P.uniformizer(), e);
}

/* Canonical digit expansion of g truncated below pi^d: the sum of
   c_i * pi^i over i < d, where c_i is the tautological residue lift of the
   i-th coefficient.  Digits with negative i are kept, so the result may
   have a pole at P. */
template <typename K>
RatFunc<K> digits_below(const RatFunc<K>& g0, const Place<K>& P, long d) {
  RatFunc<K> g = g0, u = RatFunc<K>(K(0));
  while (!g.is_zero_r()) {
    long i = P.val(g);
    if (i >= d) break;
    RatFunc<K> term =
        RatFunc<K>(P.residue(g * uniformizer_pow(P, -i))) * uniformizer_pow(P, i);
    u = u + term;
    g = g - term;
  }
  return u;
}

/* A lattice class over the local ring at a place, in the canonical form
   spanned by the columns of [[pi^d, u],[0, 1]] with u a digit expansion
   below pi^d.  The exponent d may be negative; the base class is (0, 0). */
template <typename K>
struct EvenV {
  long d = 0;
  RatFunc<K> u = RatFunc<K>(K(0));

  bool is_base() const { return d == 0 && u.is_zero_r(); }

  Mo<RatFunc<K>> rep(const Place<K>& P) const {
    return Mo<RatFunc<K>>(uniformizer_pow(P, d), u, RatFunc<K>(K(0)),
                          RatFunc<K>(K(1)));
  }

  friend bool operator==(const EvenV& a, const EvenV& b) {
    return a.d == b.d && a.u == b.u;
  }
  friend bool operator!=(const EvenV& a, const EvenV& b) { return !(a == b); }

  static bool less(const EvenV& a, const EvenV& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.u.num() != b.u.num()) return Poly<K>::less(a.u.num(), b.u.num());
    return Poly<K>::less(a.u.den(), b.u.den());
  }

  size_t hash() const {
    size_t uh = u.num().hash() ^ (u.den().hash() << 1);
    return std::hash<long>()(d) ^ (uh * 0x9e3779b97f4a7c15ULL);
  }

  std::string str() const {
    return "(" + std::to_string(d) + ", " + u.str("x") + ")";
  }
};

/* Number of elementary transformations between two lattice classes: the
   difference of the elementary-divisor valuations of M1^-1 * M2, computed
   from the canonical forms directly. */
template <typename K>
long lattice_delta(const EvenV<K>& a, const EvenV<K>& b, const Place<K>& P) {
  long m = std::min(std::min(a.d, b.d), P.val(b.u - a.u));
  return a.d + b.d - 2 * m;
}

/* Vertex of the subdivided fibre tree at one place: Even vertices are
   lattice classes, Odd vertices are unordered pairs of adjacent classes. */
template <typename K>
class TreeVertex {
  Place<K> place_ = Place<K>::infinity();
  bool odd_ = false;
  EvenV<K> a_, b_;

  TreeVertex(Place<K> P, bool odd, EvenV<K> a, EvenV<K> b)
      : place_(std::move(P)), odd_(odd), a_(std::move(a)), b_(std::move(b)) {}

public:
  TreeVertex() = default;

  static TreeVertex even(const Place<K>& P, EvenV<K> e) {
    return TreeVertex(P, false, std::move(e), EvenV<K>{});
  }

  static TreeVertex odd(const Place<K>& P, EvenV<K> x, EvenV<K> y) {
    if (lattice_delta(x, y, P) != 1)
      throw domain_error("odd vertex endpoints must be adjacent classes");
    if (EvenV<K>::less(y, x)) std::swap(x, y);
    return TreeVertex(P, true, std::move(x), std::move(y));
  }

  static TreeVertex base(const Place<K>& P) { return even(P, EvenV<K>{}); }

  const Place<K>& place() const { return place_; }
  bool is_odd() const { return odd_; }
  bool is_base() const { return !odd_ && a_.is_base(); }

  const EvenV<K>& cls() const {
    if (odd_) throw domain_error("odd vertex has no single lattice class");
    return a_;
  }
  const EvenV<K>& first() const { return a_; }
  const EvenV<K>& second() const {
    if (!odd_) throw domain_error("even vertex has a single lattice class");
    return b_;
  }

  friend bool operator==(const TreeVertex& v, const TreeVertex& w) {
    return v.place_ == w.place_ && v.odd_ == w.odd_ && v.a_ == w.a_ &&
           (!v.odd_ || v.b_ == w.b_);
  }
  friend bool operator!=(const TreeVertex& v, const TreeVertex& w) {
    return !(v == w);
  }

  /* kind first (even before odd), then the class pair */
  static bool less(const TreeVertex& v, const TreeVertex& w) {
    if (v.odd_ != w.odd_) return w.odd_;
    if (v.a_ != w.a_) return EvenV<K>::less(v.a_, w.a_);
    if (v.odd_ && v.b_ != w.b_) return EvenV<K>::less(v.b_, w.b_);
    return false;
  }

  size_t hash() const {
    size_t h = place_.hash() * 1099511628211ULL + (odd_ ? 0x9e37 : 0);
    h ^= a_.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    if (odd_) h ^= b_.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  std::string str() const {
    return odd_ ? "odd" + a_.str() + b_.str() : "even" + a_.str();
  }
};

/* The class of the column span of M over the local ring at P, modulo
   scalars, by valuation-pivoted column reduction. */
template <typename K>
TreeVertex<K> canonicalize_lattice(const Mo<RatFunc<K>>& M, const Place<K>& P) {
  RatFunc<K> a = M.a(), b = M.b(), c = M.c(), d = M.d();
  if (P.val(c) < P.val(d)) {
    std::swap(a, b);
    std::swap(c, d);
  }
  if (!c.is_zero_r()) a = a - c / d * b;
  /* now the span is that of [[a, b],[0, d]]; scale the second column to
     (u, 1) and reduce u modulo pi^d times the top-left valuation gap */
  long e = P.val(a) - P.val(d);
  EvenV<K> out;
  out.d = e;
  out.u = digits_below(b / d, P, e);
  return TreeVertex<K>::even(P, out);
}

template <typename K>
long tree_distance(const TreeVertex<K>& v, const TreeVertex<K>& w) {
  if (v.place() != w.place())
    throw domain_error("vertices live over different places");
  const Place<K>& P = v.place();
  if (!v.is_odd() && !w.is_odd())
    return 2 * lattice_delta(v.cls(), w.cls(), P);
  if (!v.is_odd() && w.is_odd())
    return 1 + 2 * std::min(lattice_delta(v.cls(), w.first(), P),
                            lattice_delta(v.cls(), w.second(), P));
  if (v.is_odd() && !w.is_odd()) return tree_distance(w, v);
  if (v == w) return 0;
  long best = val_inf;
  for (const EvenV<K>* x : {&v.first(), &v.second()})
    for (const EvenV<K>* y : {&w.first(), &w.second()})
      best = std::min(best, lattice_delta(*x, *y, P));
  return 2 + 2 * best;
}

/* N factored as U * diag(pi^a, pi^b) * V with U, V invertible over the
   local ring at P and a <= b; V is not tracked. */
template <typename K>
struct LocalSmith {
  Mo<RatFunc<K>> u;
  long a = 0, b = 0;
};

template <typename K>
LocalSmith<K> local_smith(const Mo<RatFunc<K>>& N, const Place<K>& P) {
  using RF = RatFunc<K>;
  RF e[4] = {N.a(), N.b(), N.c(), N.d()};
  RF u[4] = {RF(K(1)), RF(K(0)), RF(K(0)), RF(K(1))};
  int pivot = 0;
  for (int i = 1; i < 4; ++i)
    if (P.val(e[i]) < P.val(e[pivot])) pivot = i;
  if (pivot >= 2) {
    /* row swap on e is a column swap on u */
    std::swap(e[0], e[2]);
    std::swap(e[1], e[3]);
    std::swap(u[0], u[1]);
    std::swap(u[2], u[3]);
    pivot -= 2;
  }
  if (pivot == 1) {
    std::swap(e[0], e[1]);
    std::swap(e[2], e[3]);
  }
  if (!e[2].is_zero_r()) {
    RF q = e[2] / e[0];
    e[2] = e[2] - q * e[0];
    e[3] = e[3] - q * e[1];
    u[0] = u[0] + q * u[1];
    u[2] = u[2] + q * u[3];
  }
  LocalSmith<K> out;
  out.u = Mo<RF>(u[0], u[1], u[2], u[3]);
  out.a = P.val(e[0]);
  out.b = P.val(N.det()) - out.a;
  return out;
}

/* Vertex at sub-distance s from e1 on the geodesic from e1 to e2, via the
   lattice ladder M1 * U * diag(pi^(a+t), pi^b) which walks from e2 at t=0
   to e1 at t = b-a. */
template <typename K>
TreeVertex<K> even_geodesic_point(const EvenV<K>& e1, const EvenV<K>& e2,
                                  const Place<K>& P, long s) {
  Mo<RatFunc<K>> m1 = e1.rep(P);
  LocalSmith<K> sm = local_smith(m1.inv() * e2.rep(P), P);
  long delta = sm.b - sm.a;
  if (s < 0 || s > 2 * delta)
    throw domain_error("geodesic parameter out of range");
  auto rung = [&](long t) {
    Mo<RatFunc<K>> diag(uniformizer_pow(P, sm.a + t), RatFunc<K>(K(0)),
                        RatFunc<K>(K(0)), uniformizer_pow(P, sm.b));
    return canonicalize_lattice(m1 * sm.u * diag, P);
  };
  if (s % 2 == 0) return rung(delta - s / 2);
  TreeVertex<K> lo = rung(delta - (s - 1) / 2), hi = rung(delta - (s + 1) / 2);
  return TreeVertex<K>::odd(P, lo.cls(), hi.cls());
}

template <typename K>
TreeVertex<K> point_on_geodesic(const TreeVertex<K>& v, const TreeVertex<K>& w,
                                long s) {
  long dist = tree_distance(v, w);
  if (s < 0 || s > dist) throw domain_error("geodesic parameter out of range");
  if (s == 0) return v;
  if (s == dist) return w;
  const Place<K>& P = v.place();
  if (v.is_odd()) {
    TreeVertex<K> x = TreeVertex<K>::even(P, v.first());
    TreeVertex<K> y = TreeVertex<K>::even(P, v.second());
    return point_on_geodesic(tree_distance(x, w) < tree_distance(y, w) ? x : y,
                             w, s - 1);
  }
  if (w.is_odd()) {
    TreeVertex<K> x = TreeVertex<K>::even(P, w.first());
    TreeVertex<K> y = TreeVertex<K>::even(P, w.second());
    return point_on_geodesic(
        v, tree_distance(v, x) < tree_distance(v, y) ? x : y, s);
  }
  return even_geodesic_point(v.cls(), w.cls(), P, s);
}

template <typename K>
TreeVertex<K> tree_midpoint(const TreeVertex<K>& v, const TreeVertex<K>& w) {
  return point_on_geodesic(v, w, tree_distance(v, w) / 2);
}

/* Untwisted action of a vertical matrix on one fibre tree. */
template <typename K>
TreeVertex<K> matrix_apply(const Mo<RatFunc<K>>& A, const TreeVertex<K>& v) {
  const Place<K>& P = v.place();
  if (!v.is_odd()) return canonicalize_lattice(A * v.cls().rep(P), P);
  TreeVertex<K> x = canonicalize_lattice(A * v.first().rep(P), P);
  TreeVertex<K> y = canonicalize_lattice(A * v.second().rep(P), P);
  return TreeVertex<K>::odd(P, x.cls(), y.cls());
}

template <typename K>
long translation_length_at_place(const Mo<RatFunc<K>>& A, const Place<K>& P) {
  long vd = P.val(A.det()), vt = P.val(A.a() + A.d());
  if (vt >= val_inf) return 0;
  return 2 * std::max(0L, vd - 2 * vt);
}

/* Displacement descent for any kind-preserving isometry of one fibre tree.
   The displacement of the midpoint of [v, Tv] is max(L, d(v,Tv) - 2), so
   the iteration reaches a fixed vertex when L = 0 and otherwise stalls at
   the translation length with the current vertex on the axis. */
template <typename K>
struct IsometryDescent {
  long length = 0;
  TreeVertex<K> vertex;
};

template <typename K, typename F>
IsometryDescent<K> isometry_descent(const Place<K>& P, F&& step) {
  TreeVertex<K> v = TreeVertex<K>::base(P);
  long prev = -1;
  for (int guard = 0; guard < 4096; ++guard) {
    TreeVertex<K> w = step(v);
    long d = tree_distance(v, w);
    if (d == 0) return {0, v};
    if (d == prev) return {d, v};
    prev = d;
    v = tree_midpoint(v, w);
  }
  throw domain_error("isometry descent did not stabilize");
}

template <typename K>
std::optional<TreeVertex<K>> elliptic_fixed_vertex(const Mo<RatFunc<K>>& A,
                                                   const Place<K>& P) {
  if (translation_length_at_place(A, P) > 0) return std::nullopt;
  IsometryDescent<K> r = isometry_descent(
      P, [&](const TreeVertex<K>& v) { return matrix_apply(A, v); });
  if (r.length != 0)
    throw domain_error("elliptic matrix stalled at positive displacement");
  return r.vertex;
}

/* Result of the common-fixed-vertex search: either a vertex fixed by every
   input, or a witness word (indices into the inputs, applied left to
   right as a product) with positive translation length. */
template <typename K>
struct CommonFixed {
  std::optional<TreeVertex<K>> vertex;
  std::vector<int> witness;
};

template <typename K>
CommonFixed<K> common_fixed_isometries(
    const std::vector<std::function<TreeVertex<K>(const TreeVertex<K>&)>>& ts,
    const Place<K>& P) {
  for (int i = 0; i < (int)ts.size(); ++i)
    if (isometry_descent(P, ts[i]).length > 0) return {std::nullopt, {i}};
  for (int i = 0; i < (int)ts.size(); ++i)
    for (int j = i + 1; j < (int)ts.size(); ++j) {
      auto prod = [&](const TreeVertex<K>& v) { return ts[i](ts[j](v)); };
      if (isometry_descent(P, prod).length > 0) return {std::nullopt, {i, j}};
    }
  /* all pairwise products elliptic: the fixed trees intersect pairwise,
     hence globally; the midpoint of [v, Tv] is the projection of v onto
     the fixed tree of T, and each projection step shrinks the distance to
     any common fixed vertex by the displacement it removes */
  TreeVertex<K> v = TreeVertex<K>::base(P);
  for (int guard = 0; guard < 65536; ++guard) {
    long worst = 0;
    TreeVertex<K> image = v;
    for (const auto& t : ts) {
      TreeVertex<K> w = t(v);
      long d = tree_distance(v, w);
      if (d > worst) {
        worst = d;
        image = w;
      }
    }
    if (worst == 0) return {v, {}};
    v = tree_midpoint(v, image);
  }
  throw domain_error("projection onto the common fixed tree did not stabilize");
}

template <typename K>
CommonFixed<K> common_fixed_vertex(const std::vector<Mo<RatFunc<K>>>& as,
                                   const Place<K>& P) {
  std::vector<std::function<TreeVertex<K>(const TreeVertex<K>&)>> ts;
  for (const Mo<RatFunc<K>>& a : as)
    ts.push_back(
        [a, P](const TreeVertex<K>& v) { return matrix_apply(a, v); });
  return common_fixed_isometries(ts, P);
}

/* Circumcenter of a finite set of vertices at one place: the middle of a
   diameter path; on ties the candidate closest to base wins, then the
   vertex order decides. */
template <typename K>
TreeVertex<K> finite_orbit_center(std::vector<TreeVertex<K>> orbit) {
  if (orbit.empty()) throw domain_error("center of an empty orbit");
  std::sort(orbit.begin(), orbit.end(), TreeVertex<K>::less);
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  long diam = 0;
  size_t bi = 0, bj = 0;
  for (size_t i = 0; i < orbit.size(); ++i)
    for (size_t j = i; j < orbit.size(); ++j) {
      long d = tree_distance(orbit[i], orbit[j]);
      if (d > diam) {
        diam = d;
        bi = i;
        bj = j;
      }
    }
  if (diam == 0) return orbit[0];
  TreeVertex<K> lo = point_on_geodesic(orbit[bi], orbit[bj], diam / 2);
  if (diam % 2 == 0) return lo;
  TreeVertex<K> hi = point_on_geodesic(orbit[bi], orbit[bj], diam / 2 + 1);
  TreeVertex<K> base = TreeVertex<K>::base(lo.place());
  long dl = tree_distance(lo, base), dh = tree_distance(hi, base);
  if (dl != dh) return dl < dh ? lo : hi;
  return TreeVertex<K>::less(lo, hi) ? lo : hi;
}

template <typename K>
struct PlaceLess {
  bool operator()(const Place<K>& a, const Place<K>& b) const {
    return Place<K>::less(a, b);
  }
};

/* Point of the Jonquieres complex: a marking of every fibre tree, stored
   as its non-base coordinates only. */
template <typename K>
using JVertex = std::map<Place<K>, TreeVertex<K>, PlaceLess<K>>;

template <typename K>
TreeVertex<K> coordinate_at(const JVertex<K>& z, const Place<K>& P) {
  auto it = z.find(P);
  return it == z.end() ? TreeVertex<K>::base(P) : it->second;
}

template <typename K>
void set_coordinate(JVertex<K>& z, const TreeVertex<K>& v) {
  if (v.is_base())
    z.erase(v.place());
  else
    z.insert_or_assign(v.place(), v);
}

template <typename K>
std::string jvertex_str(const JVertex<K>& z) {
  std::string out = "{";
  bool first = true;
  for (const auto& [P, v] : z) {
    if (!first) out += "; ";
    first = false;
    out += P.str() + ": " + v.str();
  }
  return out + "}";
}

/* Twisted action on a single coordinate: the vertex at P moves to the
   class of A(h^-1(x)) * M(h^-1(x)) at h(P). */
template <typename K>
TreeVertex<K> act_tree_vertex(const JonqElem<K>& f, const TreeVertex<K>& v) {
  const Place<K>& P = v.place();
  Place<K> q = place_image(P, f.h);
  RatFunc<K> hinv = f.h.inv().to_fraction();
  auto push = [&](const EvenV<K>& e) {
    return canonicalize_lattice(mo_subst(f.A * e.rep(P), hinv), q);
  };
  if (!v.is_odd()) return push(v.cls());
  return TreeVertex<K>::odd(q, push(v.first()).cls(), push(v.second()).cls());
}

template <typename K>
JVertex<K> act_on_vertex(const JonqElem<K>& f, const JVertex<K>& z) {
  std::vector<Place<K>> sources;
  for (const auto& [P, v] : z) sources.push_back(P);
  for (const Place<K>& P : singular_places(f))
    if (!std::count(sources.begin(), sources.end(), P)) sources.push_back(P);
  JVertex<K> out;
  for (const Place<K>& P : sources)
    set_coordinate(out, act_tree_vertex(f, coordinate_at(z, P)));
  return out;
}

/* Marked variants of the biregularity tests: f is biregular over P for the
   marking z when it carries the coordinate of z at P to the coordinate of
   z at h(P). */
template <typename K>
bool is_biregular_over(const JonqElem<K>& f, const Place<K>& P,
                       const JVertex<K>& z) {
  TreeVertex<K> image = act_tree_vertex(f, coordinate_at(z, P));
  return image == coordinate_at(z, image.place());
}

template <typename K>
SingularitySet<K> singular_places(const JonqElem<K>& f, const JVertex<K>& z) {
  Mo<K> hinv = f.h.inv();
  std::vector<Place<K>> cand;
  for (const auto& [P, v] : z) {
    cand.push_back(P);
    cand.push_back(place_image(P, hinv));
  }
  for (const Place<K>& P : singular_places(f)) cand.push_back(P);
  std::sort(cand.begin(), cand.end(),
            [](const Place<K>& a, const Place<K>& b) { return Place<K>::less(a, b); });
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  SingularitySet<K> out;
  for (const Place<K>& P : cand)
    if (!is_biregular_over(f, P, z)) out.push_back(P);
  return out;
}

}  // namespace jonq

namespace std {
template <typename K>
struct hash<jonq::TreeVertex<K>> {
  size_t operator()(const jonq::TreeVertex<K>& v) const { return v.hash(); }
};
}  // namespace std
