#include <random>
#include <set>

#include "doctest.h"
#include "jonq/fibretree.hpp"

using namespace jonq;

TEST_SUITE_BEGIN("fibretrees");

namespace {

using RF = RatFunc<Rat>;
using MRF = Mo<RF>;
using TV = TreeVertex<Rat>;
using EV = EvenV<Rat>;

Place<Rat> px() { return Place<Rat>::from_irreducible(Poly<Rat>{Rat(0), Rat(1)}); }
Place<Rat> pat(long r) {
  return Place<Rat>::from_irreducible(Poly<Rat>{Rat(-r), Rat(1)});
}
Place<Rat> pinf() { return Place<Rat>::infinity(); }

RF rfc(long n) { return RF(Rat(n)); }
RF rfx() { return RF(Poly<Rat>{Rat(0), Rat(1)}); }

MRF mc(long a, long b, long c, long d) {
  return MRF(rfc(a), rfc(b), rfc(c), rfc(d));
}
MRF dxx(long e1, long e2) {
  return MRF(rf_pow(rfx(), e1), rfc(0), rfc(0), rf_pow(rfx(), e2));
}

TV ev(const Place<Rat>& P, long d, RF u) {
  return TV::even(P, EV{d, std::move(u)});
}

Poly<Rat> rand_poly(std::mt19937& rng, int dmax) {
  std::uniform_int_distribution<int> dd(0, dmax), cd(-3, 3);
  int d = dd(rng);
  std::vector<Rat> cs(d + 1);
  for (auto& c : cs) c = Rat(cd(rng));
  return Poly<Rat>(cs);
}

/* invertible by construction: a product of elementary matrices and powers
   of diag(x, 1) */
MRF rand_mat(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind(0, 3), nf(1, 4), ed(-2, 2);
  MRF m;
  int n = nf(rng);
  for (int i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0: m = m * MRF(rfc(1), RF(rand_poly(rng, 2)), rfc(0), rfc(1)); break;
      case 1: m = m * MRF(rfc(1), rfc(0), RF(rand_poly(rng, 2)), rfc(1)); break;
      case 2: m = m * dxx(ed(rng), 0); break;
      default: {
        MRF u = mc(1, 1, 1, 2);
        m = m * u;
      }
    }
  }
  return m;
}

TV rand_vertex(std::mt19937& rng, const Place<Rat>& P) {
  TV v = canonicalize_lattice(rand_mat(rng), P);
  std::uniform_int_distribution<int> odd(0, 3);
  if (odd(rng) == 0) {
    long d = tree_distance(v, TV::base(P));
    if (d >= 2) {
      TV w = point_on_geodesic(v, TV::base(P), 2);
      return TV::odd(P, v.cls(), w.cls());
    }
  }
  return v;
}

Mo<Rat> rand_h(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  switch (pick(rng)) {
    case 0: return Mo<Rat>();
    case 1: return Mo<Rat>(Rat(1), Rat(1), Rat(0), Rat(1));
    case 2: return Mo<Rat>(Rat(2), Rat(0), Rat(0), Rat(1));
    default: return Mo<Rat>(Rat(0), Rat(1), Rat(1), Rat(0));
  }
}

JonqElem<Rat> rand_jonq(std::mt19937& rng) {
  return JonqElem<Rat>{rand_h(rng), rand_mat(rng)};
}

JVertex<Rat> rand_jvertex(std::mt19937& rng) {
  JVertex<Rat> z;
  std::uniform_int_distribution<int> with(0, 1);
  for (const Place<Rat>& P : {px(), pat(1), pinf()})
    if (with(rng)) set_coordinate(z, rand_vertex(rng, P));
  return z;
}

}  // namespace

TEST_CASE("canonical lattice forms at finite and infinite places") {
  CHECK(canonicalize_lattice(MRF(), px()) == TV::base(px()));
  CHECK(canonicalize_lattice(MRF(), pinf()) == TV::base(pinf()));
  CHECK(canonicalize_lattice(mc(3, 5, 1, 2), px()) == TV::base(px()));

  CHECK(canonicalize_lattice(dxx(1, 0), px()) == ev(px(), 1, rfc(0)));
  CHECK(canonicalize_lattice(dxx(0, 1), px()) == ev(px(), -1, rfc(0)));
  CHECK(canonicalize_lattice(dxx(1, 0), pinf()) == ev(pinf(), -1, rfc(0)));
  CHECK(canonicalize_lattice(dxx(1, 0), pat(1)) == TV::base(pat(1)));

  /* digit truncation below pi^d */
  Poly<Rat> spill{Rat(3), Rat(1), Rat(0), Rat(1)};
  MRF m(rf_pow(rfx(), 2), RF(spill), rfc(0), rfc(1));
  CHECK(canonicalize_lattice(m, px()) ==
        ev(px(), 2, RF(Poly<Rat>{Rat(3), Rat(1)})));

  /* a pole in the unreduced entry survives as a negative digit */
  MRF shear(rfc(1), rfx().inv(), rfc(0), rfc(1));
  TV far = canonicalize_lattice(shear, px());
  CHECK(far == ev(px(), 0, rfx().inv()));
  CHECK(tree_distance(far, TV::base(px())) == 4);
}

TEST_CASE("canonical form is invariant under scaling and local column moves") {
  std::mt19937 rng(2027);
  const Place<Rat> P = px();
  for (int t = 0; t < 40; ++t) {
    MRF m = rand_mat(rng);
    TV v = canonicalize_lattice(m, P);
    CHECK(canonicalize_lattice(m * MRF(rfx(), rfc(0), rfc(0), rfx()), P) == v);
    /* right factors invertible over the local ring at (x) */
    CHECK(canonicalize_lattice(m * MRF(rfc(1), RF(rand_poly(rng, 2)), rfc(0), rfc(1)), P) == v);
    CHECK(canonicalize_lattice(m * mc(1, 1, 1, 2), P) == v);
    CHECK(canonicalize_lattice(m * mc(0, 1, 1, 0), P) == v);
  }
}

TEST_CASE("smith form over the local ring matches the canonical distance") {
  const Place<Rat> P = px();
  MRF shear(rfc(1), rfx().inv(), rfc(0), rfc(1));
  LocalSmith<Rat> sm = local_smith(shear, P);
  CHECK(sm.b - sm.a == 2);

  std::mt19937 rng(11);
  for (int t = 0; t < 40; ++t) {
    MRF m1 = rand_mat(rng), m2 = rand_mat(rng);
    TV v = canonicalize_lattice(m1, P), w = canonicalize_lattice(m2, P);
    LocalSmith<Rat> s = local_smith(m1.inv() * m2, P);
    CHECK(s.b >= s.a);
    CHECK(2 * (s.b - s.a) == tree_distance(v, w));
  }
}

TEST_CASE("tree distances on spec examples") {
  const Place<Rat> P = px();
  TV base = TV::base(P);
  CHECK(tree_distance(base, base) == 0);
  CHECK(tree_distance(base, ev(P, 1, rfc(0))) == 2);
  TV vx = canonicalize_lattice(dxx(1, 0), P);
  TV vix = canonicalize_lattice(dxx(0, 1), P);
  CHECK(tree_distance(vx, vix) == 4);
  CHECK(tree_distance(vix, vx) == 4);
  CHECK_THROWS_AS(tree_distance(base, TV::base(pinf())), domain_error);
  CHECK_THROWS_AS(tree_distance(base, TV::base(pat(1))), domain_error);
}

TEST_CASE("odd vertices are unordered adjacent pairs") {
  const Place<Rat> P = px();
  EV b0;
  EV e10{1, rfc(0)};
  EV e11{1, rfc(1)};
  EV e20{2, rfc(0)};
  TV o = TV::odd(P, b0, e10);
  CHECK(o == TV::odd(P, e10, b0));
  CHECK_THROWS_AS(TV::odd(P, b0, e20), domain_error);
  CHECK_THROWS_AS(TV::odd(P, b0, b0), domain_error);

  CHECK(tree_distance(o, TV::base(P)) == 1);
  CHECK(tree_distance(o, TV::even(P, e10)) == 1);
  CHECK(tree_distance(o, TV::even(P, e20)) == 3);
  CHECK(tree_distance(o, o) == 0);
  TV o2 = TV::odd(P, e10, e20);
  CHECK(tree_distance(o, o2) == 2);
  TV o3 = TV::odd(P, e10, EV{2, rfx()});
  CHECK(tree_distance(o, o3) == 2);
  CHECK(tree_distance(o2, o3) == 2);
  CHECK(tree_distance(TV::even(P, e11), o) == 3);
}

TEST_CASE("geodesic points interpolate distances exactly") {
  std::mt19937 rng(404);
  const Place<Rat> P = px();
  for (int t = 0; t < 30; ++t) {
    TV v = rand_vertex(rng, P), w = rand_vertex(rng, P);
    long dist = tree_distance(v, w);
    CHECK(point_on_geodesic(v, w, 0) == v);
    CHECK(point_on_geodesic(v, w, dist) == w);
    for (long s = 0; s <= dist; ++s) {
      TV p = point_on_geodesic(v, w, s);
      CHECK(tree_distance(v, p) == s);
      CHECK(tree_distance(p, w) == dist - s);
    }
    CHECK_THROWS_AS(point_on_geodesic(v, w, dist + 1), domain_error);
    CHECK_THROWS_AS(point_on_geodesic(v, w, -1), domain_error);
  }
}

TEST_CASE("kinds alternate along geodesics between even vertices") {
  std::mt19937 rng(405);
  const Place<Rat> P = px();
  for (int t = 0; t < 20; ++t) {
    MRF m1 = rand_mat(rng), m2 = rand_mat(rng);
    TV v = canonicalize_lattice(m1, P), w = canonicalize_lattice(m2, P);
    long dist = tree_distance(v, w);
    CHECK(dist % 2 == 0);
    for (long s = 0; s <= dist; ++s)
      CHECK(point_on_geodesic(v, w, s).is_odd() == (s % 2 == 1));
  }
}

TEST_CASE("triangle inequality and midpoints") {
  std::mt19937 rng(406);
  const Place<Rat> P = px();
  for (int t = 0; t < 40; ++t) {
    TV u = rand_vertex(rng, P), v = rand_vertex(rng, P), w = rand_vertex(rng, P);
    CHECK(tree_distance(u, w) <= tree_distance(u, v) + tree_distance(v, w));
  }
  TV base = TV::base(P);
  CHECK(tree_midpoint(base, ev(P, 2, rfc(0) + rfx() * rfc(3))) == ev(P, 1, rfc(0)));
  CHECK(tree_midpoint(base, ev(P, 1, rfc(0))) ==
        TV::odd(P, EV{}, EV{1, rfc(0)}));
  TV vx = canonicalize_lattice(dxx(1, 0), P);
  TV vix = canonicalize_lattice(dxx(0, 1), P);
  CHECK(tree_midpoint(vx, vix) == base);
}

TEST_CASE("matrix action on one fibre tree is an isometry") {
  std::mt19937 rng(407);
  const Place<Rat> P = px();
  for (int t = 0; t < 30; ++t) {
    MRF a = rand_mat(rng), b = rand_mat(rng);
    TV v = rand_vertex(rng, P), w = rand_vertex(rng, P);
    CHECK(tree_distance(matrix_apply(a, v), matrix_apply(a, w)) ==
          tree_distance(v, w));
    CHECK(matrix_apply(a, matrix_apply(b, v)) == matrix_apply(a * b, v));
  }
  CHECK(matrix_apply(dxx(1, 0), TV::odd(px(), EV{}, EV{1, rfc(0)})) ==
        TV::odd(px(), EV{1, rfc(0)}, EV{2, rfc(0)}));
}

TEST_CASE("translation lengths from the valuation formula") {
  CHECK(translation_length_at_place(dxx(1, 0), px()) == 2);
  CHECK(translation_length_at_place(dxx(1, 0), pat(1)) == 0);
  CHECK(translation_length_at_place(dxx(1, 0), pinf()) == 2);
  CHECK(translation_length_at_place(MRF(rfc(1), rfc(1), rfc(0), rfc(1)), px()) == 0);
  CHECK(translation_length_at_place(MRF(rfc(1), rfc(1), rfc(0), rfc(1)), pinf()) == 0);
  CHECK(translation_length_at_place(dxx(1, -1), px()) == 4);
  CHECK(translation_length_at_place(mc(0, 1, -1, 0), px()) == 0);
}

TEST_CASE("translation length equals the stabilized displacement slope") {
  const Place<Rat> P = px();
  std::vector<MRF> mats = {
      dxx(1, 0), dxx(1, -1),
      MRF(rfc(1), rfx().inv(), rfc(0), rfc(1)) * dxx(1, 0) *
          MRF(rfc(1), rfx().inv(), rfc(0), rfc(1)).inv(),
      MRF(rfc(1), rfx().inv(), rfc(0), rfc(1)), mc(1, 1, 1, 2), mc(0, 1, -1, 0)};
  for (const MRF& a : mats) {
    long len = translation_length_at_place(a, P);
    std::vector<long> d(9, 0);
    MRF an;
    for (int n = 1; n <= 8; ++n) {
      an = a * an;
      d[n] = tree_distance(TV::base(P), matrix_apply(an, TV::base(P)));
    }
    if (len > 0)
      for (int n = 2; n <= 8; ++n) CHECK(d[n] - d[n - 1] == len);
    else
      for (int n = 1; n <= 8; ++n) CHECK(d[n] <= 2 * 8);
  }
}

TEST_CASE("displacement descent finds exact lengths and fixed vertices") {
  std::mt19937 rng(408);
  const Place<Rat> P = px();
  for (int t = 0; t < 40; ++t) {
    MRF a = rand_mat(rng);
    long len = translation_length_at_place(a, P);
    IsometryDescent<Rat> r = isometry_descent(
        P, [&](const TV& v) { return matrix_apply(a, v); });
    CHECK(r.length == len);
    CHECK(tree_distance(r.vertex, matrix_apply(a, r.vertex)) == len);
  }
}

TEST_CASE("elliptic fixed vertices") {
  const Place<Rat> P = px();
  CHECK(elliptic_fixed_vertex(mc(1, 3, 2, 1), P) == TV::base(P));
  CHECK(elliptic_fixed_vertex(MRF(rfc(1), RF(Poly<Rat>{Rat(0), Rat(4)}), rfc(0), rfc(1)), P) ==
        TV::base(P));

  MRF conj = dxx(1, 0) * mc(1, 1, 1, 2) * dxx(1, 0).inv();
  CHECK(elliptic_fixed_vertex(conj, P) == ev(P, 1, rfc(0)));

  MRF shear(rfc(1), rfx().inv(), rfc(0), rfc(1));
  CHECK(elliptic_fixed_vertex(shear, P) == ev(P, -1, rfc(0)));

  CHECK(!elliptic_fixed_vertex(dxx(1, 0), P).has_value());
  CHECK(!elliptic_fixed_vertex(dxx(1, -1), P).has_value());

  std::mt19937 rng(409);
  for (int t = 0; t < 30; ++t) {
    MRF a = rand_mat(rng);
    auto v = elliptic_fixed_vertex(a, P);
    if (v) CHECK(matrix_apply(a, *v) == *v);
  }
}

TEST_CASE("common fixed vertex of a family") {
  const Place<Rat> P = px();
  CommonFixed<Rat> empty = common_fixed_vertex<Rat>({}, P);
  REQUIRE(empty.vertex.has_value());
  CHECK(*empty.vertex == TV::base(P));

  /* conjugates of constant matrices with coprime reductions share exactly
     the conjugated base vertex */
  MRF d1 = dxx(1, 0);
  MRF a1 = d1 * mc(1, 1, 1, 2) * d1.inv();
  MRF a2 = d1 * mc(2, 1, 1, 1) * d1.inv();
  CommonFixed<Rat> two = common_fixed_vertex<Rat>({a1, a2}, P);
  REQUIRE(two.vertex.has_value());
  CHECK(*two.vertex == ev(P, 1, rfc(0)));

  /* anisotropic constants fix only base; conjugating one up and one down
     separates the fixed sets and makes the product hyperbolic */
  MRF b1 = d1 * mc(1, 1, 1, 2) * d1.inv();
  MRF b2 = d1.inv() * mc(1, 1, 1, 2) * d1;
  CommonFixed<Rat> far = common_fixed_vertex<Rat>({b1, b2}, P);
  CHECK(!far.vertex.has_value());
  REQUIRE(far.witness == std::vector<int>{0, 1});
  CHECK(translation_length_at_place(b1 * b2, P) == 8);

  CommonFixed<Rat> hyp = common_fixed_vertex<Rat>({dxx(1, 0)}, P);
  CHECK(!hyp.vertex.has_value());
  CHECK(hyp.witness == std::vector<int>{0});

  std::mt19937 rng(410);
  for (int t = 0; t < 20; ++t) {
    std::vector<MRF> as = {rand_mat(rng), rand_mat(rng), rand_mat(rng)};
    CommonFixed<Rat> r = common_fixed_vertex(as, P);
    if (r.vertex) {
      for (const MRF& a : as) CHECK(matrix_apply(a, *r.vertex) == *r.vertex);
    } else {
      MRF w;
      for (int i : r.witness) w = w * as[i];
      CHECK(translation_length_at_place(w, P) > 0);
    }
  }
}

TEST_CASE("circumcenters of finite orbits") {
  const Place<Rat> P = px();
  TV base = TV::base(P);
  TV e10 = ev(P, 1, rfc(0));
  CHECK(finite_orbit_center<Rat>({e10}) == e10);
  CHECK(finite_orbit_center<Rat>({base, e10}) == TV::odd(P, EV{}, EV{1, rfc(0)}));
  CHECK(finite_orbit_center<Rat>({e10, base}) == TV::odd(P, EV{}, EV{1, rfc(0)}));

  TV e11 = ev(P, 1, rfc(1));
  TV e12 = ev(P, 1, rfc(2));
  CHECK(finite_orbit_center<Rat>({e10, e11, e12}) == base);
  CHECK(finite_orbit_center<Rat>({e10, e11, e12, base}) == base);

  /* odd diameter: the candidate closer to base wins */
  TV o = TV::odd(P, EV{}, EV{1, rfc(0)});
  CHECK(finite_orbit_center<Rat>({e10, o}) == o);
  CHECK_THROWS_AS(finite_orbit_center<Rat>({}), domain_error);
}

TEST_CASE("action on the complex matches the spec picture") {
  JonqElem<Rat> f = parse_jonq<Rat>("(x, x*y)");
  JVertex<Rat> basept;
  JVertex<Rat> image = act_on_vertex(f, basept);
  REQUIRE(image.size() == 2);
  CHECK(coordinate_at(image, px()) == ev(px(), 1, rfc(0)));
  CHECK(coordinate_at(image, pinf()) == ev(pinf(), -1, rfc(0)));
  CHECK(tree_distance(coordinate_at(image, px()), TV::base(px())) == 2);
  CHECK(tree_distance(coordinate_at(image, pinf()), TV::base(pinf())) == 2);
  CHECK(jvertex_str(image) == "{(x): even(1, 0); inf: even(-1, 0)}");
  CHECK(jvertex_str(basept) == "{}");

  JonqElem<Rat> id;
  std::mt19937 rng(411);
  for (int t = 0; t < 10; ++t) {
    JVertex<Rat> z = rand_jvertex(rng);
    CHECK(act_on_vertex(id, z) == z);
  }
}

TEST_CASE("action is a twisted cocycle and never stores base coordinates") {
  std::mt19937 rng(412);
  for (int t = 0; t < 60; ++t) {
    JonqElem<Rat> f = rand_jonq(rng), g = rand_jonq(rng);
    JVertex<Rat> z = rand_jvertex(rng);
    CHECK(act_on_vertex(f, act_on_vertex(g, z)) ==
          act_on_vertex(compose_jonq(f, g), z));
    JVertex<Rat> fz = act_on_vertex(f, z);
    for (const auto& [P, v] : fz) {
      CHECK(!v.is_base());
      CHECK(v.place() == P);
    }
    JVertex<Rat> back = act_on_vertex(inverse_jonq(f), fz);
    CHECK(back == z);
  }
}

TEST_CASE("action is isometric place by place") {
  std::mt19937 rng(413);
  for (int t = 0; t < 40; ++t) {
    JonqElem<Rat> f = rand_jonq(rng);
    JVertex<Rat> z = rand_jvertex(rng), w = rand_jvertex(rng);
    JVertex<Rat> fz = act_on_vertex(f, z), fw = act_on_vertex(f, w);
    for (const Place<Rat>& P : {px(), pat(1), pat(-2), pinf()}) {
      Place<Rat> q = place_image(P, f.h);
      CHECK(tree_distance(coordinate_at(fz, q), coordinate_at(fw, q)) ==
            tree_distance(coordinate_at(z, P), coordinate_at(w, P)));
    }
  }
}

TEST_CASE("biregularity matches base coordinates of the moved base point") {
  std::mt19937 rng(414);
  for (int t = 0; t < 40; ++t) {
    JonqElem<Rat> f = rand_jonq(rng);
    JVertex<Rat> fb = act_on_vertex(f, JVertex<Rat>{});
    std::vector<Place<Rat>> cand = singular_places(f);
    for (const Place<Rat>& P : {px(), pat(1), pinf()})
      if (!std::count(cand.begin(), cand.end(), P)) cand.push_back(P);
    for (const Place<Rat>& P : cand) {
      Place<Rat> q = place_image(P, f.h);
      CHECK(is_biregular_over(f, P) == coordinate_at(fb, q).is_base());
    }
  }
}

TEST_CASE("marked singular places generalize the unmarked ones") {
  std::mt19937 rng(415);
  JVertex<Rat> basept;
  for (int t = 0; t < 30; ++t) {
    JonqElem<Rat> f = rand_jonq(rng);
    CHECK(singular_places(f, basept) == singular_places(f));
    JVertex<Rat> z = rand_jvertex(rng);
    CHECK(singular_places(f, z).empty() == (act_on_vertex(f, z) == z));
    for (const Place<Rat>& P : singular_places(f, z))
      CHECK(!is_biregular_over(f, P, z));
    for (const Place<Rat>& P : {px(), pat(1), pinf()})
      if (is_biregular_over(f, P, z)) {
        SingularitySet<Rat> s = singular_places(f, z);
        CHECK(!std::count(s.begin(), s.end(), P));
      }
  }
}

TEST_CASE("vertex serialization is ordered and hashable") {
  const Place<Rat> P = px();
  TV a = ev(P, 1, rfc(0)), b = ev(P, 1, rfc(1));
  CHECK(a.str() == "even(1, 0)");
  CHECK(TV::odd(P, a.cls(), EV{2, rfx()}).str() == "odd(1, 0)(2, x)");
  std::set<size_t> hashes;
  std::mt19937 rng(416);
  for (int t = 0; t < 25; ++t) hashes.insert(rand_vertex(rng, P).hash());
  CHECK(hashes.size() > 10);
  CHECK(a.hash() != b.hash());
  CHECK(std::hash<TV>()(a) == a.hash());
}

TEST_SUITE_END();
