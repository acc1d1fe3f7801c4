#include <algorithm>
#include <cstdlib>
#include <random>

#include "doctest.h"
#include "jonq/growth.hpp"

using namespace jonq;

namespace {

using J = JonqElem<Rat>;
using CM = CremonaMap<Rat>;
using RF = RatFunc<Rat>;

J jm(const std::string& s) { return parse_jonq<Rat>(s); }

GroupSpec grp(std::initializer_list<const char*> ss) {
  std::vector<J> gens;
  for (const char* s : ss) gens.push_back(jm(s));
  return make_group(std::move(gens));
}

CM doubling_map() {
  return parse_map<Rat>("(y, y^2 - x)")
      .with_inverse(parse_map<Rat>("(x^2 - y, x)"));
}

/* monomial map with Fibonacci degree sequence; iterates stay one-term */
CM fibonacci_map() {
  return parse_map<Rat>("(y, x*y)").with_inverse(parse_map<Rat>("(y/x, x)"));
}

std::vector<long> degrees(const DegreeTable& t) {
  std::vector<long> out;
  for (const auto& row : t.rows) out.push_back(row.second);
  return out;
}

long lattice_count(int n) {
  long c = 0;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j)
      if (std::abs(i) + std::abs(j) <= n) ++c;
  return c;
}

Poly<Rat> rand_poly(std::mt19937_64& rng, int dmax) {
  std::uniform_int_distribution<int> c(-5, 5), d(0, dmax);
  int deg = d(rng);
  std::vector<Rat> cs;
  for (int i = 0; i <= deg; ++i) cs.push_back(Rat(c(rng)));
  return Poly<Rat>(std::move(cs));
}

Mo<RF> rand_vert(std::mt19937_64& rng, int dmax) {
  for (;;) {
    try {
      return Mo<RF>(RF(rand_poly(rng, dmax)), RF(rand_poly(rng, dmax)),
                    RF(rand_poly(rng, dmax)), RF(rand_poly(rng, dmax)));
    } catch (const domain_error&) {
    }
  }
}

/* vertical generators with degree at most two as plane maps */
J rand_small_jonq(std::mt19937_64& rng) {
  for (;;) {
    J f(Mo<Rat>(), rand_vert(rng, 1));
    if (jonq_degree(f).deg <= 2) return f;
  }
}

}  // namespace

TEST_SUITE_BEGIN("growth");

TEST_CASE("ball sizes follow the involution and free abelian counts") {
  GroupSpec invol = grp({"(-x, y)"});
  CHECK(ball(invol, 0).size() == 1);
  for (int n = 1; n <= 5; ++n) CHECK(ball(invol, n).size() == 2);

  GroupSpec shear = grp({"(x, y + 1/x)"});
  for (int n = 0; n <= 6; ++n)
    CHECK(ball(shear, n).size() == (size_t)(2 * n + 1));

  GroupSpec pair = grp({"(2*x, y)", "(3*x, y)"});
  for (int n = 0; n <= 5; ++n)
    CHECK(ball(pair, n).size() == (size_t)lattice_count(n));
}

TEST_CASE("balls start at the identity and include generator inverses") {
  GroupSpec g = grp({"(x, x*y)"});
  std::vector<J> b1 = ball(g, 1);
  REQUIRE(b1.size() == 3);
  CHECK(b1[0].is_identity());
  CHECK(std::find(b1.begin(), b1.end(), g.gens[0]) != b1.end());
  CHECK(std::find(b1.begin(), b1.end(), inverse_jonq(g.gens[0])) != b1.end());
  CHECK(ball(g, 3) == ball(g, 3));
}

TEST_CASE("the element budget signals an oversized ball") {
  GroupSpec pair = grp({"(2*x, y)", "(3*x, y)"});
  BallOptions tight;
  tight.max_elements = 5;
  CHECK_THROWS_AS(ball(pair, 3, tight), BallTooLarge);
  CHECK_THROWS_AS(degree_table(pair, 3, tight), BallTooLarge);
  CHECK_THROWS_AS(ball(pair, -1), domain_error);
}

TEST_CASE("degree tables match the frozen sequences") {
  DegreeTable lin = degree_table(grp({"(x, x*y)"}), 6);
  CHECK(degrees(lin) == std::vector<long>{1, 2, 3, 4, 5, 6, 7});
  CHECK(lin.jonq_bound_k == 1);
  CHECK(lin.jonq_bound_holds);
  CHECK(lin.fingerprint == "g0 = (x, x*y)");

  DegreeTable flat =
      degree_table(grp({"(x, y + 1/x)", "(x, y + 1/(x - 1))"}), 8);
  CHECK(degrees(flat) == std::vector<long>{1, 2, 3, 3, 3, 3, 3, 3, 3});
  CHECK(flat.jonq_bound_holds);

  DegreeTable dbl = degree_table(std::vector<CM>{doubling_map()}, 6);
  CHECK(degrees(dbl) == std::vector<long>{1, 2, 4, 8, 16, 32, 64});
  CHECK(!dbl.jonq_bound_k.has_value());
  CHECK(dbl.fingerprint == "(y, y^2 - x)");
}

TEST_CASE("degree tables print tab separated rows") {
  DegreeTable t = degree_table(grp({"(x, x*y)"}), 2);
  CHECK(t.tsv() == "0\t1\n1\t2\n2\t3\n");
}

TEST_CASE("the classifier names the four model families") {
  GrowthClass flat = classify_growth(
      degree_table(grp({"(x, y + 1/x)", "(x, y + 1/(x - 1))"}), 8));
  CHECK(flat.kind == GrowthClass::Bounded);
  CHECK(flat.str() == "bounded (window n = 6..8)");

  GrowthClass lin = classify_growth(degree_table(grp({"(x, x*y)"}), 6));
  CHECK(lin.kind == GrowthClass::Linear);
  CHECK(lin.window_begin == 1);
  CHECK(lin.window_end == 6);

  GrowthClass expo =
      classify_growth(degree_table(std::vector<CM>{doubling_map()}, 6));
  CHECK(expo.kind == GrowthClass::Exponential);
  REQUIRE(expo.bracket.has_value());
  CHECK(expo.bracket->first == Rat(2));
  CHECK(expo.bracket->second == Rat(2));

  DegreeTable quad;
  for (int n = 0; n <= 7; ++n) quad.rows.emplace_back(n, 1 + n * n);
  CHECK(classify_growth(quad).kind == GrowthClass::Quadratic);
}

TEST_CASE("the classifier reports ambiguity with its ratio bracket") {
  DegreeTable stutter;
  std::vector<long> v{1, 10, 10, 11, 11, 12, 12, 13};
  for (int n = 0; n < (int)v.size(); ++n) stutter.rows.emplace_back(n, v[n]);
  GrowthClass c = classify_growth(stutter);
  CHECK(c.kind == GrowthClass::Inconclusive);
  REQUIRE(c.bracket.has_value());
  CHECK(c.bracket->first == Rat(1));
  CHECK(c.bracket->second == Rat(13, 12));

  DegreeTable tiny;
  for (int n = 0; n <= 3; ++n) tiny.rows.emplace_back(n, 1);
  CHECK_THROWS_AS(classify_growth(tiny), domain_error);
}

TEST_CASE("the verdict is stable under enlarging the generating set") {
  GroupSpec flat = grp({"(x, y + 1/x)", "(x, y + 1/(x - 1))"});
  GroupSpec flat2 = flat;
  flat2.gens.push_back(compose_jonq(flat.gens[0], flat.gens[1]));
  flat2.names.push_back("g0*g1");
  CHECK(classify_growth(degree_table(flat, 8)).kind == GrowthClass::Bounded);
  CHECK(classify_growth(degree_table(flat2, 8)).kind == GrowthClass::Bounded);

  GroupSpec lin = grp({"(x, x*y)"});
  GroupSpec lin2 = lin;
  lin2.gens.push_back(compose_jonq(lin.gens[0], lin.gens[0]));
  lin2.names.push_back("g0^2");
  CHECK(classify_growth(degree_table(lin, 6)).kind == GrowthClass::Linear);
  CHECK(classify_growth(degree_table(lin2, 6)).kind == GrowthClass::Linear);

  CM f = fibonacci_map();
  CM f2 = compose_cremona(f, f).with_inverse(
      compose_cremona(f.inverse(), f.inverse()));
  GrowthClass one = classify_growth(degree_table(std::vector<CM>{f}, 6));
  GrowthClass two = classify_growth(degree_table(std::vector<CM>{f, f2}, 6));
  CHECK(one.kind == GrowthClass::Exponential);
  CHECK(two.kind == GrowthClass::Exponential);
}

TEST_CASE("groups with a fixed vertex have bounded degree growth") {
  std::vector<GroupSpec> pool;
  pool.push_back(grp({"(x, y + 1/x)", "(x, y + 1/(x - 1))"}));
  pool.push_back(grp({"(2*x, y)"}));
  pool.push_back(grp({"(1/x, y/x)"}));
  pool.push_back(grp({"(x + 1, y + x)"}));
  for (const GroupSpec& g : pool) {
    REQUIRE(decent_fixpoint(g).outcome == FixOutcome::FixedVertex);
    CHECK(classify_growth(degree_table(g, 8)).kind == GrowthClass::Bounded);
  }
}

TEST_CASE("random vertical tables obey the degree bounds") {
  std::mt19937_64 rng(20260822);
  for (int trial = 0; trial < 12; ++trial) {
    GroupSpec g = make_group({rand_small_jonq(rng), rand_small_jonq(rng)});
    long maxdeg = std::max(jonq_degree(g.gens[0]).deg,
                           jonq_degree(g.gens[1]).deg);
    BallOptions opt;
    opt.max_elements = 100000;
    DegreeTable t = degree_table(g, 4, opt);
    REQUIRE(t.rows.size() == 5);
    CHECK(t.rows[0].second == 1);
    long cap = 1;
    for (int n = 1; n <= 4; ++n) {
      cap *= maxdeg;
      CHECK(t.rows[n].second >= t.rows[n - 1].second);
      CHECK(t.rows[n].second <= cap);
      CHECK(t.rows[n].second <= *t.jonq_bound_k * n + 1);
    }
    CHECK(t.jonq_bound_holds);
  }
}

TEST_CASE("random balls are deterministic across repeated runs") {
  std::mt19937_64 rng(4711);
  std::vector<J> gens{rand_small_jonq(rng), rand_small_jonq(rng),
                      rand_small_jonq(rng)};
  GroupSpec g = make_group(gens);
  std::vector<J> a = ball(g, 4);
  std::vector<J> b = ball(g, 4);
  REQUIRE(a.size() == b.size());
  CHECK(a == b);
  for (size_t i = 1; i < a.size(); ++i) CHECK(!(a[i] == a[0]));
}

TEST_SUITE_END();
