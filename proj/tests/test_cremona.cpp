#include <random>
#include <unordered_set>

#include "doctest.h"
#include "jonq/cremona.hpp"

using namespace jonq;

namespace {

using B = Biv<Rat>;
using BF = BivFrac<Rat>;
using CM = CremonaMap<Rat>;
using T3 = TriPoly<Rat>;

CM m(const std::string& s) { return parse_map<Rat>(s); }

B rand_biv(std::mt19937_64& rng, int dx, int dy, bool nonzero) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 3);
  for (;;) {
    std::vector<Poly<Rat>> rows;
    for (int j = 0; j <= dy; ++j) {
      std::vector<Rat> cs;
      for (int i = 0; i <= dx; ++i) cs.push_back(Rat(num(rng), den(rng)));
      rows.push_back(Poly<Rat>(std::move(cs)));
    }
    B b = B::from_ycoeffs(std::move(rows));
    if (!nonzero || !b.is_zero_b()) return b;
  }
}

/* composite through the homogeneous route: substitute the triple of g
   into the triple of f, then read the result back in the affine chart */
CM compose_oracle(const CM& f, const CM& g) {
  auto tf = f.tri(), tg = g.tri();
  std::array<T3, 3> s;
  for (int i = 0; i < 3; ++i) s[i] = tf[i].eval_at(tg);
  return CM(BF(s[0].dehomog_z(), s[2].dehomog_z()),
            BF(s[1].dehomog_z(), s[2].dehomog_z()));
}

std::vector<CM> map_pool() {
  return {
      m("(x, x*y)"),
      m("(y, x)"),
      m("(x^-1, y^-1)"),
      m("(y, y^2 - x)"),
      m("(2*x + 1, y - 3)"),
      m("(x, (x*y + 1)/(y + x^2))"),
  };
}

}  // namespace

TEST_SUITE_BEGIN("cremona");

TEST_CASE("bivariate arithmetic basics") {
  B x = B::X(), y = B::Y();
  CHECK((x + y) * (x - y) == x * x - y * y);
  CHECK((x + y).deg_total() == 1);
  B p = (x * x * y + x) * Rat(3);
  CHECK(p.deg_x() == 2);
  CHECK(p.deg_y() == 1);
  CHECK(p.deg_total() == 3);
  CHECK(p.term_count() == 2);
  CHECK(B().is_zero_b());
  CHECK(B(Rat(5)).is_constant());
  CHECK(x.pow(4) * y.pow(2) == x * x * x * x * y * y);
  CHECK((x - x).is_zero_b());
  CHECK(-(x - y) == y - x);
}

TEST_CASE("packed multiplication agrees with the naive product") {
  std::mt19937_64 rng(20260301);
  for (int it = 0; it < 80; ++it) {
    B a = rand_biv(rng, 3, 3, false);
    B b = rand_biv(rng, 4, 2, false);
    CHECK(a * b == B::mul_naive(a, b));
  }
}

TEST_CASE("packed multiplication survives huge coefficients") {
  mpz_class big = 1;
  mpz_pow_ui(big.get_mpz_t(), mpz_class(10).get_mpz_t(), 40);
  mpz_class bigm1 = big - 1, negbig = -big, bigp3 = big + 3, big2 = big * big;
  B x = B::X(), y = B::Y();
  B a = x * Rat(big) + y * Rat(1, big) - B(Rat(bigm1));
  B b = x * x * Rat(negbig) + y * Rat(bigp3);
  CHECK(a * b == B::mul_naive(a, b));
  /* products that cancel to sparse results keep exact zeros */
  B c = x * Rat(big) + B(Rat(1));
  B d = x * Rat(big) - B(Rat(1));
  B prod = c * d;
  CHECK(prod == x * x * Rat(big2) - B(Rat(1)));
}

TEST_CASE("bivariate gcd finds common factors across both variables") {
  B x = B::X(), y = B::Y();
  B g = x * y + B(Rat(1));
  B a = g * (x + y) * Rat(4);
  B b = g * (x * x - y) * Rat(6);
  B h = B::gcd(a, b);
  CHECK(B::divexact(a, h) * h == a);
  CHECK(B::divexact(b, h) * h == b);
  CHECK(B::gcd(B::divexact(a, h), B::divexact(b, h)).is_constant());
  CHECK(!h.is_constant());
  CHECK(h.deg_total() == g.deg_total());

  /* content in x only */
  B cx = (x + B(Rat(2))) * (x + B(Rat(2)));
  CHECK(B::gcd(cx * y, cx * (y + B(Rat(1)))).deg_x() == 2);

  CHECK(B::gcd(B(), a) == B::gcd(a, B()));
  CHECK(!B::gcd(B(), a).is_zero_b());
  CHECK(B::gcd(B(Rat(6)), B(Rat(4))).is_constant());
}

TEST_CASE("bivariate exact division rejects non-divisors") {
  B x = B::X(), y = B::Y();
  CHECK(B::divexact(x * x - y * y, x - y) == x + y);
  CHECK_THROWS_AS(B::divexact(x, y), domain_error);
  CHECK_THROWS_AS(B::divexact(x * x + B(Rat(1)), x + B(Rat(1))), domain_error);
}

TEST_CASE("fractions reduce and normalize") {
  B x = B::X(), y = B::Y();
  BF r(x * x - y * y, x - y);
  CHECK(r == BF(x + y));
  CHECK(r.is_poly());
  BF s = BF(x) / BF(y) + BF(y) / BF(x);
  CHECK(s == BF(x * x + y * y, x * y));
  CHECK(BF(x, y).inv() == BF(y, x));
  CHECK(BF(x).pow(-2) == BF(B(Rat(1)), x * x));
  CHECK_THROWS_AS(BF(x, B()), domain_error);
  CHECK((BF(x) - BF(x)).is_zero_f());
}

TEST_CASE("maps parse in the affine chart and print their triples") {
  CM f = m("(x, x*y)");
  CHECK(f.deg() == 2);
  CHECK(f.str_affine() == "(x, x*y)");
  CHECK(f.str_triple() == "[x*z : x*y : z^2]");

  CM swap = m("(y, x)");
  CHECK(swap.deg() == 1);
  CHECK(swap.str_triple() == "[y : x : z]");

  CM id;
  CHECK(id.is_identity());
  CHECK(id.deg() == 1);
  CHECK(id.str_triple() == "[x : y : z]");

  CM henon = m("(y, y^2 - x)");
  CHECK(henon.deg() == 2);
  CHECK(henon == m("[y*z : y^2 - x*z : z^2]"));
}

TEST_CASE("triples parse and agree with their affine form") {
  CM sigma = m("[y*z : x*z : x*y]");
  CHECK(sigma.deg() == 2);
  CHECK(sigma == m("(x^-1, y^-1)"));
  CHECK(sigma.str_triple() == "[y*z : x*z : x*y]");
  CHECK(compose_cremona(sigma, sigma).is_identity());

  /* common factors of the components are cleared on the way in */
  CHECK(m("[x^2 : x*y : x*z]").is_identity());
  /* scalar normalization makes the first coefficient one */
  CHECK(m("[2*y*z : 2*x*z : 2*x*y]").str_triple() == "[y*z : x*z : x*y]");
}

TEST_CASE("round trips through both printed forms") {
  for (const CM& f : map_pool()) {
    CHECK(parse_map<Rat>(f.str_affine()) == f);
    CHECK(parse_map<Rat>(f.str_triple()) == f);
  }
}

TEST_CASE("parse errors are reported") {
  CHECK_THROWS_AS(m("(x, y"), parse_error);
  CHECK_THROWS_AS(m("x + y"), parse_error);
  CHECK_THROWS_AS(m("[x : y]"), parse_error);
  CHECK_THROWS_AS(m("[x : x*y : z]"), parse_error);
  CHECK_THROWS_AS(m("[x + y^2 : x*y : z^2]"), parse_error);
  CHECK_THROWS_AS(m("[x^2 : x*y : 0]"), domain_error);
  CHECK_THROWS_AS(m("[x^2 : x*y : z^-2]"), parse_error);
  CHECK_THROWS_AS(m("[x^2/x : x*y : z^2]"), parse_error);
  CHECK_THROWS_AS(m("(z, y)"), parse_error);
  CHECK_THROWS_AS(m("(sqrt(2)*x, y)"), parse_error);
  CHECK_THROWS_AS(m("(w, y)"), parse_error);
  CHECK_THROWS_AS(m("(x, y/0)"), domain_error);
  /* constant divisors inside a triple are fine */
  CHECK(m("[x^2/2 : x*y : z^2]").deg() == 2);
}

TEST_CASE("composition matches trivariate substitution") {
  auto pool = map_pool();
  for (const CM& f : pool)
    for (const CM& g : pool) {
      bool lhs_ok = true, rhs_ok = true;
      CM lhs, rhs;
      try {
        lhs = compose_cremona(f, g);
      } catch (const domain_error&) {
        lhs_ok = false;
      }
      try {
        rhs = compose_oracle(f, g);
      } catch (const domain_error&) {
        rhs_ok = false;
      }
      REQUIRE(lhs_ok == rhs_ok);
      if (lhs_ok) {
        CHECK(lhs == rhs);
        CHECK(lhs.deg() <= f.deg() * g.deg());
        CHECK(lhs.deg() >= 1);
      }
    }
}

TEST_CASE("composition is associative") {
  auto pool = map_pool();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  for (int it = 0; it < 24; ++it) {
    const CM &f = pool[pick(rng)], &g = pool[pick(rng)], &h = pool[pick(rng)];
    try {
      CM a = compose_cremona(compose_cremona(f, g), h);
      CM b = compose_cremona(f, compose_cremona(g, h));
      CHECK(a == b);
    } catch (const domain_error&) {
      /* a degenerate composite is fine to skip here */
    }
  }
}

TEST_CASE("degenerate composition is refused") {
  CM f = m("(1/(x - y), y)");
  CM diag = m("(x, x)");
  CHECK_THROWS_AS(compose_cremona(f, diag), domain_error);
}

TEST_CASE("iterate degrees of the standard examples") {
  CHECK(degree_sequence(m("(x, x*y)"), 6) == std::vector<long>{2, 3, 4, 5, 6, 7});
  CHECK(degree_sequence(m("(y, y^2 - x)"), 6) ==
        std::vector<long>{2, 4, 8, 16, 32, 64});
  CHECK(degree_sequence(CM(), 3) == std::vector<long>{1, 1, 1});
  CHECK(compose_cremona(m("(x, x*y)"), m("(x, x*y)")) == m("[x*z^2 : x^2*y : z^3]"));
}

TEST_CASE("dynamical degree brackets pin the growth rate") {
  Rat step(1, 100000000);

  DynDegEstimate h = dynamical_degree_estimate(m("(y, y^2 - x)"), 8);
  CHECK(h.lo == Rat(2));
  CHECK(h.hi == Rat(2) + step);
  for (auto& r : h.ratios) CHECK(r == Rat(2));

  DynDegEstimate lin = dynamical_degree_estimate(m("(x, x*y)"), 8);
  CHECK(lin.lo > Rat(13, 10));
  CHECK(lin.hi < Rat(14, 10));
  CHECK(lin.hi - lin.lo == step);
  CHECK(lin.ratios.front() == Rat(3, 2));

  DynDegEstimate one = dynamical_degree_estimate(CM(), 4);
  CHECK(one.lo == Rat(1));
  CHECK(one.hi == Rat(1) + step);

  CHECK_THROWS_AS(dynamical_degree_estimate(CM(), 3), domain_error);
}

TEST_CASE("inverses are verified before they are attached") {
  CM henon = m("(y, y^2 - x)");
  CM back = m("(x^2 - y, x)");
  CM f = henon.with_inverse(back);
  CHECK(f.has_inverse());
  CHECK(f.inverse().deg() == f.deg());
  CHECK(compose_cremona(f, f.inverse()).is_identity());
  CHECK(f.inverse().inverse() == f);
  CHECK_THROWS_AS(henon.with_inverse(henon), domain_error);
  CHECK_THROWS_AS(CM().inverse(), domain_error);

  CM aff = m("(2*x + 1, y - 3)");
  CM aff_inv = m("(x/2 - 1/2, y + 3)");
  CHECK(aff.with_inverse(aff_inv).has_inverse());
}

TEST_CASE("maps hash and dedup") {
  std::unordered_set<CM> seen;
  auto pool = map_pool();
  for (const CM& f : pool) seen.insert(f);
  for (const CM& f : pool) seen.insert(f);
  CHECK(seen.size() == pool.size());
  CHECK(seen.count(m("[x*z : x*y : z^2]")) == 1);
}

TEST_CASE("prime field coefficients flow through parsing and composition") {
  FieldEnv<Fp> env{7};
  auto f = parse_map<Fp>("(x + 6*y, x*y)", env);
  CHECK(f.deg() == 2);
  auto ff = compose_cremona(f, f);
  CHECK(ff.deg() <= 4);
  CHECK(parse_map<Fp>(f.str_affine(), env) == f);
  /* 6 = -1 mod 7 */
  CHECK(f == parse_map<Fp>("(x - y, x*y)", env));
  CHECK_THROWS_AS(parse_map<Fp>("(2*x, y)", FieldEnv<Fp>{}), parse_error);
}

TEST_CASE("quadratic coefficients admit their own square root only") {
  FieldEnv<Quad> env{-1};
  auto f = parse_map<Quad>("(sqrt(-1)*x, y)", env);
  auto ff = compose_cremona(f, f);
  CHECK(ff == parse_map<Quad>("(-x, y)", env));
  CHECK(compose_cremona(ff, ff).is_identity());
  CHECK_THROWS_AS(parse_map<Quad>("(sqrt(2)*x, y)", env), parse_error);
}

TEST_SUITE_END();
