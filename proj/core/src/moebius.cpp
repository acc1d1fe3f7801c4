#include "jonq/moebius.hpp"

namespace jonq {

std::string MoebiusClass::str() const {
  switch (kind) {
    case Identity: return "identity";
    case FiniteOrder: return "finite order " + std::to_string(order);
    case UnipotentInfinite: return "unipotent of infinite order";
    case SemisimpleInfinite: return "semisimple of infinite order, r = " + r.str();
  }
  return "";
}

MoebiusClass classify_moebius(const Mo<Rat>& m) {
  if (m.is_identity()) return {MoebiusClass::Identity, 0, Rat()};
  Rat tr = m.a() + m.d(), det = m.det();
  if (tr * tr == Rat(4) * det) return {MoebiusClass::UnipotentInfinite, 0, Rat()};
  Rat r = tr * tr / det;
  if (r == Rat(0)) return {MoebiusClass::FiniteOrder, 2, r};
  if (r == Rat(1)) return {MoebiusClass::FiniteOrder, 3, r};
  if (r == Rat(2)) return {MoebiusClass::FiniteOrder, 4, r};
  if (r == Rat(3)) return {MoebiusClass::FiniteOrder, 6, r};
  return {MoebiusClass::SemisimpleInfinite, 0, r};
}

static uint64_t mo_modulus(const Mo<Fp>& m) {
  uint64_t p = Fp::join(m.a().modulus(), m.b().modulus());
  p = Fp::join(p, m.c().modulus());
  return Fp::join(p, m.d().modulus());
}

MoebiusClass classify_moebius(const Mo<Fp>& m) {
  if (m.is_identity()) return {MoebiusClass::Identity, 0, Rat()};
  uint64_t p = mo_modulus(m);
  if (p == 0) throw domain_error("prime field moebius map needs a modulus");
  Fp tr = m.a() + m.d(), det = m.det();
  if (p != 2 && tr * tr == Fp(4, p) * det)
    return {MoebiusClass::UnipotentInfinite, 0, Rat()};
  /* the group is finite, so scan for the order directly */
  Mo<Fp> acc = m;
  unsigned __int128 bound = (unsigned __int128)p * p * p;
  for (unsigned __int128 n = 1; n <= bound; ++n) {
    if (acc.is_identity()) return {MoebiusClass::FiniteOrder, (long)n, Rat()};
    acc = acc * m;
  }
  throw domain_error("order search exceeded the group bound");
}

template <typename K>
static std::vector<Place<K>> fixed_points_impl(const Mo<K>& m) {
  if (m.is_identity()) throw domain_error("every point is fixed by the identity");
  std::vector<Place<K>> out;
  if (is_zero(m.c())) out.push_back(Place<K>::infinity());
  Poly<K> q{-m.b(), m.d() - m.a(), m.c()};
  if (q.deg() >= 1)
    for (auto& [f, mult] : factor(q)) out.push_back(Place<K>::from_irreducible(f));
  std::sort(out.begin(), out.end(), Place<K>::less);
  return out;
}

std::vector<Place<Rat>> fixed_points(const Mo<Rat>& m) { return fixed_points_impl(m); }
std::vector<Place<Fp>> fixed_points(const Mo<Fp>& m) { return fixed_points_impl(m); }

std::string NumberPlace::str() const {
  return archimedean ? "real" : prime.get_str() + "-adic";
}

/* a square root of d to precision p^k, growing the seed digit (mod p, or
   mod 8 when p = 2) one digit at a time */
static mpz_class lift_sqrt(const mpz_class& d, const mpz_class& p,
                           const mpz_class& seed, long k) {
  mpz_class pk;
  mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), (unsigned long)k);
  if (p == 2) {
    mpz_class s = seed, q = 8;
    for (long j = 3; j < k; ++j) {
      mpz_class q2 = q * 2;
      if ((s * s - d) % q2 != 0) s += q / 2;
      q = q2;
    }
    return k <= 3 ? mpz_class(s % pk) : s;
  }
  mpz_class s = seed % p, q = p;
  for (long j = 1; j < k; ++j) {
    mpz_class num = (d - s * s) / q;
    mpz_class inv2s;
    if (mpz_invert(inv2s.get_mpz_t(), mpz_class(2 * s).get_mpz_t(), p.get_mpz_t()) == 0)
      throw domain_error("square root lift stalled");
    mpz_class t = num % p * inv2s % p;
    if (t < 0) t += p;
    s += t * q;
    q *= p;
  }
  return s;
}

static Rat rat_ppow(const mpz_class& p, long e) {
  mpz_class pe;
  mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), (unsigned long)(e < 0 ? -e : e));
  return e >= 0 ? Rat(pe) : Rat(mpz_class(1), pe);
}

long quad_val(const Quad& x, const NumberPlace& v) {
  if (v.archimedean) throw domain_error("no valuation at an archimedean place");
  if (x.is_zero()) return val_inf;
  const mpz_class& p = v.prime;
  if (x.b().is_zero()) return padic_val(x.a(), p);
  if (v.disc == 0) throw domain_error("irrational element at a rational place");
  Quad::join(x.d(), v.disc);

  long va = x.a().is_zero() ? val_inf : padic_val(x.a(), p);
  long vb = padic_val(x.b(), p);
  long e = std::min(va, vb);
  Rat scale = rat_ppow(p, -e);
  Rat A = x.a() * scale, B = x.b() * scale;

  /* val(A + B*sqrt(d)) lies in [0, val(norm)], so that much precision in
     the designated square root decides it */
  Rat nrm = A * A - B * B * Rat(mpz_class(v.disc));
  long vn = padic_val(nrm, p);
  long k = std::max(vn + 1, p == 2 ? 3L : 1L);
  mpz_class pk;
  mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), (unsigned long)k);
  mpz_class dred = mpz_class(v.disc) % pk;
  if (dred < 0) dred += pk;
  mpz_class s = lift_sqrt(dred, p, v.sqrt_digit, k);

  auto ratmod = [&](const Rat& r) {
    mpz_class n = r.num() % pk, dn;
    if (n < 0) n += pk;
    if (mpz_invert(dn.get_mpz_t(), r.den().get_mpz_t(), pk.get_mpz_t()) == 0)
      throw domain_error("denominator not a unit at the place");
    return mpz_class(n * dn % pk);
  };
  mpz_class t = (ratmod(A) + ratmod(B) * s) % pk;
  if (t < 0) t += pk;
  if (t == 0) throw domain_error("square root precision exhausted");
  long w = 0;
  while (t % p == 0) {
    t /= p;
    ++w;
  }
  return e + w;
}

NormCmp norm_compare(const Quad& x, const NumberPlace& v) {
  if (x.is_zero()) return NormCmp::Less;
  if (!v.archimedean) {
    long w = quad_val(x, v);
    return w > 0 ? NormCmp::Less : w < 0 ? NormCmp::Greater : NormCmp::One;
  }
  if (x.b().is_zero()) {
    Rat a = x.a().abs();
    return a < Rat(1) ? NormCmp::Less : a == Rat(1) ? NormCmp::One : NormCmp::Greater;
  }
  long d = Quad::join(x.d(), v.disc);
  if (d < 0) throw domain_error("no real embedding for a negative discriminant");
  Quad diff = x.abs() - Quad(1);
  if (diff.is_zero()) return NormCmp::One;
  return diff.sign() < 0 ? NormCmp::Less : NormCmp::Greater;
}

NsResult find_ns_place(const Mo<Rat>& m) {
  NsResult res;
  if (classify_moebius(m).kind != MoebiusClass::SemisimpleInfinite) return res;
  res.found = true;

  const Rat &a = m.a(), &b = m.b(), &c = m.c(), &d = m.d();
  Rat det = m.det(), tr = a + d;
  Rat disc = tr * tr - Rat(4) * det;

  mpz_class nd = disc.num() * disc.den();
  bool neg = nd < 0;
  mpz_class d0m = 1;
  for (auto& [q, e] : factor_mpz(abs(nd)))
    if (e % 2) d0m *= q;
  if (!d0m.fits_slong_p()) throw domain_error("discriminant squarefree part too large");
  if (neg) d0m = -d0m;
  long d0 = d0m.get_si();
  Rat t0sq = disc / Rat(d0m);
  mpz_class tn, td;
  if (!is_square(t0sq.num(), &tn) || !is_square(t0sq.den(), &td))
    throw domain_error("squarefree split failed");
  Rat t0(tn, td);

  if (d0 == 1) {
    /* rational eigenvalue ratio; the real embedding separates the poles */
    res.v = NumberPlace{true, 0, 0, 0};
    struct Pt {
      bool inf;
      Rat y;
    };
    std::vector<Pt> pts;
    if (c.is_zero()) {
      pts.push_back({true, Rat()});
      pts.push_back({false, b / (d - a)});
    } else {
      pts.push_back({false, (a - d + t0) / (Rat(2) * c)});
      pts.push_back({false, (a - d - t0) / (Rat(2) * c)});
    }
    auto mult = [&](const Pt& pt) {
      if (pt.inf) return det / (a * a);
      Rat t = c * pt.y + d;
      return det / (t * t);
    };
    int att = mult(pts[0]).abs() < Rat(1) ? 0 : 1;
    auto to_place = [](const Pt& pt) {
      return pt.inf ? Place<Rat>::infinity()
                    : Place<Rat>::from_irreducible(Poly<Rat>{-pt.y, Rat(1)});
    };
    res.attracting = to_place(pts[att]);
    res.repelling = to_place(pts[1 - att]);
    if (!pts[att].inf) res.att_root = Quad(pts[att].y);
    if (!pts[1 - att].inf) res.rep_root = Quad(pts[1 - att].y);
    res.multiplier = Quad(mult(pts[att]));
    return res;
  }

  /* quadratic ratio: both fixed points sit in one degree two place */
  if (c.is_zero()) throw domain_error("quadratic ratio needs an irrational pair");
  Rat re = (a - d) / (Rat(2) * c);
  Rat im = t0 / (Rat(2) * c);
  Quad y1(re, im, d0), y2(re, -im, d0);
  Quad cc(c), dd(d);
  auto mult = [&](const Quad& y) {
    Quad t = cc * y + dd;
    return Quad(det) * (t * t).inv();
  };
  Quad m1 = mult(y1), m2 = mult(y2);
  Place<Rat> shared =
      Place<Rat>::from_irreducible(Poly<Rat>{-(b / c), (d - a) / c, Rat(1)});

  if (d0 > 1) {
    res.v = NumberPlace{true, 0, d0, 0};
  } else {
    /* complex quadratic ratio has unit archimedean norm; fall back to a
       prime in the denominator of the trace invariant */
    Rat s = m.ratio_invariant() - Rat(2);
    if (s.den() == 1) throw domain_error("integral trace with a complex ratio");
    mpz_class p = factor_mpz(s.den())[0].first;
    mpz_class seed;
    if (p == 2) {
      mpz_class dm = mpz_class(d0) % 16;
      if (dm < 0) dm += 16;
      if (dm % 8 != 1) throw domain_error("discriminant not a 2-adic square");
      seed = dm == 1 ? 1 : 3;
    } else {
      if (!p.fits_ulong_p()) throw domain_error("place prime too large");
      uint64_t pp = p.get_ui();
      long dmod = d0 % (long)pp;
      if (dmod < 0) dmod += (long)pp;
      uint64_t u = 0;
      if (!sqrt_mod((uint64_t)dmod, pp, &u))
        throw domain_error("discriminant not a square at the place");
      seed = std::min(u, pp - u);
    }
    res.v = NumberPlace{false, p, d0, seed};
  }

  bool first = norm_compare(m1, res.v) == NormCmp::Less;
  if (!first && norm_compare(m2, res.v) != NormCmp::Less)
    throw domain_error("no attracting pole at the chosen place");
  res.attracting = shared;
  res.repelling = shared;
  res.att_root = first ? y1 : y2;
  res.rep_root = first ? y2 : y1;
  res.multiplier = first ? m1 : m2;
  return res;
}

}  // namespace jonq
