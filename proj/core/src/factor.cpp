#include "jonq/factor.hpp"

#include <algorithm>
#include <random>

namespace jonq {

namespace {

using PF = Poly<Fp>;
using PQ = Poly<Rat>;

uint64_t poly_modulus(const PF& f) {
  uint64_t p = 0;
  for (int i = 0; i <= f.deg(); ++i) p = Fp::join(p, f.coeff(i).modulus());
  return p;
}

PF sized_poly(const PF& f, uint64_t p) {
  std::vector<Fp> c;
  c.reserve(f.deg() + 1);
  for (int i = 0; i <= f.deg(); ++i) c.push_back(f.coeff(i).sized_as(p));
  return PF(std::move(c));
}

PF powmod(PF b, uint64_t e, const PF& m) {
  PF r = PF::constant(Fp(1, poly_modulus(m)));
  b = b % m;
  while (e != 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

PF powmod(const PF& b0, const mpz_class& e, const PF& m) {
  PF r = PF::constant(Fp(1, poly_modulus(m)));
  PF b = b0 % m;
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = r * r % m;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = r * b % m;
  }
  return r;
}

/* splits a monic squarefree product of degree d irreducibles */
void equal_degree(const PF& f, int d, uint64_t p, std::mt19937_64& rng,
                  std::vector<PF>& out) {
  if (f.deg() == d) {
    out.push_back(f.monic());
    return;
  }
  for (;;) {
    std::vector<Fp> c;
    c.reserve(f.deg());
    for (int i = 0; i < f.deg(); ++i) c.push_back(Fp::make(rng(), p));
    PF a(std::move(c));
    if (a.deg() < 1) continue;
    PF g = PF::gcd(a, f);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      equal_degree(g, d, p, rng, out);
      equal_degree((f / g).monic(), d, p, rng, out);
      return;
    }
    PF b;
    if (p == 2) {
      /* trace of a over the degree d subfield */
      PF t = a, s = a;
      for (int i = 1; i < d; ++i) {
        s = s * s % f;
        t = t + s;
      }
      b = t;
    } else {
      mpz_class e;
      mpz_ui_pow_ui(e.get_mpz_t(), p, d);
      e = (e - 1) / 2;
      b = powmod(a, e, f) - PF::constant(Fp(1, p));
    }
    PF g2 = PF::gcd(b, f);
    if (g2.deg() > 0 && g2.deg() < f.deg()) {
      equal_degree(g2, d, p, rng, out);
      equal_degree((f / g2).monic(), d, p, rng, out);
      return;
    }
  }
}

void distinct_degree(PF f, uint64_t p, std::mt19937_64& rng,
                     std::vector<PF>& out) {
  f = f.monic();
  PF xp = sized_poly(PF::x(), p);
  PF h = xp;
  for (int d = 1; f.deg() >= 2 * d; ++d) {
    h = powmod(h, p, f);
    PF g = PF::gcd(h - xp, f);
    if (g.deg() > 0) {
      equal_degree(g, d, p, rng, out);
      f = (f / g).monic();
      h = h % f;
    }
  }
  if (f.deg() > 0) out.push_back(f);
}

/* characteristic p squarefree decomposition; parts carry multiplicities */
void squarefree_p(const PF& f0, int mult, uint64_t p,
                  std::vector<std::pair<PF, int>>& parts) {
  PF f = f0.monic();
  if (f.deg() == 0) return;
  PF df = f.derivative();
  auto pth_root = [&](const PF& g) {
    /* g = h(x^p) over the prime field, where coefficients are fixed by
       the Frobenius */
    std::vector<Fp> c;
    for (int i = 0; i <= g.deg(); i += (int)p) c.push_back(g.coeff(i));
    return PF(std::move(c));
  };
  if (df.is_zero_p()) {
    squarefree_p(pth_root(f), mult * (int)p, p, parts);
    return;
  }
  PF c = PF::gcd(f, df);
  PF w = f / c;
  int i = 1;
  while (w.deg() > 0) {
    PF y = PF::gcd(w, c);
    PF z = w / y;
    if (z.deg() > 0) parts.push_back({z.monic(), mult * i});
    w = y;
    c = c / y;
    ++i;
  }
  if (c.deg() > 0) squarefree_p(pth_root(c), mult * (int)p, p, parts);
}

/* ----- integer polynomial arithmetic, dense mpz vectors, index = degree ----- */

using ZV = std::vector<mpz_class>;

void ztrim(ZV& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int zdeg(const ZV& a) { return (int)a.size() - 1; }

ZV zmod(const ZV& a, const mpz_class& m) {
  ZV r(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    mpz_fdiv_r(r[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
  }
  ztrim(r);
  return r;
}

ZV zadd(const ZV& a, const ZV& b, const mpz_class& m) {
  ZV r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] += b[i];
  }
  return zmod(r, m);
}

ZV zsub(const ZV& a, const ZV& b, const mpz_class& m) {
  ZV r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] -= b[i];
  }
  return zmod(r, m);
}

ZV zmul(const ZV& a, const ZV& b, const mpz_class& m) {
  if (a.empty() || b.empty()) return {};
  ZV r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return zmod(r, m);
}

/* division by a monic divisor, everything mod m */
void zdivrem(const ZV& a, const ZV& b, const mpz_class& m, ZV* quo, ZV* rem) {
  assert(!b.empty() && b.back() == 1);
  ZV r = a, q;
  if (zdeg(r) >= zdeg(b)) q.assign(zdeg(r) - zdeg(b) + 1, 0);
  while (zdeg(r) >= zdeg(b)) {
    int k = zdeg(r) - zdeg(b);
    mpz_class c = r.back();
    q[k] = c;
    for (size_t i = 0; i < b.size(); ++i) r[k + i] -= c * b[i];
    ztrim(r);
  }
  if (quo) *quo = zmod(q, m);
  if (rem) *rem = zmod(r, m);
}

/* exact division over the integers by a monic divisor; false if not a factor */
bool zdivides(const ZV& a, const ZV& b, ZV* quo) {
  assert(!b.empty() && b.back() == 1);
  ZV r = a, q;
  if (zdeg(r) < zdeg(b)) return false;
  q.assign(zdeg(r) - zdeg(b) + 1, 0);
  while (zdeg(r) >= zdeg(b)) {
    int k = zdeg(r) - zdeg(b);
    mpz_class c = r.back();
    q[k] = c;
    for (size_t i = 0; i < b.size(); ++i) r[k + i] -= c * b[i];
    ztrim(r);
  }
  if (!r.empty()) return false;
  if (quo) *quo = q;
  return true;
}

ZV zfrom_fp(const PF& f) {
  ZV r(f.deg() + 1);
  for (int i = 0; i <= f.deg(); ++i) r[i] = (unsigned long)f.coeff(i).value();
  ztrim(r);
  return r;
}

/* one quadratic lifting ladder for a coprime pair, from p up to exactly
   cap = p^(2^k) */
void hensel_pair(const ZV& f, ZV& g, ZV& h, ZV& s, ZV& t, const mpz_class& p,
                 const mpz_class& cap) {
  mpz_class q = p;
  ZV one{mpz_class(1)};
  while (q < cap) {
    mpz_class q2 = q * q;
    ZV e = zsub(zmod(f, q2), zmul(g, h, q2), q2);
    ZV qg, rg;
    zdivrem(zmul(t, e, q2), g, q2, &qg, &rg);
    ZV dh = zadd(zmul(s, e, q2), zmul(h, qg, q2), q2);
    g = zadd(g, rg, q2);
    h = zadd(h, dh, q2);
    assert(!g.empty() && g.back() == 1 && !h.empty() && h.back() == 1);
    ZV b = zsub(zadd(zmul(s, g, q2), zmul(t, h, q2), q2), one, q2);
    ZV qs, rs;
    zdivrem(zmul(s, b, q2), h, q2, &qs, &rs);
    s = zsub(s, rs, q2);
    t = zsub(t, zadd(zmul(t, b, q2), zmul(qs, g, q2), q2), q2);
    q = q2;
  }
}

/* lifts the mod p factor list of f to mod cap, recursing on a factor tree */
void lift_tree(const ZV& f, const std::vector<PF>& fac, int lo, int hi,
               uint64_t p, const mpz_class& cap, std::vector<ZV>& out) {
  if (hi - lo == 1) {
    out[lo] = zmod(f, cap);
    return;
  }
  int mid = lo + (hi - lo) / 2;
  PF gp = PF::constant(Fp(1, p)), hp = PF::constant(Fp(1, p));
  for (int i = lo; i < mid; ++i) gp = gp * fac[i];
  for (int i = mid; i < hi; ++i) hp = hp * fac[i];
  auto [u, sp, tp] = PF::xgcd(gp, hp);
  assert(u.deg() == 0);
  ZV g = zfrom_fp(gp), h = zfrom_fp(hp);
  ZV s = zfrom_fp(sp * PF::constant(field_inv(u.lead()))),
     t = zfrom_fp(tp * PF::constant(field_inv(u.lead())));
  hensel_pair(f, g, h, s, t, mpz_class((unsigned long)p), cap);
  lift_tree(g, fac, lo, mid, p, cap, out);
  lift_tree(h, fac, mid, hi, p, cap, out);
}

mpz_class sym_lift(const mpz_class& c, const mpz_class& q) {
  return 2 * c > q ? mpz_class(c - q) : c;
}

uint64_t next_prime_u64(uint64_t n) {
  for (uint64_t p = n + 1;; ++p)
    if (is_prime_u64(p)) return p;
}

PF reduce_mod(const ZV& a, uint64_t p) {
  std::vector<Fp> c(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    mpz_class r = a[i] % (unsigned long)p;
    if (r < 0) r += (unsigned long)p;
    c[i] = Fp::make(r.get_ui(), p);
  }
  return PF(std::move(c));
}

/* factors a monic squarefree integer polynomial into monic integer
   irreducibles */
std::vector<ZV> zassenhaus_monic(const ZV& T) {
  int d = zdeg(T);
  if (d == 1) return {T};

  /* a prime where the reduction stays squarefree */
  uint64_t p = 2;
  PF tp;
  for (;;) {
    p = next_prime_u64(p);
    tp = reduce_mod(T, p);
    if (PF::gcd(tp, tp.derivative()).deg() == 0) break;
  }

  auto modfac = factor(tp);
  if (modfac.size() == 1) return {T};
  std::vector<PF> fac;
  for (auto& [q, m] : modfac) {
    assert(m == 1);
    fac.push_back(q);
  }

  /* coefficients of any monic factor are bounded by 2^d * l2norm(T) */
  mpz_class nn = 0;
  for (auto& c : T) nn += c * c;
  mpz_class bound;
  mpz_sqrt(bound.get_mpz_t(), nn.get_mpz_t());
  bound = (bound + 1) << d;
  mpz_class cap = (unsigned long)p;
  while (cap <= 2 * bound) cap = cap * cap;

  std::vector<ZV> lifted(fac.size());
  lift_tree(zmod(T, cap), fac, 0, (int)fac.size(), p, cap, lifted);

  std::vector<ZV> out;
  std::vector<int> live(fac.size());
  for (size_t i = 0; i < fac.size(); ++i) live[i] = (int)i;
  ZV work = T;

  auto try_size = [&](size_t s) {
    std::vector<int> pick(s);
    for (size_t i = 0; i < s; ++i) pick[i] = (int)i;
    for (;;) {
      ZV prod{mpz_class(1)};
      for (size_t i = 0; i < s; ++i) prod = zmul(prod, lifted[live[pick[i]]], cap);
      ZV cand(prod.size());
      bool small = true;
      for (size_t i = 0; i < prod.size(); ++i) {
        cand[i] = sym_lift(prod[i], cap);
        if (abs(cand[i]) > bound) small = false;
      }
      ZV quo;
      if (small && zdivides(work, cand, &quo)) {
        out.push_back(cand);
        work = quo;
        std::vector<int> keep;
        for (size_t i = 0, j = 0; i < live.size(); ++i) {
          if (j < s && pick[j] == (int)i) {
            ++j;
            continue;
          }
          keep.push_back(live[i]);
        }
        live = keep;
        return true;
      }
      /* next s element combination of the live list */
      int k = (int)s - 1;
      while (k >= 0 && pick[k] == (int)(live.size() - s + k)) --k;
      if (k < 0) return false;
      ++pick[k];
      for (size_t i = k + 1; i < s; ++i) pick[i] = pick[i - 1] + 1;
    }
  };

  size_t s = 1;
  while (2 * s <= live.size()) {
    if (!try_size(s)) ++s;
  }
  if (zdeg(work) > 0) out.push_back(work);
  return out;
}

/* monic squarefree rational polynomial into monic rational irreducibles */
std::vector<PQ> factor_squarefree_q(const PQ& f) {
  if (f.deg() == 1) return {f};

  mpz_class den = 1;
  for (int i = 0; i <= f.deg(); ++i)
    den = lcm_z(den, f.coeff(i).den());
  ZV S(f.deg() + 1);
  for (int i = 0; i <= f.deg(); ++i) {
    Rat c = f.coeff(i) * Rat(den);
    assert(c.den() == 1);
    S[i] = c.num();
  }
  mpz_class cont = 0;
  for (auto& c : S) cont = gcd_z(cont, c);
  for (auto& c : S) c /= cont;
  if (S.back() < 0)
    for (auto& c : S) c = -c;

  mpz_class lc = S.back();
  int d = zdeg(S);
  ZV T(d + 1);
  for (int i = 0; i <= d; ++i) {
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), lc.get_mpz_t(), i < d ? (unsigned long)(d - 1 - i) : 0);
    T[i] = i < d ? mpz_class(S[i] * pw) : mpz_class(1);
  }

  std::vector<PQ> out;
  for (const ZV& zf : zassenhaus_monic(T)) {
    std::vector<Rat> c(zf.size());
    mpz_class pw = 1;
    for (size_t i = 0; i < zf.size(); ++i) {
      c[i] = Rat(mpz_class(zf[i] * pw));
      pw *= lc;
    }
    out.push_back(PQ(std::move(c)).monic());
  }
  return out;
}

}  // namespace

std::vector<std::pair<PF, int>> factor(const PF& f) {
  if (f.is_zero_p()) throw domain_error("factor of the zero polynomial");
  uint64_t p = poly_modulus(f);
  if (p == 0) throw domain_error("factor needs a modulus on the coefficients");
  PF g = sized_poly(f, p).monic();
  if (g.deg() == 0) return {};

  std::vector<std::pair<PF, int>> parts;
  squarefree_p(g, 1, p, parts);

  std::mt19937_64 rng(std::hash<PF>()(g) ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::pair<PF, int>> out;
  for (auto& [s, m] : parts) {
    std::vector<PF> irr;
    distinct_degree(s, p, rng, irr);
    for (auto& q : irr) out.push_back({q, m});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return PF::less(a.first, b.first); });
  return out;
}

std::vector<std::pair<PQ, int>> factor(const PQ& f) {
  if (f.is_zero_p()) throw domain_error("factor of the zero polynomial");
  if (f.deg() == 0) return {};
  PQ g = f.monic();
  PQ sf = g / PQ::gcd(g, g.derivative());

  std::vector<std::pair<PQ, int>> out;
  int total = 0;
  for (const PQ& q : factor_squarefree_q(sf)) {
    int m = g.multiplicity(q);
    assert(m >= 1);
    out.push_back({q, m});
    total += m * q.deg();
  }
  assert(total == f.deg());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return PQ::less(a.first, b.first); });
  return out;
}

bool is_irreducible(const PF& f) {
  if (f.deg() < 1) return false;
  auto fs = factor(f);
  return fs.size() == 1 && fs[0].second == 1;
}

bool is_irreducible(const PQ& f) {
  if (f.deg() < 1) return false;
  auto fs = factor(f);
  return fs.size() == 1 && fs[0].second == 1;
}

std::vector<Fp> poly_roots(const PF& f) {
  std::vector<Fp> r;
  for (auto& [q, m] : factor(f))
    if (q.deg() == 1) r.push_back(-q.constant_term());
  std::sort(r.begin(), r.end(), [](const Fp& a, const Fp& b) { return coeff_less(a, b); });
  return r;
}

std::vector<Rat> poly_roots(const PQ& f) {
  std::vector<Rat> r;
  for (auto& [q, m] : factor(f))
    if (q.deg() == 1) r.push_back(-q.constant_term());
  std::sort(r.begin(), r.end(), [](const Rat& a, const Rat& b) { return coeff_less(a, b); });
  return r;
}

bool sqrt_mod(uint64_t a, uint64_t p, uint64_t* out) {
  auto mul = [&](uint64_t x, uint64_t y) {
    return (uint64_t)((unsigned __int128)x * y % p);
  };
  auto pw = [&](uint64_t b, uint64_t e) {
    uint64_t r = 1;
    b %= p;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  };
  a %= p;
  if (p == 2 || a == 0) {
    *out = a;
    return true;
  }
  if (pw(a, (p - 1) / 2) != 1) return false;
  if (p % 4 == 3) {
    *out = pw(a, (p + 1) / 4);
    return true;
  }
  /* Tonelli-Shanks */
  uint64_t q = p - 1, s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  uint64_t z = 2;
  while (pw(z, (p - 1) / 2) == 1) ++z;
  uint64_t m = s, c = pw(z, q), t = pw(a, q), r = pw(a, (q + 1) / 2);
  while (t != 1) {
    uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mul(tt, tt);
      ++i;
    }
    uint64_t b = c;
    for (uint64_t j = 0; j + 1 < m - i; ++j) b = mul(b, b);
    m = i;
    c = mul(b, b);
    t = mul(t, c);
    r = mul(r, b);
  }
  *out = r;
  return true;
}

}  // namespace jonq
