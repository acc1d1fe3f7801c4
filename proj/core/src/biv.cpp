#include "jonq/biv.hpp"

namespace jonq {

namespace {

/* least common multiple of the coefficient denominators */
mpz_class den_lcm(const Biv<Rat>& f) {
  mpz_class l = 1, g;
  for (auto& p : f.ycoeffs())
    for (auto& c : p.coeffs()) {
      if (c.num() == 0) continue;
      mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
      l = l / g * c.den();
    }
  return l;
}

struct PackedTerm {
  long slot;
  mpz_class v;
};

/* integerized nonzero terms plus the largest coefficient bit size */
void scan_terms(const Biv<Rat>& f, const mpz_class& d, long stride,
                std::vector<PackedTerm>& out, size_t& bits) {
  bits = 1;
  mpz_class t;
  for (int j = 0; j <= f.deg_y(); ++j) {
    const Poly<Rat>& p = f.ycoeffs()[j];
    for (int i = 0; i <= p.deg(); ++i) {
      const Rat& c = p.coeffs()[i];
      if (c.num() == 0) continue;
      t = c.num() * (d / c.den());
      bits = std::max(bits, mpz_sizeinbase(t.get_mpz_t(), 2));
      out.push_back({(long)j * stride + i, t});
    }
  }
}

mpz_class pack_terms(const std::vector<PackedTerm>& ts, long slots, size_t bytes_per) {
  std::vector<unsigned char> pos((size_t)slots * bytes_per, 0);
  std::vector<unsigned char> neg((size_t)slots * bytes_per, 0);
  bool any_neg = false;
  mpz_class av;
  size_t count;
  for (auto& t : ts) {
    unsigned char* dst;
    if (t.v < 0) {
      av = -t.v;
      dst = neg.data() + (size_t)t.slot * bytes_per;
      any_neg = true;
    } else {
      av = t.v;
      dst = pos.data() + (size_t)t.slot * bytes_per;
    }
    mpz_export(dst, &count, -1, 1, 0, 0, av.get_mpz_t());
  }
  mpz_class a;
  mpz_import(a.get_mpz_t(), pos.size(), -1, 1, 0, 0, pos.data());
  if (any_neg) {
    mpz_class b;
    mpz_import(b.get_mpz_t(), neg.size(), -1, 1, 0, 0, neg.data());
    a -= b;
  }
  return a;
}

}  // namespace

/* One-shot product via evaluation at x = 2^b, y = 2^(b*stride): both
   factors become integers whose product decodes back digit by digit.
   The digit width leaves room for every convolution sum plus a sign
   bit, so an offset of half the digit range makes the packed product
   nonnegative and the decode exact. */
Biv<Rat> biv_mul_kronecker(const Biv<Rat>& a, const Biv<Rat>& b) {
  if (a.is_zero_b() || b.is_zero_b()) return Biv<Rat>();

  mpz_class da = den_lcm(a), db = den_lcm(b);
  long dx = a.deg_x() + b.deg_x(), dy = a.deg_y() + b.deg_y();
  long stride = dx + 1;
  long slots = stride * (dy + 1);

  std::vector<PackedTerm> ta, tb;
  size_t bits_a, bits_b;
  scan_terms(a, da, stride, ta, bits_a);
  scan_terms(b, db, stride, tb, bits_b);

  size_t nt = std::min(ta.size(), tb.size());
  size_t guard = 0;
  while (((size_t)1 << guard) < nt) ++guard;
  size_t bytes_per = (bits_a + bits_b + guard + 2 + 7) / 8;
  size_t digit_bits = bytes_per * 8;

  mpz_class prod = pack_terms(ta, slots, bytes_per) * pack_terms(tb, slots, bytes_per);

  std::vector<unsigned char> obuf((size_t)slots * bytes_per, 0);
  for (long s = 0; s < slots; ++s)
    obuf[(size_t)s * bytes_per + bytes_per - 1] = 0x80;
  mpz_class off;
  mpz_import(off.get_mpz_t(), obuf.size(), -1, 1, 0, 0, obuf.data());
  prod += off;

  std::vector<unsigned char> out((size_t)slots * bytes_per, 0);
  size_t count;
  mpz_export(out.data(), &count, -1, 1, 0, 0, prod.get_mpz_t());

  mpz_class half = mpz_class(1) << (digit_bits - 1);
  mpz_class dab = da * db, w;
  std::vector<std::vector<Rat>> cs(dy + 1, std::vector<Rat>(dx + 1, Rat(0)));
  for (long s = 0; s < slots; ++s) {
    mpz_import(w.get_mpz_t(), bytes_per, -1, 1, 0, 0, out.data() + (size_t)s * bytes_per);
    w -= half;
    if (w == 0) continue;
    cs[s / stride][s % stride] = Rat(w, dab);
  }

  std::vector<Poly<Rat>> yc;
  yc.reserve(dy + 1);
  for (auto& row : cs) yc.push_back(Poly<Rat>(std::move(row)));
  return Biv<Rat>::from_ycoeffs(std::move(yc));
}

}  // namespace jonq
