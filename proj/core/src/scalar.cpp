#include "jonq/scalar.hpp"

#include <algorithm>
#include <cctype>

namespace jonq {

Rat Rat::from_string(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace((unsigned char)c)) t += c;
  if (t.empty()) throw parse_error("empty rational literal");
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw parse_error("bad rational literal: " + s);
  if (q.get_den() == 0) throw parse_error("zero denominator: " + s);
  q.canonicalize();
  return Rat(std::move(q));
}

std::string Rat::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

size_t Rat::hash() const {
  /* mix limbs of numerator and denominator */
  auto mix = [](size_t h, const mpz_class& z) {
    size_t s = mpz_size(z.get_mpz_t());
    h ^= std::hash<int>()(sgn(z)) + 0x9e3779b9 + (h << 6) + (h >> 2);
    for (size_t i = 0; i < s; ++i)
      h ^= std::hash<unsigned long>()(mpz_getlimbn(z.get_mpz_t(), i)) + 0x9e3779b9 + (h << 6) +
           (h >> 2);
    return h;
  };
  return mix(mix(0, v_.get_num()), v_.get_den());
}

Fp Fp::inv() const {
  if (p_ == 0) {
    if (k_ == 1 || k_ == -1) return *this;
    if (k_ == 0) throw domain_error("prime field inverse of zero");
    throw domain_error("prime field inverse needs a modulus");
  }
  if (v_ == 0) throw domain_error("prime field inverse of zero");
  /* extended Euclid on (v, p) */
  long long r0 = (long long)v_, r1 = (long long)p_;
  long long s0 = 1, s1 = 0;
  while (r1 != 0) {
    long long q = r0 / r1;
    long long r2 = r0 - q * r1;
    long long s2 = s0 - q * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  if (r0 != 1) throw domain_error("modulus is not prime");
  long long s = s0 % (long long)p_;
  if (s < 0) s += (long long)p_;
  return make((uint64_t)s, p_);
}

Quad::Quad(Rat a, Rat b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  if (b_.is_zero()) { d_ = 0; return; }
  if (d_ == 0 || d_ == 1) throw domain_error("quadratic extension needs d not in {0,1}");
  if (!squarefree(d_)) throw domain_error("quadratic extension needs squarefree d");
}

bool Quad::squarefree(long d) {
  if (d == 0) return false;
  long n = d < 0 ? -d : d;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

int Quad::sign() const {
  if (b_.is_zero()) return a_.sign();
  if (d_ < 0) throw domain_error("no real order on an imaginary quadratic extension");
  if (a_.is_zero()) return b_.sign();
  int sa = a_.sign(), sb = b_.sign();
  if (sa == sb) return sa;
  /* opposite signs: compare a^2 with b^2 d exactly */
  Rat lhs = a_ * a_, rhs = b_ * b_ * Rat(d_);
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

Quad Quad::pow(long e) const {
  Quad base = e < 0 ? inv() : *this;
  unsigned long k = e < 0 ? (unsigned long)(-e) : (unsigned long)e;
  Quad r(1);
  r = Quad(Rat(1), Rat(0), d_ == 0 ? 0 : d_);
  while (k) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

std::string Quad::str() const {
  if (b_.is_zero()) return a_.str();
  std::string s;
  bool lead = true;
  if (!a_.is_zero()) { s += a_.str(); lead = false; }
  std::string bs;
  Rat babs = b_.abs();
  if (babs.is_one())
    bs = "sqrt(" + std::to_string(d_) + ")";
  else
    bs = babs.str() + "*sqrt(" + std::to_string(d_) + ")";
  if (b_.sign() < 0)
    s += lead ? "-" + bs : "-" + bs;
  else
    s += lead ? bs : "+" + bs;
  return s;
}

mpz_class gcd_z(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

mpz_class lcm_z(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

std::vector<std::pair<long, int>> factor_long(long n) {
  std::vector<std::pair<long, int>> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) { n /= p; ++e; }
      out.push_back({p, e});
    }
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::vector<std::pair<mpz_class, int>> factor_mpz(const mpz_class& n0) {
  /* trial division then Pollard rho; inputs here are denominators and
     resultants of user data, so stay modest */
  std::vector<std::pair<mpz_class, int>> out;
  mpz_class n = abs(n0);
  if (n <= 1) return out;
  auto push = [&](const mpz_class& p) {
    for (auto& pr : out)
      if (pr.first == p) { pr.second++; return; }
    out.push_back({p, 1});
  };
  for (long p = 2; p < 100000 && n > 1; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      push(p);
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
    if (mpz_class(p) * p > n) break;
  }
  std::function<void(mpz_class)> split = [&](mpz_class m) {
    if (m == 1) return;
    if (mpz_probab_prime_p(m.get_mpz_t(), 40)) { push(m); return; }
    /* Pollard rho with Brent cycle detection */
    for (unsigned long c = 1;; ++c) {
      mpz_class x = 2, y = 2, d = 1;
      while (d == 1) {
        x = (x * x + c) % m;
        y = (y * y + c) % m;
        y = (y * y + c) % m;
        d = gcd_z(abs(x - y), m);
      }
      if (d != m) {
        split(d);
        split(m / d);
        return;
      }
    }
  };
  split(n);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

bool is_prime_u64(uint64_t n) {
  mpz_class z((unsigned long)n);
  return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

long padic_val(const Rat& x, const mpz_class& p) {
  if (x.is_zero()) throw domain_error("valuation of zero");
  long v = 0;
  mpz_class n = x.num();
  mpz_class q;
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  if (v > 0) return v;
  mpz_class d = x.den();
  while (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(d.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t());
    --v;
  }
  return v;
}

mpz_class iroot(const mpz_class& n, unsigned long k) {
  mpz_class r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

bool is_square(const mpz_class& n, mpz_class* root) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    if (root) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
    return true;
  }
  return false;
}

}  // namespace jonq
