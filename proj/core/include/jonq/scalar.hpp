#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace jonq {

struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& m) : std::runtime_error(m) {}
};
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& m) : std::runtime_error(m) {}
};

/* Arbitrary precision rational, always in canonical form (coprime, positive
   denominator).  Thin wrapper over mpq_class so the rest of the code gets a
   uniform field interface plus hashing and deterministic printing. */
class Rat {
  mpq_class v_;

public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}
  Rat(long n, long d) : v_(n, d) {
    if (d == 0) throw domain_error("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpz_class& n) : v_(n) {}
  Rat(const mpz_class& n, const mpz_class& d) : v_(n, d) {
    if (d == 0) throw domain_error("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rat(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

  static Rat from_string(const std::string& s);

  const mpq_class& mpq() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  Rat inv() const {
    if (is_zero()) throw domain_error("inverse of zero");
    return Rat(mpq_class(1 / v_));
  }
  Rat abs() const { return sign() < 0 ? -*this : *this; }

  std::string str() const;
  size_t hash() const;
};

/* Prime field element.  The modulus travels with the value; an element built
   without one holds a plain integer literal and adopts the modulus of the
   first sized operand it meets, so generic code can write K(1) freely.
   Moduli are required to fit in 63 bits so products can go through
   unsigned __int128. */
class Fp {
  uint64_t v_ = 0;
  uint64_t p_ = 0;
  long k_ = 0;

  static uint64_t norm(long n, uint64_t p) {
    long r = n % (long)p;
    if (r < 0) r += (long)p;
    return (uint64_t)r;
  }

  static long lit(__int128 x) {
    if (x > std::numeric_limits<long>::max() || x < std::numeric_limits<long>::min())
      throw domain_error("prime field literal overflow");
    return (long)x;
  }

public:
  Fp() = default;
  Fp(long n) : k_(n) {}
  Fp(long n, uint64_t p) : v_(norm(n, p)), p_(p) {}
  static Fp make(uint64_t v, uint64_t p) { Fp x; x.v_ = v % p; x.p_ = p; return x; }

  bool sized() const { return p_ != 0; }
  Fp sized_as(uint64_t p) const { return p_ != 0 ? *this : Fp(k_, p); }
  long literal() const { return k_; }

  uint64_t value() const {
    if (p_ != 0) return v_;
    if (k_ == 0) return 0;
    throw domain_error("prime field constant has no modulus");
  }
  uint64_t modulus() const { return p_; }

  bool is_zero() const { return p_ != 0 ? v_ == 0 : k_ == 0; }
  bool is_one() const { return p_ != 0 ? v_ == 1 : k_ == 1; }

  static uint64_t join(uint64_t a, uint64_t b) {
    if (a == 0) return b;
    if (b == 0) return a;
    if (a != b) throw domain_error("prime field modulus mismatch");
    return a;
  }

  friend Fp operator+(const Fp& a, const Fp& b) {
    uint64_t p = join(a.p_, b.p_);
    if (p == 0) return Fp(lit((__int128)a.k_ + b.k_));
    uint64_t s = a.sized_as(p).v_ + b.sized_as(p).v_;
    if (s >= p) s -= p;
    return make(s, p);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    uint64_t p = join(a.p_, b.p_);
    if (p == 0) return Fp(lit((__int128)a.k_ - b.k_));
    uint64_t s = a.sized_as(p).v_ + p - b.sized_as(p).v_;
    if (s >= p) s -= p;
    return make(s, p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    uint64_t p = join(a.p_, b.p_);
    if (p == 0) return Fp(lit((__int128)a.k_ * b.k_));
    return make((uint64_t)((unsigned __int128)a.sized_as(p).v_ * b.sized_as(p).v_ % p), p);
  }
  Fp operator-() const { return p_ == 0 ? Fp(lit(-(__int128)k_)) : make(p_ - v_, p_); }
  Fp inv() const;
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  friend bool operator==(const Fp& a, const Fp& b) {
    if (a.p_ != 0 && b.p_ != 0) return a.p_ == b.p_ && a.v_ == b.v_;
    if (a.p_ == 0 && b.p_ == 0) return a.k_ == b.k_;
    const Fp& s = a.p_ != 0 ? a : b;
    const Fp& l = a.p_ != 0 ? b : a;
    return norm(l.k_, s.p_) == s.v_;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  std::string str() const { return p_ != 0 ? std::to_string(v_) : std::to_string(k_); }
  size_t hash() const { return std::hash<uint64_t>()(p_ != 0 ? v_ : (uint64_t)k_); }
};

/* Element a + b*sqrt(d) of a quadratic extension of the rationals.  d is a
   squarefree integer other than 0 and 1, shared by both operands of any
   binary operation (d == 0 marks a plain rational constant).  Ordering and
   signs use the real embedding with sqrt(d) > 0 and are only available for
   d > 1; negative d still gives exact equality arithmetic. */
class Quad {
  Rat a_, b_;
  long d_ = 0;

public:
  Quad() = default;
  Quad(long n) : a_(n) {}
  Quad(Rat r) : a_(std::move(r)) {}
  Quad(Rat a, Rat b, long d);

  static bool squarefree(long d);

  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  long d() const { return d_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_one() const { return a_.is_one() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }

  static long join(long da, long db) {
    if (da == 0) return db;
    if (db == 0) return da;
    if (da != db) throw domain_error("quadratic extension mismatch");
    return da;
  }

  Quad conj() const { return b_.is_zero() ? *this : Quad(a_, -b_, d_); }
  Rat norm() const { return a_ * a_ - b_ * b_ * Rat(d_); }
  Rat trace() const { return a_ + a_; }

  friend Quad operator+(const Quad& x, const Quad& y) {
    long d = join(x.d_, y.d_);
    return Quad(x.a_ + y.a_, x.b_ + y.b_, d);
  }
  friend Quad operator-(const Quad& x, const Quad& y) {
    long d = join(x.d_, y.d_);
    return Quad(x.a_ - y.a_, x.b_ - y.b_, d);
  }
  friend Quad operator*(const Quad& x, const Quad& y) {
    long d = join(x.d_, y.d_);
    return Quad(x.a_ * y.a_ + x.b_ * y.b_ * Rat(d), x.a_ * y.b_ + x.b_ * y.a_, d);
  }
  Quad operator-() const { return Quad(-a_, -b_, d_); }
  Quad inv() const {
    Rat n = norm();
    if (n.is_zero()) throw domain_error("inverse of zero in quadratic extension");
    return Quad(a_ / n, -b_ / n, d_);
  }
  friend Quad operator/(const Quad& x, const Quad& y) { return x * y.inv(); }
  Quad& operator+=(const Quad& o) { return *this = *this + o; }
  Quad& operator-=(const Quad& o) { return *this = *this - o; }
  Quad& operator*=(const Quad& o) { return *this = *this * o; }
  Quad& operator/=(const Quad& o) { return *this = *this / o; }

  friend bool operator==(const Quad& x, const Quad& y) {
    if (x.d_ != 0 && y.d_ != 0 && x.d_ != y.d_) return false;
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Quad& x, const Quad& y) { return !(x == y); }

  /* sign of a + b*sqrt(d) in the embedding sqrt(d) > 0, d > 1 */
  int sign() const;
  friend bool operator<(const Quad& x, const Quad& y) { return (x - y).sign() < 0; }
  friend bool operator>(const Quad& x, const Quad& y) { return (x - y).sign() > 0; }
  Quad abs() const { return sign() < 0 ? -*this : *this; }

  Quad pow(long e) const;

  std::string str() const;
  size_t hash() const { return a_.hash() * 1315423911u ^ b_.hash(); }
};

/* field concept glue used by templated polynomial code */
template <typename K> inline bool is_zero(const K& x) { return x.is_zero(); }
template <typename K> inline bool is_one(const K& x) { return x.is_one(); }
template <typename K> inline K field_inv(const K& x) { return x.inv(); }
template <typename K> inline std::string to_str(const K& x) { return x.str(); }

/* multiplicative identity of a scalar or function field type */
template <typename T> struct one_of {
  static T get() { return T(1); }
};

/* strict deterministic order on coefficients, used for canonical place and
   polynomial orderings; for Fp this is the value order, for Quad the
   lexicographic (a, b) order, both independent of any real embedding */
inline bool coeff_less(const Rat& x, const Rat& y) { return x < y; }
inline bool coeff_less(const Fp& x, const Fp& y) {
  uint64_t p = Fp::join(x.modulus(), y.modulus());
  if (p == 0) return x.literal() < y.literal();
  return x.sized_as(p).value() < y.sized_as(p).value();
}
inline bool coeff_less(const Quad& x, const Quad& y) {
  if (x.a() != y.a()) return x.a() < y.a();
  return x.b() < y.b();
}

mpz_class gcd_z(const mpz_class& a, const mpz_class& b);
mpz_class lcm_z(const mpz_class& a, const mpz_class& b);

/* factorization of a machine integer, used for squarefree checks and for
   the prime searches in the valuation engine */
std::vector<std::pair<long, int>> factor_long(long n);
std::vector<std::pair<mpz_class, int>> factor_mpz(const mpz_class& n);
bool is_prime_u64(uint64_t n);

/* p-adic valuation of a rational: v_p(num) - v_p(den); zero input rejected */
long padic_val(const Rat& x, const mpz_class& p);

/* floor of the k-th root, exact */
mpz_class iroot(const mpz_class& n, unsigned long k);
bool is_square(const mpz_class& n, mpz_class* root = nullptr);

}  // namespace jonq

template <> struct std::hash<jonq::Rat> {
  size_t operator()(const jonq::Rat& r) const { return r.hash(); }
};
template <> struct std::hash<jonq::Fp> {
  size_t operator()(const jonq::Fp& r) const { return r.hash(); }
};
template <> struct std::hash<jonq::Quad> {
  size_t operator()(const jonq::Quad& r) const { return r.hash(); }
};
