#pragma once

#include <algorithm>

#include "jonq/factor.hpp"

namespace jonq {

/* Sentinel valuation of the zero element.  Large enough to dominate every
   honest valuation, small enough that a few additions cannot overflow. */
inline constexpr long val_inf = 1L << 60;

/* A place of the rational function field K(x): a monic irreducible
   polynomial, or the degree place at infinity.  Places order by residue
   degree, then finite before infinite, then by polynomial order. */
template <typename K>
class Place {
  Poly<K> pol_;

  Place() = default;

public:
  static Place infinity() { return Place(); }

  /* trusts the caller, meant for factor() output */
  static Place from_irreducible(Poly<K> p) {
    Place q;
    q.pol_ = std::move(p);
    return q;
  }

  explicit Place(Poly<K> p) {
    if (p.deg() < 1 || p.monic() != p || !is_irreducible(p))
      throw domain_error("place needs a monic irreducible polynomial");
    pol_ = std::move(p);
  }

  bool is_infinite() const { return pol_.is_zero_p(); }
  const Poly<K>& pol() const { return pol_; }
  int degree() const { return is_infinite() ? 1 : pol_.deg(); }

  friend bool operator==(const Place& a, const Place& b) { return a.pol_ == b.pol_; }
  friend bool operator!=(const Place& a, const Place& b) { return a.pol_ != b.pol_; }

  static bool less(const Place& a, const Place& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    if (a.is_infinite() != b.is_infinite()) return b.is_infinite();
    if (a.is_infinite()) return false;
    return Poly<K>::less(a.pol_, b.pol_);
  }

  long val(const Poly<K>& f) const {
    if (f.is_zero_p()) return val_inf;
    return is_infinite() ? -(long)f.deg() : (long)f.multiplicity(pol_);
  }

  long val(const RatFunc<K>& f) const {
    if (f.num().is_zero_p()) return val_inf;
    return val(f.num()) - val(f.den());
  }

  RatFunc<K> uniformizer() const {
    return is_infinite() ? RatFunc<K>(Poly<K>(K(1)), Poly<K>::x())
                         : RatFunc<K>(pol_);
  }

  /* image in the residue field K[x]/P as a reduced polynomial (a constant
     at infinity); requires val(f) >= 0 */
  Poly<K> residue(const RatFunc<K>& f) const {
    if (f.num().is_zero_p()) return Poly<K>();
    long v = val(f);
    if (v < 0) throw domain_error("residue of a function with a pole");
    if (v > 0) return Poly<K>();
    if (is_infinite())
      return Poly<K>(f.num().lead() * field_inv(f.den().lead()));
    Poly<K> nr = f.num() % pol_, dr = f.den() % pol_;
    auto [g, s, t] = Poly<K>::xgcd(dr, pol_);
    if (g.deg() != 0) throw domain_error("place polynomial is not irreducible");
    return nr * s % pol_ * field_inv(g.coeff(0));
  }

  /* tautological section of the residue map */
  RatFunc<K> lift(const Poly<K>& r) const {
    if (!is_infinite() && r.deg() >= pol_.deg())
      throw domain_error("residue representative too large");
    if (is_infinite() && r.deg() > 0)
      throw domain_error("residue at infinity must be constant");
    return RatFunc<K>(r);
  }

  std::string str() const { return is_infinite() ? "inf" : "(" + pol_.str("x") + ")"; }

  size_t hash() const {
    return is_infinite() ? 0x517cc1b727220a95ULL : pol_.hash();
  }
};

/* All places where f has nonzero valuation, with the valuations, sorted.
   The sum of val * degree over the support vanishes. */
template <typename K>
std::vector<std::pair<Place<K>, long>> support(const RatFunc<K>& f) {
  if (f.num().is_zero_p()) throw domain_error("support of the zero function");
  std::vector<std::pair<Place<K>, long>> out;
  for (auto& [q, m] : factor(f.num()))
    out.push_back({Place<K>::from_irreducible(q), m});
  for (auto& [q, m] : factor(f.den()))
    out.push_back({Place<K>::from_irreducible(q), -(long)m});
  long vi = (long)f.den().deg() - (long)f.num().deg();
  if (vi != 0) out.push_back({Place<K>::infinity(), vi});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return Place<K>::less(a.first, b.first);
  });
  return out;
}

}  // namespace jonq

template <typename K> struct std::hash<jonq::Place<K>> {
  size_t operator()(const jonq::Place<K>& p) const { return p.hash(); }
};
