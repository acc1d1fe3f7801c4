#include "jonq/jonquieres.hpp"

namespace jonq {

namespace {

Rat root_of(const Place<Rat>& p) { return -p.pol().coeff(0); }

Rat rat_pow(const Rat& x, long e) {
  if (e == 0) return Rat(1);
  unsigned long a = e < 0 ? 0UL - (unsigned long)e : (unsigned long)e;
  mpz_class np, dp;
  mpz_pow_ui(np.get_mpz_t(), x.num().get_mpz_t(), a);
  mpz_pow_ui(dp.get_mpz_t(), x.den().get_mpz_t(), a);
  return e > 0 ? Rat(np, dp) : Rat(dp, np);
}

/* some prime with a nonzero valuation of x; exists away from 1 and -1 */
mpz_class valuation_prime(const Rat& x) {
  mpz_class n = abs(x.num());
  if (n == 1) n = x.den();
  return factor_mpz(n).front().first;
}

/* h conjugated to w -> w + c, valid off the fixed place */
HitSolve translation_hit(const Mo<Rat>& h, const Place<Rat>& rho,
                         const Place<Rat>& P, const Place<Rat>& Q) {
  Mo<Rat> sig = rho.is_infinite()
                    ? Mo<Rat>()
                    : Mo<Rat>(Rat(0), Rat(1), Rat(1), -root_of(rho));
  Mo<Rat> g = sig * h * sig.inv();
  Rat c0 = g.b() / g.d();
  Place<Rat> Pp = place_image(P, sig), Qp = place_image(Q, sig);
  if (Qp.is_infinite()) return {true, std::nullopt};
  int d = Pp.degree();
  if (Qp.degree() != d) return {true, std::nullopt};
  Rat t = (Pp.pol().coeff(d - 1) - Qp.pol().coeff(d - 1)) / Rat(d);
  Rat jr = t / c0;
  if (!jr.is_integer() || !jr.num().fits_slong_p()) return {true, std::nullopt};
  long j = jr.num().get_si();
  Poly<Rat> shifted = Pp.pol().compose(Poly<Rat>{-t, Rat(1)});
  if (shifted == Qp.pol()) return {true, j};
  return {true, std::nullopt};
}

/* h conjugated to w -> mu w; hit times come out of one prime valuation */
HitSolve scaling_hit(const Mo<Rat>& h, const Place<Rat>& f1, const Place<Rat>& f2,
                     const Place<Rat>& P, const Place<Rat>& Q) {
  Mo<Rat> sig;
  if (f1.is_infinite())
    sig = Mo<Rat>(Rat(1), -root_of(f2), Rat(0), Rat(1));
  else if (f2.is_infinite())
    sig = Mo<Rat>(Rat(0), Rat(1), Rat(1), -root_of(f1));
  else
    sig = Mo<Rat>(Rat(1), -root_of(f2), Rat(1), -root_of(f1));
  Mo<Rat> g = sig * h * sig.inv();
  Rat mu = g.a() / g.d();
  Place<Rat> Pp = place_image(P, sig), Qp = place_image(Q, sig);
  if (Qp.is_infinite()) return {true, std::nullopt};
  int d = Pp.degree();
  if (Qp.degree() != d) return {true, std::nullopt};
  const Poly<Rat>&pp = Pp.pol(), &qp = Qp.pol();
  if (qp.coeff(0).is_zero()) return {true, std::nullopt};
  mpz_class ell = valuation_prime(mu);
  long vm = padic_val(mu, ell) * d;
  long vr = padic_val(qp.coeff(0) / pp.coeff(0), ell);
  if (vr % vm != 0) return {true, std::nullopt};
  long j = vr / vm;
  for (int i = 0; i <= d; ++i)
    if (pp.coeff(i) * rat_pow(mu, j * (d - i)) != qp.coeff(i))
      return {true, std::nullopt};
  return {true, j};
}

}  // namespace

HitSolve orbit_hit_time(const Mo<Rat>& h, const Place<Rat>& P, const Place<Rat>& Q) {
  MoebiusClass c = classify_moebius(h);
  if (c.kind != MoebiusClass::UnipotentInfinite &&
      c.kind != MoebiusClass::SemisimpleInfinite)
    return {};
  std::vector<Place<Rat>> fx = fixed_points(h);
  for (const Place<Rat>& fp : fx)
    if (fp == P) return {};
  if (c.kind == MoebiusClass::UnipotentInfinite)
    return translation_hit(h, fx[0], P, Q);
  if (fx.size() != 2) return {};
  return scaling_hit(h, fx[0], fx[1], P, Q);
}

std::optional<FibreCert> persistent_fibre_certificate(const JonqElem<Rat>& f,
                                                      const Place<Rat>& P, int N) {
  if (N < 1) throw domain_error("persistence horizon must be at least one");
  SingularitySet<Rat> S = singular_places(f);
  if (S.empty()) return std::nullopt;

  /* Exact route: the n-th vertical matrix is the product of A pulled
     back along h^j for j < n, and the class of the factor at P is
     nontrivial exactly when h^j(P) is a singular place.  One forward hit
     and no backward hit make every longer product singular forward and
     invertible backward. */
  bool exact_ready = true;
  std::vector<long> hits;
  for (const Place<Rat>& Q : S) {
    HitSolve s = orbit_hit_time(f.h, P, Q);
    if (!s.solvable) {
      exact_ready = false;
      break;
    }
    if (s.j) hits.push_back(*s.j);
  }
  if (exact_ready) {
    std::vector<long> fw, bw;
    for (long j : hits) (j >= 0 ? fw : bw).push_back(j);
    if (fw.empty()) return std::nullopt;
    if (fw.size() == 1 && bw.empty() && fw[0] + 1 <= N)
      return FibreCert{fw[0] + 1, true,
                       "base orbit meets the singular fibres exactly once, at step " +
                           std::to_string(fw[0]) + ", and never backward"};
    if (fw.size() == 1 && bw.empty()) return std::nullopt;
  }

  /* Horizon evidence: check the products directly. */
  JonqElem<Rat> fi = inverse_jonq(f);
  JonqElem<Rat> acc = f, acci = fi;
  std::vector<char> good(N + 1, 0);
  for (int n = 1; n <= N; ++n) {
    if (n > 1) {
      acc = compose_jonq(f, acc);
      acci = compose_jonq(fi, acci);
    }
    good[n] = !matrix_class_trivial(acc.A, P) && matrix_class_trivial(acci.A, P);
  }
  int l = 1;
  for (int n = 1; n <= N; ++n)
    if (!good[n]) l = n + 1;
  if (l <= N)
    return FibreCert{l, false,
                     "singular forward and biregular backward checked for n up to " +
                         std::to_string(N) + " only"};
  return std::nullopt;
}

}  // namespace jonq
