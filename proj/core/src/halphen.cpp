#include "jonq/halphen.hpp"

#include <algorithm>
#include <cstdlib>

namespace jonq {

namespace {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;

LatMat lat_identity(size_t r) {
  LatMat m(r, LatVec(r, 0));
  for (size_t i = 0; i < r; ++i) m[i][i] = 1;
  return m;
}

bool is_lat_identity(const LatMat& m) {
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j)
      if (m[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

LatVec mat_vec(const LatMat& m, const LatVec& v) {
  LatVec out(m.size(), 0);
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

LatMat mat_mul(const LatMat& a, const LatMat& b) {
  size_t r = a.size();
  LatMat out(r, LatVec(r, 0));
  for (size_t i = 0; i < r; ++i)
    for (size_t k = 0; k < r; ++k)
      if (a[i][k] != 0)
        for (size_t j = 0; j < r; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

long pair_form(const LatMat& g, const LatVec& a, const LatVec& b) {
  long s = 0;
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) s += a[i] * g[i][j] * b[j];
  return s;
}

QVec to_q(const LatVec& v) {
  QVec out;
  for (long x : v) out.push_back(Rat(x));
  return out;
}

bool preserves_form(const LatMat& g, const LatMat& f) {
  size_t r = g.size();
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) {
      long s = 0;
      for (size_t k = 0; k < r; ++k)
        for (size_t l = 0; l < r; ++l) s += f[k][i] * g[k][l] * f[l][j];
      if (s != g[i][j]) return false;
    }
  return true;
}

/* signs of a symmetric rational form by congruence diagonalization;
   nullopt for a degenerate form */
std::optional<std::pair<int, int>> form_signature(QMat b) {
  int r = (int)b.size();
  int pos = 0, neg = 0;
  for (int k = 0; k < r; ++k) {
    if (b[k][k].is_zero()) {
      int l = -1;
      for (int j = k + 1; j < r; ++j)
        if (!b[k][j].is_zero()) { l = j; break; }
      if (l < 0) return std::nullopt;
      int sgn = (b[k][k] + b[l][l] + Rat(2) * b[k][l]).is_zero() ? -1 : 1;
      Rat s(sgn);
      for (int j = 0; j < r; ++j) b[k][j] += s * b[l][j];
      for (int j = 0; j < r; ++j) b[j][k] += s * b[j][l];
    }
    if (b[k][k].sign() > 0) ++pos; else ++neg;
    for (int i = k + 1; i < r; ++i) {
      Rat t = b[i][k] / b[k][k];
      if (t.is_zero()) continue;
      for (int j = 0; j < r; ++j) b[i][j] -= t * b[k][j];
      for (int j = 0; j < r; ++j) b[j][i] -= t * b[j][k];
    }
  }
  return std::make_pair(pos, neg);
}

/* scalar s with v = s d0, if any */
std::optional<Rat> d0_multiple(const QVec& v, const LatVec& d0) {
  size_t p = d0.size();
  for (size_t i = 0; i < d0.size(); ++i)
    if (d0[i] != 0) { p = i; break; }
  if (p == d0.size()) return std::nullopt;
  Rat s = v[p] / Rat(d0[p]);
  for (size_t i = 0; i < d0.size(); ++i)
    if (v[i] != s * Rat(d0[i])) return std::nullopt;
  return s;
}

/* basis of the orthogonal complement of d0, as the kernel of the row
   (G d0); empty when that row vanishes */
std::vector<QVec> d0_perp_basis(const LatMat& g, const LatVec& d0) {
  LatVec w = mat_vec(g, d0);
  size_t r = w.size(), p = r;
  for (size_t i = 0; i < r; ++i)
    if (w[i] != 0) { p = i; break; }
  std::vector<QVec> out;
  if (p == r) return out;
  for (size_t j = 0; j < r; ++j) {
    if (j == p) continue;
    QVec u(r, Rat(0));
    u[j] = Rat(1);
    u[p] = -Rat(w[j]) / Rat(w[p]);
    out.push_back(u);
  }
  return out;
}

QVec qmat_vec(const QMat& m, const QVec& v) {
  QVec out(m.size(), Rat(0));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

QMat qmat_mul(const QMat& a, const QMat& b) {
  size_t r = a.size();
  QMat out(r, QVec(r, Rat(0)));
  for (size_t i = 0; i < r; ++i)
    for (size_t k = 0; k < r; ++k)
      if (!a[i][k].is_zero())
        for (size_t j = 0; j < r; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

bool qmat_is_identity(const QMat& m) {
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j)
      if (m[i][j] != Rat(i == j ? 1 : 0)) return false;
  return true;
}

/* unique coordinates of b in the span of independent columns */
std::optional<QVec> solve_in_span(const std::vector<QVec>& cols,
                                  const QVec& b) {
  size_t r = b.size(), c = cols.size();
  QMat aug(r, QVec(c + 1, Rat(0)));
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < c; ++j) aug[i][j] = cols[j][i];
    aug[i][c] = b[i];
  }
  std::vector<size_t> pivot_row(c, r);
  size_t row = 0;
  for (size_t col = 0; col < c && row < r; ++col) {
    size_t p = row;
    while (p < r && aug[p][col].is_zero()) ++p;
    if (p == r) continue;
    std::swap(aug[p], aug[row]);
    Rat inv = aug[row][col].inv();
    for (size_t j = col; j <= c; ++j) aug[row][j] *= inv;
    for (size_t i = 0; i < r; ++i) {
      if (i == row || aug[i][col].is_zero()) continue;
      Rat t = aug[i][col];
      for (size_t j = col; j <= c; ++j) aug[i][j] -= t * aug[row][j];
    }
    pivot_row[col] = row;
    ++row;
  }
  for (size_t i = row; i < r; ++i)
    if (!aug[i][c].is_zero()) return std::nullopt;
  QVec x(c, Rat(0));
  for (size_t col = 0; col < c; ++col) {
    if (pivot_row[col] == r) return std::nullopt;
    x[col] = aug[pivot_row[col]][c];
  }
  return x;
}

/* exact integer inverse of a lattice isometry */
LatMat integral_inverse(const LatMat& f) {
  size_t r = f.size();
  std::vector<QVec> cols(r, QVec(r, Rat(0)));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) cols[j][i] = Rat(f[i][j]);
  LatMat out(r, LatVec(r, 0));
  for (size_t j = 0; j < r; ++j) {
    QVec b(r, Rat(0));
    b[j] = Rat(1);
    auto x = solve_in_span(cols, b);
    if (!x) throw domain_error("an auto is not invertible");
    for (size_t i = 0; i < r; ++i) {
      if (!(*x)[i].is_integer())
        throw domain_error("an auto is not invertible over the integers");
      out[i][j] = (long)(*x)[i].num().get_si();
    }
  }
  return out;
}

bool shapes_ok(const HalphenSystem& sys) {
  size_t r = sys.gram.size();
  if (r == 0) return false;
  for (const LatVec& row : sys.gram)
    if (row.size() != r) return false;
  if (sys.d0.size() != r || sys.ample.size() != r) return false;
  for (const LatMat& f : sys.autos) {
    if (f.size() != r) return false;
    for (const LatVec& row : f)
      if (row.size() != r) return false;
  }
  return true;
}

long rat_to_long(const Rat& q, const char* what) {
  if (!q.is_integer() || !q.num().fits_slong_p())
    throw domain_error(std::string(what) + " is not an integer in range");
  return q.num().get_si();
}

}  // namespace

std::vector<std::string> check_parabolic_system(const HalphenSystem& sys) {
  std::vector<std::string> out;
  if (!shapes_ok(sys)) {
    out.push_back("the system dimensions are inconsistent");
    return out;
  }
  size_t r = sys.gram.size();

  bool symmetric = true;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j)
      if (sys.gram[i][j] != sys.gram[j][i]) symmetric = false;
  if (!symmetric) out.push_back("the Gram matrix is not symmetric");

  bool nondegenerate = false;
  if (symmetric) {
    QMat b(r, QVec(r, Rat(0)));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) b[i][j] = Rat(sys.gram[i][j]);
    auto sig = form_signature(std::move(b));
    nondegenerate = sig.has_value();
    if (!sig || sig->first != 1 || sig->second != (int)r - 1)
      out.push_back("the Gram matrix does not have signature (1, r-1)");
  }

  bool d0_zero =
      std::all_of(sys.d0.begin(), sys.d0.end(), [](long x) { return x == 0; });
  if (d0_zero) out.push_back("D0 is zero");
  if (!d0_zero && pair_form(sys.gram, sys.d0, sys.d0) != 0)
    out.push_back("D0 is not isotropic");
  if (pair_form(sys.gram, sys.ample, sys.ample) <= 0)
    out.push_back("the ample class has nonpositive square");
  if (!d0_zero && pair_form(sys.gram, sys.ample, sys.d0) <= 0)
    out.push_back("the ample class does not meet D0 positively");

  std::vector<QVec> perp;
  if (symmetric && nondegenerate && !d0_zero)
    perp = d0_perp_basis(sys.gram, sys.d0);

  for (size_t a = 0; a < sys.autos.size(); ++a) {
    const LatMat& f = sys.autos[a];
    std::string label = "auto " + std::to_string(a);
    if (!preserves_form(sys.gram, f))
      out.push_back(label + " does not preserve the Gram form");
    if (mat_vec(f, sys.d0) != sys.d0) out.push_back(label + " does not fix D0");

    LatMat nil = f;
    for (size_t i = 0; i < r; ++i) nil[i][i] -= 1;
    LatMat acc = nil;
    for (size_t k = 1; k < r; ++k) acc = mat_mul(acc, nil);
    bool zero = true;
    for (const LatVec& row : acc)
      for (long x : row)
        if (x != 0) zero = false;
    if (!zero) out.push_back(label + " is not unipotent");

    for (const QVec& u : perp) {
      QVec fu(r, Rat(0));
      for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) fu[i] += Rat(f[i][j]) * u[j];
      for (size_t i = 0; i < r; ++i) fu[i] -= u[i];
      if (!d0_multiple(fu, sys.d0)) {
        out.push_back(label + " does not act as the identity on the quotient");
        break;
      }
    }
  }

  for (size_t a = 0; a < sys.autos.size(); ++a)
    for (size_t b = a + 1; b < sys.autos.size(); ++b)
      if (mat_mul(sys.autos[a], sys.autos[b]) !=
          mat_mul(sys.autos[b], sys.autos[a]))
        out.push_back("autos " + std::to_string(a) + " and " +
                      std::to_string(b) + " do not commute");

  return out;
}

HalphenCoefficients halphen_coefficients(const HalphenSystem& sys) {
  std::vector<std::string> bad = check_parabolic_system(sys);
  if (!bad.empty())
    throw domain_error("the system is not parabolic: " + bad.front());

  size_t k = sys.autos.size(), r = sys.gram.size();
  HalphenCoefficients hc;
  for (size_t i = 0; i < k; ++i) {
    LatVec ri = mat_vec(sys.autos[i], sys.ample);
    for (size_t j = 0; j < r; ++j) ri[j] -= sys.ample[j];
    if (pair_form(sys.gram, ri, sys.d0) != 0)
      throw domain_error(
          "a push-forward increment leaves the orthogonal complement of D0");
    hc.r.push_back(std::move(ri));
  }
  hc.t.assign(k, std::vector<Rat>(k, Rat(0)));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      LatVec u = mat_vec(sys.autos[i], hc.r[j]);
      for (size_t l = 0; l < r; ++l) u[l] -= hc.r[j][l];
      auto s = d0_multiple(to_q(u), sys.d0);
      if (!s)
        throw domain_error(
            "the push-forward relations fail, the system is not parabolic");
      hc.t[i][j] = *s;
    }
  return hc;
}

long closed_form_degree(const HalphenSystem& sys, const std::vector<long>& n) {
  if (n.size() != sys.autos.size())
    throw domain_error("one exponent per auto is required");
  HalphenCoefficients hc = halphen_coefficients(sys);
  size_t k = n.size(), r = sys.gram.size();

  QVec m = to_q(sys.ample);
  for (size_t i = 0; i < k; ++i)
    for (size_t l = 0; l < r; ++l) m[l] += Rat(n[i]) * Rat(hc.r[i][l]);
  Rat s(0);
  for (size_t i = 0; i < k; ++i)
    s += Rat(n[i]) * Rat(n[i] - 1) / Rat(2) * hc.t[i][i];
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j)
      s += Rat(n[i]) * Rat(n[j]) * hc.t[i][j];
  for (size_t l = 0; l < r; ++l) m[l] += s * Rat(sys.d0[l]);

  Rat deg(0);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j)
      deg += m[i] * Rat(sys.gram[i][j]) * Rat(sys.ample[j]);
  return rat_to_long(deg, "the closed-form degree");
}

long push_forward_degree(const HalphenSystem& sys, const std::vector<long>& n) {
  if (n.size() != sys.autos.size())
    throw domain_error("one exponent per auto is required");
  std::vector<std::string> bad = check_parabolic_system(sys);
  if (!bad.empty())
    throw domain_error("the system is not parabolic: " + bad.front());

  LatVec v = sys.ample;
  for (size_t i = 0; i < n.size(); ++i) {
    LatMat step =
        n[i] >= 0 ? sys.autos[i] : integral_inverse(sys.autos[i]);
    for (long c = 0; c < std::abs(n[i]); ++c) v = mat_vec(step, v);
  }
  return pair_form(sys.gram, v, sys.ample);
}

std::optional<long> finite_order_on_quotient(const LatMat& f,
                                             const HalphenSystem& sys) {
  size_t r = sys.gram.size();
  if (f.size() != r)
    throw domain_error("the map does not match the lattice rank");
  if (!preserves_form(sys.gram, f))
    throw domain_error("the map does not preserve the Gram form");

  const long bound = 256;
  const Rat blowup(1000000000000000L);

  if (mat_vec(f, sys.d0) == sys.d0) {
    std::vector<QVec> perp = d0_perp_basis(sys.gram, sys.d0);
    if (perp.empty())
      throw domain_error("the quotient needs a nondegenerate pairing with D0");
    auto coords = solve_in_span(perp, to_q(sys.d0));
    if (!coords)
      throw domain_error("D0 does not lie in its own orthogonal complement");
    size_t drop = perp.size();
    for (size_t i = 0; i < coords->size(); ++i)
      if (!(*coords)[i].is_zero()) { drop = i; break; }
    std::vector<QVec> quot;
    for (size_t i = 0; i < perp.size(); ++i)
      if (i != drop) quot.push_back(perp[i]);
    if (quot.empty()) return 1;

    std::vector<QVec> span;
    span.push_back(to_q(sys.d0));
    for (const QVec& q : quot) span.push_back(q);
    QMat m(quot.size(), QVec(quot.size(), Rat(0)));
    for (size_t j = 0; j < quot.size(); ++j) {
      QVec fq(r, Rat(0));
      for (size_t i = 0; i < r; ++i)
        for (size_t l = 0; l < r; ++l) fq[i] += Rat(f[i][l]) * quot[j][l];
      auto x = solve_in_span(span, fq);
      if (!x)
        throw domain_error("the map does not stabilize the quotient lattice");
      for (size_t i = 0; i < quot.size(); ++i) m[i][j] = (*x)[i + 1];
    }

    QMat acc = m;
    for (long k = 1; k <= bound; ++k) {
      if (qmat_is_identity(acc)) return k;
      for (const QVec& row : acc)
        for (const Rat& x : row)
          if (x > blowup || x < -blowup) return std::nullopt;
      acc = qmat_mul(acc, m);
    }
    return std::nullopt;
  }

  LatMat acc = f;
  for (long k = 1; k <= bound; ++k) {
    if (is_lat_identity(acc)) return k;
    for (const LatVec& row : acc)
      for (long x : row)
        if (x > 1000000000000000L || x < -1000000000000000L)
          return std::nullopt;
    acc = mat_mul(acc, f);
  }
  return std::nullopt;
}

LatMat eichler_transvection(const LatMat& gram, const LatVec& d0,
                            const LatVec& v) {
  size_t r = gram.size();
  if (d0.size() != r || v.size() != r)
    throw domain_error("the transvection data does not match the lattice rank");
  if (pair_form(gram, v, d0) != 0)
    throw domain_error("the transvection vector must be orthogonal to D0");
  long sq = pair_form(gram, v, v);
  if (sq % 2 != 0)
    throw domain_error("the transvection vector must have even square");
  long q = sq / 2;

  LatVec gv = mat_vec(gram, v), gd = mat_vec(gram, d0);
  LatMat e = lat_identity(r);
  for (size_t j = 0; j < r; ++j)
    for (size_t i = 0; i < r; ++i)
      e[i][j] += gv[j] * d0[i] - gd[j] * v[i] - q * gd[j] * d0[i];
  return e;
}

}  // namespace jonq
