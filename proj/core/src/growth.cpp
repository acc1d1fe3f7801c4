#include "jonq/growth.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace jonq {

namespace {

template <typename E>
struct BallData {
  std::vector<E> elems;
  std::vector<size_t> layer_end;
};

template <typename Hash, typename E, typename MulFn>
BallData<E> ball_core(const std::vector<E>& alphabet, int n,
                      const BallOptions& opt, MulFn mul) {
  if (n < 0) throw domain_error("the ball radius must be nonnegative");
  std::unordered_set<E, Hash> seen;
  BallData<E> out;
  out.elems.push_back(E());
  seen.insert(E());
  out.layer_end.push_back(1);
  size_t lo = 0;
  for (int layer = 1; layer <= n; ++layer) {
    size_t hi = out.elems.size();
    for (size_t i = lo; i < hi; ++i)
      for (const E& a : alphabet) {
        E w = mul(out.elems[i], a);
        if (!seen.insert(w).second) continue;
        if ((long)out.elems.size() >= opt.max_elements)
          throw BallTooLarge("the ball exceeded the element budget of " +
                             std::to_string(opt.max_elements));
        out.elems.push_back(std::move(w));
      }
    lo = hi;
    out.layer_end.push_back(out.elems.size());
  }
  return out;
}

struct CmHash {
  size_t operator()(const CremonaMap<Rat>& f) const { return f.hash(); }
};

std::vector<JonqElem<Rat>> jonq_alphabet(const GroupSpec& g) {
  std::vector<JonqElem<Rat>> letters;
  auto add = [&](const JonqElem<Rat>& a) {
    if (a.is_identity()) return;
    if (std::find(letters.begin(), letters.end(), a) == letters.end())
      letters.push_back(a);
  };
  for (const JonqElem<Rat>& a : g.gens) {
    add(a);
    add(inverse_jonq(a));
  }
  return letters;
}

std::vector<CremonaMap<Rat>> cremona_alphabet(
    const std::vector<CremonaMap<Rat>>& gens) {
  std::vector<CremonaMap<Rat>> letters;
  auto add = [&](const CremonaMap<Rat>& a) {
    if (a.is_identity()) return;
    if (std::find(letters.begin(), letters.end(), a) == letters.end())
      letters.push_back(a);
  };
  for (const CremonaMap<Rat>& a : gens) {
    add(a);
    if (a.has_inverse()) add(a.inverse());
  }
  return letters;
}

BallData<JonqElem<Rat>> jonq_ball_data(const GroupSpec& g, int n,
                                       const BallOptions& opt) {
  return ball_core<std::hash<JonqElem<Rat>>>(
      jonq_alphabet(g), n, opt,
      [](const JonqElem<Rat>& e, const JonqElem<Rat>& a) {
        return compose_jonq(e, a);
      });
}

BallData<CremonaMap<Rat>> cremona_ball_data(
    const std::vector<CremonaMap<Rat>>& gens, int n, const BallOptions& opt) {
  return ball_core<CmHash>(cremona_alphabet(gens), n, opt,
                           [](const CremonaMap<Rat>& e,
                              const CremonaMap<Rat>& a) {
                             return compose_cremona(e, a);
                           });
}

/* rows from per-element degrees, cumulative maximum per layer */
template <typename E, typename DegFn>
void fill_rows(DegreeTable& t, const BallData<E>& bd, int n_max, DegFn deg) {
  long D = 1;
  t.rows.emplace_back(0, D);
  for (int layer = 1; layer <= n_max; ++layer) {
    for (size_t i = bd.layer_end[layer - 1]; i < bd.layer_end[layer]; ++i)
      D = std::max(D, deg(bd.elems[i]));
    t.rows.emplace_back(layer, D);
  }
}

void record_jonq_bound(DegreeTable& t, long maxdeg) {
  long k = std::max(0L, maxdeg - 1);
  t.jonq_bound_k = k;
  t.jonq_bound_holds = true;
  for (const auto& row : t.rows)
    if (row.first >= 1 && row.second > k * row.first + 1)
      t.jonq_bound_holds = false;
}

}  // namespace

std::vector<JonqElem<Rat>> ball(const GroupSpec& g, int n,
                                const BallOptions& opt) {
  return jonq_ball_data(g, n, opt).elems;
}

std::vector<CremonaMap<Rat>> ball(const std::vector<CremonaMap<Rat>>& gens,
                                  int n, const BallOptions& opt) {
  return cremona_ball_data(gens, n, opt).elems;
}

DegreeTable degree_table(const GroupSpec& g, int n_max,
                         const BallOptions& opt) {
  BallData<JonqElem<Rat>> bd = jonq_ball_data(g, n_max, opt);
  DegreeTable t;
  std::ostringstream fp;
  long maxdeg = 1;
  for (size_t i = 0; i < g.gens.size(); ++i) {
    if (i) fp << "; ";
    fp << g.names[i] << " = " << g.gens[i].str();
    maxdeg = std::max(maxdeg, jonq_degree(g.gens[i]).deg);
  }
  t.fingerprint = fp.str();
  fill_rows(t, bd, n_max,
            [](const JonqElem<Rat>& f) { return jonq_degree(f).deg; });
  record_jonq_bound(t, maxdeg);
  return t;
}

DegreeTable degree_table(const std::vector<CremonaMap<Rat>>& gens, int n_max,
                         const BallOptions& opt) {
  BallData<CremonaMap<Rat>> bd = cremona_ball_data(gens, n_max, opt);
  DegreeTable t;
  std::ostringstream fp;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (i) fp << "; ";
    fp << gens[i].str_affine();
  }
  t.fingerprint = fp.str();
  fill_rows(t, bd, n_max, [](const CremonaMap<Rat>& f) { return f.deg(); });
  bool all_jonq = true;
  long maxdeg = 1;
  for (const CremonaMap<Rat>& f : gens) {
    try {
      cremona_to_jonq(f);
      maxdeg = std::max(maxdeg, f.deg());
    } catch (const not_jonquieres&) {
      all_jonq = false;
      break;
    }
  }
  if (all_jonq) record_jonq_bound(t, maxdeg);
  return t;
}

std::string DegreeTable::tsv() const {
  std::ostringstream os;
  for (const auto& row : rows) os << row.first << "\t" << row.second << "\n";
  return os.str();
}

GrowthClass classify_growth(const DegreeTable& t) {
  const auto& r = t.rows;
  int len = (int)r.size();
  if (len < 6)
    throw domain_error("the growth classifier needs at least six table rows");
  auto v = [&](int i) { return r[i].second; };

  GrowthClass out;
  int tb = len - (len + 2) / 3;

  bool flat = true;
  for (int i = tb + 1; i < len; ++i)
    if (v(i) != v(tb)) flat = false;
  if (flat) {
    out.kind = GrowthClass::Bounded;
    out.window_begin = r[tb].first;
    out.window_end = r[len - 1].first;
    return out;
  }

  /* second differences over the last six rows */
  bool zero = true, constant = true;
  long s0 = v(len - 4) - 2 * v(len - 5) + v(len - 6);
  for (int i = len - 6; i <= len - 3; ++i) {
    long s = v(i + 2) - 2 * v(i + 1) + v(i);
    if (s != 0) zero = false;
    if (s != s0) constant = false;
  }
  if (zero || (constant && s0 > 0)) {
    out.kind = zero ? GrowthClass::Linear : GrowthClass::Quadratic;
    out.window_begin = r[len - 6].first;
    out.window_end = r[len - 1].first;
    return out;
  }

  /* successive ratios over the final third */
  Rat lo, hi;
  bool expo = true;
  const Rat floor_ratio(9, 8);
  for (int i = tb; i + 1 < len; ++i) {
    Rat q = Rat(v(i + 1)) / Rat(v(i));
    if (i == tb) {
      lo = hi = q;
    } else {
      if (q < lo) lo = q;
      if (hi < q) hi = q;
    }
    if (q < floor_ratio) expo = false;
  }
  out.kind = expo ? GrowthClass::Exponential : GrowthClass::Inconclusive;
  out.bracket = std::make_pair(lo, hi);
  out.window_begin = r[tb].first;
  out.window_end = r[len - 1].first;
  return out;
}

std::string GrowthClass::str() const {
  std::ostringstream os;
  switch (kind) {
    case Bounded: os << "bounded"; break;
    case Linear: os << "linear"; break;
    case Quadratic: os << "quadratic"; break;
    case Exponential: os << "exponential"; break;
    case Inconclusive: os << "inconclusive"; break;
  }
  if (bracket)
    os << ", ratio in [" << bracket->first.str() << ", "
       << bracket->second.str() << "]";
  os << " (window n = " << window_begin << ".." << window_end << ")";
  return os.str();
}

}  // namespace jonq
