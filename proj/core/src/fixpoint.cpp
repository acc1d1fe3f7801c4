#include "jonq/fixpoint.hpp"

#include <cstdlib>
#include <sstream>
#include <unordered_map>

namespace jonq {

namespace {

using TV = TreeVertex<Rat>;
using JE = JonqElem<Rat>;

bool contains_place(const std::vector<Place<Rat>>& v, const Place<Rat>& p) {
  return std::find(v.begin(), v.end(), p) != v.end();
}

Word free_reduce(const Word& w) {
  Word out;
  for (int s : w) {
    if (!out.empty() && out.back() == -s)
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

/* word in a subgroup generating set rewritten through the table of the
   generators' words in the ambient group */
Word expand_word(const std::vector<Word>& table, const Word& w) {
  Word out;
  for (int s : w) {
    Word part = table[std::abs(s) - 1];
    if (s < 0) part = word_inverse(part);
    out.insert(out.end(), part.begin(), part.end());
  }
  return free_reduce(out);
}

Mo<Rat> h_letter(const GroupSpec& g, int s) {
  const Mo<Rat>& h = g.gens[std::abs(s) - 1].h;
  return s > 0 ? h : h.inv();
}

/* twisted self isometry of one fibre tree; meaningful at the places the
   base image fixes */
std::function<TV(const TV&)> self_isometry(const JE& f) {
  return [f](const TV& v) { return act_tree_vertex(f, v); };
}

long twisted_length(const JE& f, const Place<Rat>& P) {
  return isometry_descent(P, self_isometry(f)).length;
}

/* shortlex enumeration of freely reduced nonempty words; the callback
   returns true to stop */
template <typename CB>
bool for_words(const GroupSpec& g, int maxlen, CB&& cb) {
  struct Node {
    Word w;
    JE e;
  };
  std::vector<JE> pos = g.gens, neg;
  for (const JE& e : pos) neg.push_back(inverse_jonq(e));
  std::vector<Node> layer{{Word{}, JE()}};
  for (int len = 1; len <= maxlen; ++len) {
    std::vector<Node> next;
    for (const Node& nd : layer) {
      int last = nd.w.empty() ? 0 : nd.w.back();
      for (int k = 1; k <= (int)g.gens.size(); ++k)
        for (int s : {k, -k}) {
          if (last == -s) continue;
          Word w = nd.w;
          w.push_back(s);
          JE e = compose_jonq(nd.e, s > 0 ? pos[k - 1] : neg[k - 1]);
          if (cb(w, e)) return true;
          next.push_back({std::move(w), std::move(e)});
        }
    }
    layer = std::move(next);
  }
  return false;
}

/* coset enumeration over an arbitrary hashable state space; step applies
   one signed letter on the left */
template <typename S, typename StepFn>
std::optional<SchreierResult> schreier_enumerate(const GroupSpec& g,
                                                 const S& s0, StepFn&& step,
                                                 int bound) {
  std::vector<S> states{s0};
  std::unordered_map<S, int> index;
  index.emplace(s0, 0);
  std::vector<Word> trans{Word{}};
  std::vector<Word> raw;
  for (size_t qi = 0; qi < states.size(); ++qi)
    for (int k = 1; k <= (int)g.gens.size(); ++k)
      for (int s : {k, -k}) {
        S t = step(states[qi], s);
        auto it = index.find(t);
        if (it == index.end()) {
          if ((int)states.size() >= bound) return std::nullopt;
          index.emplace(t, (int)states.size());
          states.push_back(t);
          Word w{s};
          w.insert(w.end(), trans[qi].begin(), trans[qi].end());
          trans.push_back(std::move(w));
        } else {
          Word w = word_inverse(trans[it->second]);
          w.push_back(s);
          w.insert(w.end(), trans[qi].begin(), trans[qi].end());
          w = free_reduce(w);
          if (!w.empty()) raw.push_back(std::move(w));
        }
      }
  SchreierResult out;
  out.transversal = std::move(trans);
  std::vector<JE> seen;
  for (const Word& w : raw) {
    JE e = word_eval(g, w);
    if (e.is_identity()) continue;
    JE ei = inverse_jonq(e);
    bool dup = false;
    for (const JE& x : seen)
      if (x == e || x == ei) {
        dup = true;
        break;
      }
    if (!dup) {
      seen.push_back(std::move(e));
      out.subgroup.push_back(w);
    }
  }
  return out;
}

/* subgroup named by its generating words in the ambient group */
std::pair<GroupSpec, std::vector<Word>> kernel_group(const GroupSpec& g,
                                                     const SchreierResult& sr) {
  GroupSpec spec;
  std::vector<Word> words;
  for (const Word& w : sr.subgroup) {
    spec.gens.push_back(word_eval(g, w));
    spec.names.push_back(word_str(g, w));
    words.push_back(w);
  }
  if (spec.gens.empty()) {
    spec.gens.push_back(JE());
    spec.names.push_back("1");
    words.push_back(Word{});
  }
  return {std::move(spec), std::move(words)};
}

FixpointReport inconclusive(std::string msg) {
  FixpointReport r;
  r.outcome = FixOutcome::Inconclusive;
  r.diagnostics = std::move(msg);
  return r;
}

FixpointReport no_fixpoint_report(const GroupSpec& g, Word w,
                                  NonEllipticCert c, int horizon) {
  if (!verify_witness(word_eval(g, w), c, 2 * horizon))
    return inconclusive("a certificate failed its re-verification for the word " +
                        word_str(g, w));
  FixpointReport r;
  r.outcome = FixOutcome::NoFixedPoint;
  r.witness = std::move(w);
  r.certificate = std::move(c);
  return r;
}

std::optional<std::pair<Word, NonEllipticCert>> witness_search(
    const GroupSpec& g, int horizon, int maxlen) {
  std::optional<std::pair<Word, NonEllipticCert>> found;
  for_words(g, maxlen, [&](const Word& w, const JE& e) {
    if (auto c = non_elliptic_witness(e, horizon)) {
      if (verify_witness(e, *c, 2 * horizon)) {
        found = {w, *c};
        return true;
      }
    }
    return false;
  });
  return found;
}

FixpointReport finish_with_verification(const GroupSpec& g,
                                        const JVertex<Rat>& z, int horizon,
                                        const char* stage) {
  FixpointReport r;
  r.verification = verify_fixed(g, z);
  if (r.verification.ok) {
    r.outcome = FixOutcome::FixedVertex;
    r.vertex = z;
    return r;
  }
  if (auto w = witness_search(g, horizon, 2))
    return no_fixpoint_report(g, w->first, w->second, horizon);
  FixpointReport bad = inconclusive(
      std::string(stage) +
      ": the candidate marking failed verification and no certificate was "
      "found within the horizon");
  bad.verification = r.verification;
  return bad;
}

/* marking along the infinite base orbits that is carried to itself by f:
   base far behind every singular fibre, pushed forward until the images
   return to base; gives up when they do not settle within the horizon */
std::optional<JVertex<Rat>> infinite_orbit_marking(const JE& f, int N) {
  std::vector<Place<Rat>> qfix = fixed_points(f.h);
  std::vector<Place<Rat>> moving;
  for (const Place<Rat>& P : singular_places(f))
    if (!contains_place(qfix, P)) moving.push_back(P);
  JVertex<Rat> z;
  std::vector<Place<Rat>> visited;
  Mo<Rat> hinv = f.h.inv();
  for (const Place<Rat>& P : moving) {
    if (contains_place(visited, P)) continue;
    std::vector<long> offs;
    Place<Rat> cur = P;
    for (long j = 0; j <= 2 * N; ++j) {
      if (contains_place(moving, cur)) {
        offs.push_back(j);
        if (!contains_place(visited, cur)) visited.push_back(cur);
      }
      cur = place_image(cur, f.h);
    }
    cur = place_image(P, hinv);
    for (long j = 1; j <= 2 * N; ++j) {
      if (contains_place(moving, cur)) {
        offs.push_back(-j);
        if (!contains_place(visited, cur)) visited.push_back(cur);
      }
      cur = place_image(cur, hinv);
    }
    long lo = *std::min_element(offs.begin(), offs.end());
    long hi = *std::max_element(offs.begin(), offs.end());
    if (hi - lo > N) return std::nullopt;
    Place<Rat> start = P;
    for (long j = 0; j < -lo; ++j) start = place_image(start, hinv);
    TV v = TV::base(place_image(start, hinv));
    bool closed = false;
    for (long j = 0; j <= (hi - lo) + N; ++j) {
      v = act_tree_vertex(f, v);
      if (!v.is_base())
        set_coordinate(z, v);
      else if (j > hi - lo) {
        closed = true;
        break;
      }
    }
    if (!closed) return std::nullopt;
  }
  return z;
}

bool base_images_commute(const GroupSpec& g) {
  for (size_t i = 0; i < g.gens.size(); ++i)
    for (size_t j = i + 1; j < g.gens.size(); ++j)
      if (g.gens[i].h * g.gens[j].h != g.gens[j].h * g.gens[i].h) return false;
  return true;
}

FixpointReport lift_no_fixpoint(const GroupSpec& g,
                                const std::vector<Word>& table,
                                const FixpointReport& sub, int horizon) {
  return no_fixpoint_report(g, expand_word(table, sub.witness),
                            *sub.certificate, horizon);
}

/* orbit of a fixed marking of a finite index subgroup under the coset
   transversal, handed to the finite orbit engine */
FixpointReport orbit_and_finish(const GroupSpec& g, const SchreierResult& sr,
                                const JVertex<Rat>& zsub, int horizon,
                                const char* stage) {
  std::vector<JVertex<Rat>> orbit;
  for (const Word& tw : sr.transversal) {
    JVertex<Rat> y = act_on_vertex(word_eval(g, tw), zsub);
    if (std::find(orbit.begin(), orbit.end(), y) == orbit.end())
      orbit.push_back(std::move(y));
  }
  JVertex<Rat> z = finite_orbit_fixpoint(g, orbit);
  return finish_with_verification(g, z, horizon, stage);
}

}  // namespace

GroupSpec make_group(std::vector<JonqElem<Rat>> gens,
                     std::vector<std::string> names) {
  if (gens.empty()) throw domain_error("a group needs at least one generator");
  if (names.empty())
    for (size_t i = 0; i < gens.size(); ++i)
      names.push_back("g" + std::to_string(i));
  if (names.size() != gens.size())
    throw domain_error("generator names must match the generators");
  return {std::move(gens), std::move(names)};
}

JonqElem<Rat> word_eval(const GroupSpec& g, const Word& w) {
  JE acc;
  for (int s : w) {
    if (s == 0 || std::abs(s) > (int)g.gens.size())
      throw domain_error("word letter out of range");
    const JE& gen = g.gens[std::abs(s) - 1];
    acc = compose_jonq(acc, s > 0 ? gen : inverse_jonq(gen));
  }
  return acc;
}

std::string word_str(const GroupSpec& g, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (int s : w) {
    if (!out.empty()) out += "*";
    out += g.names[std::abs(s) - 1];
    if (s < 0) out += "^-1";
  }
  return out;
}

Word word_inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (int& s : r) s = -s;
  return r;
}

VerifyResult verify_fixed(const GroupSpec& g, const JVertex<Rat>& v) {
  VerifyResult r;
  for (size_t i = 0; i < g.gens.size(); ++i) {
    bool ok = act_on_vertex(g.gens[i], v) == v;
    r.transcript.emplace_back(g.names[i], ok);
    r.ok = r.ok && ok;
  }
  return r;
}

std::optional<NonEllipticCert> non_elliptic_witness(const JonqElem<Rat>& f,
                                                    int horizon) {
  if (f.is_identity()) return std::nullopt;
  MoebiusClass mc = classify_moebius(f.h);
  SingularitySet<Rat> sing = singular_places(f);
  if (mc.kind == MoebiusClass::Identity ||
      mc.kind == MoebiusClass::FiniteOrder) {
    std::vector<Place<Rat>> seen;
    for (const Place<Rat>& P : sing) {
      if (contains_place(seen, P)) continue;
      std::vector<Place<Rat>> orbit{P};
      Place<Rat> q = place_image(P, f.h);
      long bound = std::max(2L, 2 * mc.order + 2);
      while (q != P) {
        orbit.push_back(q);
        q = place_image(q, f.h);
        if ((long)orbit.size() > bound)
          throw domain_error("a base orbit failed to close");
      }
      for (const Place<Rat>& o : orbit)
        if (!contains_place(seen, o)) seen.push_back(o);
      JE ret = jonq_pow(f, (long)orbit.size());
      long len = twisted_length(ret, P);
      if (len > 0)
        return NonEllipticCert(
            PositiveTranslation{P, len, (long)orbit.size()});
    }
    return std::nullopt;
  }
  std::vector<Place<Rat>> qfix = fixed_points(f.h);
  for (const Place<Rat>& Q : qfix) {
    long len = twisted_length(f, Q);
    if (len > 0) return NonEllipticCert(PositiveTranslation{Q, len, 1});
  }
  std::optional<NonEllipticCert> weak;
  for (const Place<Rat>& P : sing) {
    if (contains_place(qfix, P)) continue;
    if (auto c = persistent_fibre_certificate(f, P, horizon)) {
      if (c->conclusive) return NonEllipticCert(PersistentFibre{P, *c});
      if (!weak) weak = NonEllipticCert(PersistentFibre{P, *c});
    }
  }
  return weak;
}

bool verify_witness(const JonqElem<Rat>& f, const NonEllipticCert& c,
                    int horizon) {
  if (std::holds_alternative<PositiveTranslation>(c)) {
    const PositiveTranslation& t = std::get<PositiveTranslation>(c);
    if (t.length <= 0 || t.power < 1) return false;
    JE g = jonq_pow(f, t.power);
    if (place_image(t.place, g.h) != t.place) return false;
    return twisted_length(g, t.place) == t.length;
  }
  const PersistentFibre& pf = std::get<PersistentFibre>(c);
  if (pf.cert.l < 1 || horizon < pf.cert.l) return false;
  JE finv = inverse_jonq(f);
  JE fwd = jonq_pow(f, pf.cert.l);
  JE bwd = jonq_pow(finv, pf.cert.l);
  for (long n = pf.cert.l; n <= horizon; ++n) {
    if (is_biregular_over(fwd, pf.place)) return false;
    if (!is_biregular_over(bwd, pf.place)) return false;
    if (n < horizon) {
      fwd = compose_jonq(f, fwd);
      bwd = compose_jonq(finv, bwd);
    }
  }
  return true;
}

std::string cert_str(const NonEllipticCert& c) {
  std::ostringstream os;
  if (std::holds_alternative<PositiveTranslation>(c)) {
    const PositiveTranslation& t = std::get<PositiveTranslation>(c);
    os << "translation length " << t.length << " at " << t.place.str();
    if (t.power != 1) os << " for the power " << t.power;
  } else {
    const PersistentFibre& p = std::get<PersistentFibre>(c);
    os << "persistent singular fibre over " << p.place.str()
       << " from iterate " << p.cert.l
       << (p.cert.conclusive ? " (exact)" : " (checked to the horizon)");
  }
  return os.str();
}

std::string FixpointReport::str(const GroupSpec& g) const {
  std::ostringstream os;
  switch (outcome) {
    case FixOutcome::FixedVertex: {
      os << "fixed vertex " << jvertex_str(vertex);
      for (const auto& t : verification.transcript)
        os << "\n  " << t.first << ": " << (t.second ? "fixed" : "moved");
      break;
    }
    case FixOutcome::NoFixedPoint:
      os << "no fixed vertex; witness " << word_str(g, witness) << "; "
         << cert_str(*certificate);
      break;
    case FixOutcome::Inconclusive:
      os << "inconclusive: " << diagnostics;
      break;
  }
  return os.str();
}

FiniteQuotient FiniteQuotient::base_image(int bound) {
  FiniteQuotient q;
  q.kind = Kind::BaseImage;
  q.bound = bound;
  return q;
}

FiniteQuotient FiniteQuotient::place_orbit(const Place<Rat>& seed, int bound) {
  FiniteQuotient q;
  q.kind = Kind::PlaceOrbit;
  q.seed = seed;
  q.bound = bound;
  return q;
}

FiniteQuotient FiniteQuotient::multiplier(const Mo<Rat>& conj, int bound) {
  FiniteQuotient q;
  q.kind = Kind::Multiplier;
  q.conj = conj;
  q.bound = bound;
  return q;
}

SchreierResult finite_index_generators(const GroupSpec& g,
                                       const FiniteQuotient& q) {
  switch (q.kind) {
    case FiniteQuotient::Kind::BaseImage: {
      auto step = [&](const Mo<Rat>& m, int s) { return h_letter(g, s) * m; };
      auto r = schreier_enumerate(g, Mo<Rat>(), step, q.bound);
      if (!r)
        throw domain_error("closure bound exceeded for the base images");
      return *r;
    }
    case FiniteQuotient::Kind::PlaceOrbit: {
      auto step = [&](const Place<Rat>& p, int s) {
        return place_image(p, h_letter(g, s));
      };
      auto r = schreier_enumerate(g, q.seed, step, q.bound);
      if (!r) throw domain_error("closure bound exceeded for the place orbit");
      return *r;
    }
    default: {
      Mo<Rat> ci = q.conj.inv();
      auto step = [&](const Rat& a, int s) {
        Mo<Rat> m = q.conj * h_letter(g, s) * ci;
        if (!is_zero(m.c()))
          throw domain_error(
              "a base image does not stabilize the chosen point");
        return m.a() * field_inv(m.d()) * a;
      };
      auto r = schreier_enumerate(g, Rat(1), step, q.bound);
      if (!r)
        throw domain_error("closure bound exceeded for the multipliers");
      return *r;
    }
  }
}

JVertex<Rat> finite_orbit_fixpoint(const GroupSpec& g,
                                   const std::vector<JVertex<Rat>>& orbit_in) {
  if (orbit_in.empty()) throw domain_error("the orbit is empty");
  std::vector<JVertex<Rat>> orbit;
  for (const JVertex<Rat>& y : orbit_in)
    if (std::find(orbit.begin(), orbit.end(), y) == orbit.end())
      orbit.push_back(y);
  for (const JE& gen : g.gens)
    for (const JVertex<Rat>& y : orbit) {
      JVertex<Rat> im = act_on_vertex(gen, y);
      if (std::find(orbit.begin(), orbit.end(), im) == orbit.end())
        throw domain_error(
            "the finite orbit is not invariant under the generators");
    }
  std::vector<Place<Rat>> supp;
  for (const JVertex<Rat>& y : orbit)
    for (const auto& [P, v] : y)
      if (!contains_place(supp, P)) supp.push_back(P);
  for (const JE& gen : g.gens)
    for (const Place<Rat>& P : singular_places(gen))
      if (!contains_place(supp, P)) supp.push_back(P);
  std::sort(supp.begin(), supp.end(), Place<Rat>::less);
  /* pointwise circumcenters; the tie breaks are deterministic but not
     carried by the action, so the result is gated by verification */
  JVertex<Rat> z;
  for (const Place<Rat>& P : supp) {
    std::vector<TV> pts;
    for (const JVertex<Rat>& y : orbit) pts.push_back(coordinate_at(y, P));
    set_coordinate(z, finite_orbit_center(pts));
  }
  if (verify_fixed(g, z).ok) return z;
  /* stabilizer construction: one fixed vertex per place orbit, pushed
     around by the coset transversal */
  JVertex<Rat> z2;
  std::vector<Place<Rat>> done;
  for (const Place<Rat>& P : supp) {
    if (contains_place(done, P)) continue;
    SchreierResult sr;
    try {
      sr = finite_index_generators(g, FiniteQuotient::place_orbit(P, 256));
    } catch (const domain_error&) {
      throw domain_error("no invariant center found for the finite orbit");
    }
    std::vector<std::function<TV(const TV&)>> ts;
    for (const Word& w : sr.subgroup)
      ts.push_back(self_isometry(word_eval(g, w)));
    CommonFixed<Rat> cf = common_fixed_isometries(ts, P);
    if (!cf.vertex)
      throw domain_error("no invariant center found for the finite orbit");
    for (const Word& tw : sr.transversal) {
      JE te = word_eval(g, tw);
      TV v = act_tree_vertex(te, *cf.vertex);
      set_coordinate(z2, v);
      done.push_back(v.place());
    }
  }
  if (verify_fixed(g, z2).ok) return z2;
  throw domain_error("no invariant center found for the finite orbit");
}

FixpointReport abelian_fixpoint(const GroupSpec& g, int horizon) {
  if (!base_images_commute(g))
    throw domain_error("the base images do not commute");
  bool trivial = true;
  for (const JE& gen : g.gens) trivial = trivial && gen.h.is_identity();
  if (trivial) {
    std::vector<Place<Rat>> supp;
    for (const JE& gen : g.gens)
      for (const Place<Rat>& P : singular_places(gen))
        if (!contains_place(supp, P)) supp.push_back(P);
    std::sort(supp.begin(), supp.end(), Place<Rat>::less);
    JVertex<Rat> z;
    for (const Place<Rat>& P : supp) {
      std::vector<Mo<RatFunc<Rat>>> mats;
      for (const JE& gen : g.gens) mats.push_back(gen.A);
      CommonFixed<Rat> cf = common_fixed_vertex(mats, P);
      if (!cf.vertex) {
        Word w;
        for (int i : cf.witness) w.push_back(i + 1);
        JE prod = word_eval(g, w);
        long len = translation_length_at_place(prod.A, P);
        return no_fixpoint_report(g, w, PositiveTranslation{P, len, 1},
                                  horizon);
      }
      set_coordinate(z, *cf.vertex);
    }
    return finish_with_verification(g, z, horizon, "abelian");
  }
  int ti = -1;
  for (size_t i = 0; i < g.gens.size() && ti < 0; ++i) {
    MoebiusClass::Kind k = classify_moebius(g.gens[i].h).kind;
    if (k == MoebiusClass::UnipotentInfinite ||
        k == MoebiusClass::SemisimpleInfinite)
      ti = (int)i;
  }
  if (ti < 0)
    throw domain_error("the abelian engine needs a base image of infinite "
                       "order or all of them trivial");
  const JE& t = g.gens[ti];
  if (auto c = non_elliptic_witness(t, horizon))
    return no_fixpoint_report(g, {ti + 1}, *c, horizon);
  auto marking = infinite_orbit_marking(t, horizon);
  if (!marking) {
    if (auto w = witness_search(g, horizon, 2))
      return no_fixpoint_report(g, w->first, w->second, horizon);
    return inconclusive(
        "the orbit marking of the infinite order element did not settle "
        "within the horizon");
  }
  JVertex<Rat> z = *marking;
  for (const Place<Rat>& Q : fixed_points(t.h)) {
    for (const JE& gen : g.gens)
      if (place_image(Q, gen.h) != Q)
        return inconclusive(
            "a base image moves a fixed place of the infinite order element");
    std::vector<std::function<TV(const TV&)>> ts;
    for (const JE& gen : g.gens) ts.push_back(self_isometry(gen));
    CommonFixed<Rat> cf = common_fixed_isometries(ts, Q);
    if (!cf.vertex) {
      Word w;
      for (int i : cf.witness) w.push_back(i + 1);
      long len = twisted_length(word_eval(g, w), Q);
      return no_fixpoint_report(g, w, PositiveTranslation{Q, len, 1}, horizon);
    }
    set_coordinate(z, *cf.vertex);
  }
  return finish_with_verification(g, z, horizon, "abelian");
}

FixpointReport semisimple_fixpoint(const GroupSpec& g, const Word& tword,
                                   int horizon, int wordlen) {
  JE t = word_eval(g, tword);
  if (classify_moebius(t.h).kind != MoebiusClass::SemisimpleInfinite)
    throw domain_error(
        "the designated element needs a semisimple base image of infinite "
        "order");
  if (!find_ns_place(t.h).found)
    throw domain_error("no north-south place for the designated element");
  if (auto c = non_elliptic_witness(t, horizon))
    return no_fixpoint_report(g, tword, *c, horizon);
  std::vector<Place<Rat>> pq = fixed_points(t.h);
  bool setwise = true, pointwise = true;
  for (const JE& gen : g.gens)
    for (const Place<Rat>& Q : pq) {
      Place<Rat> im = place_image(Q, gen.h);
      if (!contains_place(pq, im)) setwise = false;
      if (im != Q) pointwise = false;
    }
  if (setwise) {
    if (pointwise) {
      /* adjoin t as a redundant generator so the abelian engine sees an
         infinite order base image even when t is a longer word */
      GroupSpec aug = g;
      aug.gens.push_back(t);
      aug.names.push_back(word_str(g, tword));
      if (base_images_commute(aug)) {
        std::vector<Word> table;
        for (int k = 1; k <= (int)g.gens.size(); ++k) table.push_back({k});
        table.push_back(tword);
        FixpointReport sub = abelian_fixpoint(aug, horizon);
        if (sub.outcome == FixOutcome::NoFixedPoint)
          return lift_no_fixpoint(g, table, sub, horizon);
        if (sub.outcome == FixOutcome::Inconclusive) return sub;
        return finish_with_verification(g, sub.vertex, horizon, "semisimple");
      }
    }
    SchreierResult sr =
        finite_index_generators(g, FiniteQuotient::place_orbit(pq[0], 8));
    auto [kspec, kwords] = kernel_group(g, sr);
    FixpointReport sub;
    try {
      sub = abelian_fixpoint(kspec, horizon);
    } catch (const domain_error& e) {
      return inconclusive(std::string("stabilizer subgroup: ") + e.what());
    }
    if (sub.outcome == FixOutcome::NoFixedPoint)
      return lift_no_fixpoint(g, kwords, sub, horizon);
    if (sub.outcome == FixOutcome::Inconclusive) return sub;
    try {
      return orbit_and_finish(g, sr, sub.vertex, horizon, "semisimple");
    } catch (const domain_error& e) {
      return inconclusive(std::string("semisimple: ") + e.what());
    }
  }
  auto marking = infinite_orbit_marking(t, horizon);
  if (!marking) {
    if (auto w = witness_search(g, horizon, 2))
      return no_fixpoint_report(g, w->first, w->second, horizon);
    return inconclusive(
        "the orbit marking of the designated element did not settle within "
        "the horizon");
  }
  JVertex<Rat> z = *marking;
  for (const Place<Rat>& Q : pq) {
    IsometryDescent<Rat> de = isometry_descent(Q, self_isometry(t));
    if (de.length > 0)
      return no_fixpoint_report(g, tword,
                                PositiveTranslation{Q, de.length, 1}, horizon);
    set_coordinate(z, de.vertex);
  }
  /* pull the coordinates at the fixed places in from a third place */
  for (const Place<Rat>& Q : pq) {
    for_words(g, wordlen, [&](const Word& w, const JE& e) {
      Place<Rat> r = place_image(Q, e.h.inv());
      if (contains_place(pq, r)) return false;
      set_coordinate(z, coordinate_at(act_on_vertex(e, z), Q));
      return true;
    });
  }
  return finish_with_verification(g, z, horizon, "semisimple");
}

namespace {

struct Horizons {
  int wordlen;
  int closure;
  int cert;
};

FixpointReport decent_attempt(const GroupSpec& g, const Horizons& hz) {
  SchreierResult cl;
  bool closed = true;
  try {
    cl = finite_index_generators(g, FiniteQuotient::base_image(hz.closure));
  } catch (const domain_error&) {
    closed = false;
  }
  if (closed) {
    auto [kspec, kwords] = kernel_group(g, cl);
    FixpointReport sub = abelian_fixpoint(kspec, hz.cert);
    if (sub.outcome == FixOutcome::NoFixedPoint)
      return lift_no_fixpoint(g, kwords, sub, hz.cert);
    if (sub.outcome == FixOutcome::Inconclusive) return sub;
    return orbit_and_finish(g, cl, sub.vertex, hz.cert, "finite closure");
  }
  Word sword;
  for_words(g, hz.wordlen, [&](const Word& w, const JE& e) {
    if (classify_moebius(e.h).kind == MoebiusClass::SemisimpleInfinite &&
        find_ns_place(e.h).found) {
      sword = w;
      return true;
    }
    return false;
  });
  if (!sword.empty())
    return semisimple_fixpoint(g, sword, hz.cert, hz.wordlen);
  Word uword;
  for_words(g, hz.wordlen, [&](const Word& w, const JE& e) {
    if (classify_moebius(e.h).kind == MoebiusClass::UnipotentInfinite) {
      uword = w;
      return true;
    }
    return false;
  });
  if (uword.empty())
    return inconclusive(
        "no element of infinite order was found within the word horizon");
  Mo<Rat> hu = word_eval(g, uword).h;
  Place<Rat> y0 = fixed_points(hu)[0];
  for (const JE& gen : g.gens)
    if (place_image(y0, gen.h) != y0)
      return inconclusive(
          "the base images do not share the fixed point of the unipotent "
          "element");
  Mo<Rat> sigma;
  if (!y0.is_infinite())
    sigma = Mo<Rat>(Rat(0), Rat(1), Rat(1), y0.pol().coeff(0));
  SchreierResult mr;
  try {
    mr = finite_index_generators(g, FiniteQuotient::multiplier(sigma, 64));
  } catch (const domain_error& e) {
    return inconclusive(std::string("multiplier quotient: ") + e.what());
  }
  auto [kspec, kwords] = kernel_group(g, mr);
  FixpointReport sub = abelian_fixpoint(kspec, hz.cert);
  if (sub.outcome == FixOutcome::NoFixedPoint)
    return lift_no_fixpoint(g, kwords, sub, hz.cert);
  if (sub.outcome == FixOutcome::Inconclusive) return sub;
  return orbit_and_finish(g, mr, sub.vertex, hz.cert, "unipotent route");
}

}  // namespace

FixpointReport decent_fixpoint(const GroupSpec& g) {
  const Horizons rounds[2] = {{6, 1000, 32}, {12, 2000, 64}};
  std::string first;
  for (int round = 0; round < 2; ++round) {
    FixpointReport r;
    try {
      r = decent_attempt(g, rounds[round]);
    } catch (const domain_error& e) {
      r = inconclusive(e.what());
    }
    if (r.outcome != FixOutcome::Inconclusive) return r;
    if (round == 0)
      first = r.diagnostics;
    else {
      if (!first.empty() && first != r.diagnostics)
        r.diagnostics = first + "; after doubling the horizons: " +
                        r.diagnostics;
      return r;
    }
  }
  return inconclusive("unreachable");
}

}  // namespace jonq
