#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jonq/fixpoint.hpp"

/* Word balls, degree tables and degree-growth classification for finitely
   generated groups of plane birational maps.  Two lanes share the code
   path: named Jonquieres groups compose in the canonical pair form, and
   general maps compose as reduced coordinate fractions with inverses
   attached by the caller where the alphabet should contain them. */

namespace jonq {

struct BallTooLarge : domain_error {
  explicit BallTooLarge(const std::string& m) : domain_error(m) {}
};

struct BallOptions {
  long max_elements = 200000;
};

/* Breadth-first closure of the words of length at most n, deduplicated by
   canonical form, in deterministic discovery order starting from the
   identity.  The Jonquieres lane extends the alphabet by the inverses of
   the generators itself. */
std::vector<JonqElem<Rat>> ball(const GroupSpec& g, int n,
                                const BallOptions& opt = {});
std::vector<CremonaMap<Rat>> ball(const std::vector<CremonaMap<Rat>>& gens,
                                  int n, const BallOptions& opt = {});

/* Exact maximal degree over the word ball, one row per radius.  When every
   generator preserves the pencil of fibres the linear degree bound
   D(n) <= K n + 1 with K = (max generator degree) - 1 is recorded. */
struct DegreeTable {
  std::vector<std::pair<int, long>> rows;
  std::string fingerprint;
  std::optional<long> jonq_bound_k;
  bool jonq_bound_holds = false;

  std::string tsv() const;
};

DegreeTable degree_table(const GroupSpec& g, int n_max,
                         const BallOptions& opt = {});
DegreeTable degree_table(const std::vector<CremonaMap<Rat>>& gens, int n_max,
                         const BallOptions& opt = {});

/* Growth verdict from a finite table, by fixed finite criteria: constant
   final third, vanishing or constant-positive second differences over the
   last four of them, or successive ratios at least 9/8 across the final
   third.  The decision window is reported in radii, inclusive, and the
   exact ratio bracket accompanies the exponential and inconclusive
   verdicts. */
struct GrowthClass {
  enum Kind { Bounded, Linear, Quadratic, Exponential, Inconclusive };
  Kind kind = Inconclusive;
  std::optional<std::pair<Rat, Rat>> bracket;
  int window_begin = 0;
  int window_end = 0;

  std::string str() const;
};

GrowthClass classify_growth(const DegreeTable& t);

}  // namespace jonq
