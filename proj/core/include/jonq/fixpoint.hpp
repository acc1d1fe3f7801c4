#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jonq/fibretree.hpp"

/* Fixed points of finitely generated groups acting on the product of fibre
   trees.  The engine runs over the rationals, where the exact orbit solves
   and the north-south place search are available. */

namespace jonq {

/* Named finite generating set.  Group elements are words in the generators,
   written as signed 1-based letters: +k means gens[k-1], -k its inverse,
   the empty word the identity. */
struct GroupSpec {
  std::vector<JonqElem<Rat>> gens;
  std::vector<std::string> names;
};

GroupSpec make_group(std::vector<JonqElem<Rat>> gens,
                     std::vector<std::string> names = {});

using Word = std::vector<int>;

JonqElem<Rat> word_eval(const GroupSpec& g, const Word& w);
std::string word_str(const GroupSpec& g, const Word& w);
Word word_inverse(const Word& w);

/* Per-generator check that a marking is fixed, with one transcript line
   per generator. */
struct VerifyResult {
  bool ok = true;
  std::vector<std::pair<std::string, bool>> transcript;
};

VerifyResult verify_fixed(const GroupSpec& g, const JVertex<Rat>& v);

/* Certificates that a single element is not elliptic: either some power
   translates along one fibre tree, or the singular fibres over one place
   persist under iteration. */
struct PositiveTranslation {
  Place<Rat> place = Place<Rat>::infinity();
  long length = 0;
  long power = 1;
};

struct PersistentFibre {
  Place<Rat> place = Place<Rat>::infinity();
  FibreCert cert;
};

using NonEllipticCert = std::variant<PositiveTranslation, PersistentFibre>;

std::optional<NonEllipticCert> non_elliptic_witness(const JonqElem<Rat>& f,
                                                    int horizon);
bool verify_witness(const JonqElem<Rat>& f, const NonEllipticCert& c,
                    int horizon);
std::string cert_str(const NonEllipticCert& c);

enum class FixOutcome { FixedVertex, NoFixedPoint, Inconclusive };

struct FixpointReport {
  FixOutcome outcome = FixOutcome::Inconclusive;
  JVertex<Rat> vertex;
  VerifyResult verification;
  Word witness;
  std::optional<NonEllipticCert> certificate;
  std::string diagnostics;
  std::string str(const GroupSpec& g) const;
};

/* Finite quotients of the generated group that the coset enumeration
   understands: the closure of the base images, the action on the place
   orbit of a seed, or the affine multiplier after moving a common fixed
   point of the base images to infinity. */
struct FiniteQuotient {
  enum class Kind { BaseImage, PlaceOrbit, Multiplier };
  Kind kind = Kind::BaseImage;
  Place<Rat> seed = Place<Rat>::infinity();
  Mo<Rat> conj;
  int bound = 1000;

  static FiniteQuotient base_image(int bound);
  static FiniteQuotient place_orbit(const Place<Rat>& seed, int bound);
  static FiniteQuotient multiplier(const Mo<Rat>& conj, int bound);
};

/* Coset enumeration output: words generating the kernel (for PlaceOrbit,
   the stabilizer of the seed) and coset representatives, identity first. */
struct SchreierResult {
  std::vector<Word> subgroup;
  std::vector<Word> transversal;
};

SchreierResult finite_index_generators(const GroupSpec& g,
                                       const FiniteQuotient& q);

/* Fixed point from a finite invariant orbit of markings. */
JVertex<Rat> finite_orbit_fixpoint(const GroupSpec& g,
                                   const std::vector<JVertex<Rat>>& orbit);

/* Specialized engines.  abelian_fixpoint needs commuting base images with
   either all of them trivial or one of infinite order; semisimple_fixpoint
   needs the word t to have a semisimple base image of infinite order with
   a north-south place. */
FixpointReport abelian_fixpoint(const GroupSpec& g, int horizon = 32);
FixpointReport semisimple_fixpoint(const GroupSpec& g, const Word& t,
                                   int horizon = 32, int wordlen = 6);

/* Full decision procedure: finite base-image closure, else a semisimple
   word, else the unipotent route; horizons double once before giving up. */
FixpointReport decent_fixpoint(const GroupSpec& g);

}  // namespace jonq
