#pragma once

#include "jonq/poly.hpp"

namespace jonq {

/* Monic irreducible factors with multiplicities, sorted in the deterministic
   polynomial order.  The unit content is dropped.  Splitting is randomized
   internally but seeded from the input, so results are reproducible. */
std::vector<std::pair<Poly<Fp>, int>> factor(const Poly<Fp>& f);
std::vector<std::pair<Poly<Rat>, int>> factor(const Poly<Rat>& f);

bool is_irreducible(const Poly<Fp>& f);
bool is_irreducible(const Poly<Rat>& f);

std::vector<Fp> poly_roots(const Poly<Fp>& f);
std::vector<Rat> poly_roots(const Poly<Rat>& f);

/* square root mod an odd prime, empty if a is a non-residue */
bool sqrt_mod(uint64_t a, uint64_t p, uint64_t* out);

}  // namespace jonq
