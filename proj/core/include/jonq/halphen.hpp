#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jonq/scalar.hpp"

/* Integer lattice model of commuting parabolic isometries fixing an
   isotropic class, with the closed-form quadratic degree along exponent
   vectors and the literal push-forward evaluation as an independent
   oracle. */

namespace jonq {

using LatVec = std::vector<long>;
using LatMat = std::vector<LatVec>;

/* gram is symmetric of signature (1, r-1); d0 is isotropic and fixed by
   every auto; ample has positive square and meets d0 positively; the
   autos are unipotent lattice isometries acting as the identity on the
   quotient of the orthogonal complement of d0 by d0, pairwise
   commuting. */
struct HalphenSystem {
  LatMat gram;
  LatVec d0;
  LatVec ample;
  std::vector<LatMat> autos;
};

/* One line per violated condition; an empty report validates the
   system. */
std::vector<std::string> check_parabolic_system(const HalphenSystem& sys);

/* r[i] is the push-forward increment of the ample class under auto i,
   orthogonal to d0; t[i][j] is the d0 coefficient picked up by r[j]
   under auto i. */
struct HalphenCoefficients {
  std::vector<LatVec> r;
  std::vector<std::vector<Rat>> t;
};

HalphenCoefficients halphen_coefficients(const HalphenSystem& sys);

/* Degree of the product of the autos raised to the given exponents
   against the ample class: the quadratic closed form, and the literal
   iterated matrix evaluation. */
long closed_form_degree(const HalphenSystem& sys, const std::vector<long>& n);
long push_forward_degree(const HalphenSystem& sys, const std::vector<long>& n);

/* Order of the map induced on the quotient lattice when f fixes d0, of f
   itself otherwise; nullopt when the iteration escapes instead of
   closing. */
std::optional<long> finite_order_on_quotient(const LatMat& f,
                                             const HalphenSystem& sys);

/* Unipotent isometry x -> x + (x.v) d0 - (x.d0) v - (v.v)/2 (x.d0) d0 for
   v orthogonal to d0 with even square; fixes d0 and acts as the identity
   on the quotient. */
LatMat eichler_transvection(const LatMat& gram, const LatVec& d0,
                            const LatVec& v);

}  // namespace jonq
