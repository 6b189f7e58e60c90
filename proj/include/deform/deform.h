#pragma once

#include "gradedmaps/maps.h"
#include "resolution/maps.h"

#include <map>
#include <vector>

namespace deform {

using exactalg::Element;
using gradedmaps::GFam;
using gradedmaps::GMap;
using gradedmaps::Series;
using resolution::PairElement;
using resolution::ResolutionAlgebra;

// A deformation seed is a family of graded maps keyed by resolution degree
// (the amount by which each component raises the form degree).  The two
// seeds used throughout this library both sit in pure degree two: a central
// constant 2-form (arity 0) and the momentum-form differential (arity 1).
using SeedFamily = std::map<int, GFam>;

// seed made of a single central constant form; the resolution degree is the
// form degree of `form`
SeedFamily constant_form_seed(const ResolutionAlgebra& alg, const Element& form);

// seed made of the degree-(-1,2) differential attached to the solved
// momentum 2-form of the algebra
SeedFamily differential_seed(const ResolutionAlgebra& alg);

// the background structure as graded maps: the product with its suspension
// sign at arity 2 and the boundary at arity 1
GMap product_map(const ResolutionAlgebra& alg);
GMap boundary_map(const ResolutionAlgebra& alg);

// First Taylor coefficient of the deformation series,
//   mu'(0) = sum_m (-[m', -] h~)^m lambda_m,
// where h~ is post-composition with the contracting homotopy.  Before
// assembling the sum the seed is probed on a small corpus of pair tuples:
// it has to commute with the background structure (boundary and product)
// and with itself, otherwise an exactalg::algebra_error carrying the first
// nonzero residual is thrown.
GFam first_order(const SeedFamily& seed, const ResolutionAlgebra& alg);

// Second Taylor coefficient mu''(0) as a double sum over operator chains.
// `Derived` keeps the full inner sum (and equals twice the order-2 family
// of solve_master); `AsDisplayed` starts the inner sum one step later and
// differs from Derived by the bracket of mu'(0) with the homotopy leg of
// the seed.  The two agree after restriction on tuples of low degree.
enum class SecondOrderForm { Derived, AsDisplayed };
GFam second_order(const SeedFamily& seed, const ResolutionAlgebra& alg,
                  SecondOrderForm form = SecondOrderForm::Derived);

// Full deformation series by the exact order-by-order recursion in the
// deformation parameter.  Entry k of the result holds the Taylor
// coefficient m^(k); entry 0 is the background (boundary + product).
// Components of arity above arity_max are pruned from the returned series
// only, never from the recursion itself.
Series solve_master(const SeedFamily& seed, const ResolutionAlgebra& alg,
                    int t_order, int arity_max);

// Restriction of a deformation series to the zero-momentum subalgebra.
// Every component is first checked to commute with the boundary on all
// tuples drawn from `w_basis` (x-polynomial pairs) with total degree at
// most degree_max; a nonzero residual raises an exactalg::algebra_error
// mentioning the restriction.  The restricted maps embed their inputs,
// evaluate, and project the value back to zero momentum.
Series restrict_to_W(const Series& s, const ResolutionAlgebra& alg,
                     const std::vector<PairElement>& w_basis, int degree_max);

// Bilinear integral cochain on x-polynomials for a twist that moves exactly
// two mutually inverse eigendirections:
//   phi(a,b) = -eps^{ab} int_{0<u<w<1} (d_a a)(x scaled by w)
//                                      (d_b b)(x scaled by u) du dw,
// the scale on direction i interpolating from 1 to the twisted value.
Element closed_phi(const ResolutionAlgebra& alg, const Element& a,
                   const Element& b);

// Weyl-algebra counterpart of closed_phi: the operator exponential of the
// displayed shift + pairing quadratic form, cut off at the finite order
// deg(a) + deg(b), applied to a and b and integrated over the ordered
// simplex.  With `pairing_exponentials` off only the shift part of the
// exponent is kept, which reduces the cochain to closed_phi when the
// pairing matrix is normalized so that the prefactor becomes eps.
Element closed_Phi(const ResolutionAlgebra& alg, const Element& a,
                   const Element& b, bool pairing_exponentials = true);

// Closed form of the arity-3 structure map on zero-momentum pairs:
//   ( b1 * phi(a2, a3),  b1 * phi(a2, b3) - b1 * phi(b2, ta3) )
// with phi replaced by the Weyl cochain when the algebra multiplies with a
// pairing matrix.
PairElement m3_closed_form(const ResolutionAlgebra& alg, const PairElement& a1,
                           const PairElement& a2, const PairElement& a3);

// The same map computed as the homotopy composite
//   (-1)^{form degree of a2 - 1} h( h(D a1) . a2 ) . a3
// projected to zero momentum (the composite only lands on the retract after
// the contractible directions are projected away).
PairElement m3_composite(const ResolutionAlgebra& alg, const Element& gamma,
                         const PairElement& a1, const PairElement& a2,
                         const PairElement& a3);

}  // namespace deform
