#pragma once

#include "exactalg/element.h"

#include <optional>
#include <vector>

namespace resolution {

using exactalg::Element;
using exactalg::Kind;
using exactalg::PresPtr;
using exactalg::Rational;

// Elements of the two-term extension are pairs (a, b) standing for
// a + b*extension-generator; the generator sits in degree 1, squares to
// zero, and conjugates coefficients by the twist.
struct PairElement {
    Element a;
    Element b;
};

enum class BulletKind { Polynomial, Vasiliev };

struct ResolutionAlgebra {
    PresPtr pres;  // commutative symbols: weyl off; n coordinates, m = 0
    BulletKind kind = BulletKind::Polynomial;
    // eigenvalues of the twist automorphism, one per coordinate; empty =
    // no extension summand in play
    std::vector<Rational> twist;
    // Vasiliev kind reads the antisymmetric lambda matrix from
    // pres->weyl_form
};

ResolutionAlgebra make_resolution(int n, BulletKind kind,
                                  std::vector<Rational> twist,
                                  std::optional<int> truncation,
                                  std::optional<std::vector<std::vector<Rational>>>
                                      lambda = std::nullopt);

PairElement pair_zero(const ResolutionAlgebra& alg);
PairElement pair_of(Element a, Element b);
PairElement p_add(const PairElement& x, const PairElement& y);
PairElement p_sub(const PairElement& x, const PairElement& y);
PairElement p_scale(const Rational& c, const PairElement& x);
bool p_is_zero(const PairElement& x);
bool p_equal(const PairElement& x, const PairElement& y);
std::string p_to_string(const PairElement& x);  // "a-sexpr|b-sexpr"

// twist applied to a plain coefficient: x -> q^{-1} x, p -> q p, dp -> q dp
Element twisted(const ResolutionAlgebra& alg, const Element& e);

// Moyal-type product on coefficients:
//   a exp( <-d/dp_i -> d/dx^i  +  lambda^{ij} <-d/dx^i -> d/dx^j ) b
// (second group only for the Vasiliev kind), extended to pairs by
//   (a,b) * (a',b') = (a a', a b' + b 'a')   [twist on the crossed factor]
Element bullet_coeff(const ResolutionAlgebra& alg, const Element& a,
                     const Element& b);
PairElement bullet_product(const ResolutionAlgebra& alg, const PairElement& x,
                           const PairElement& y);

// d(a,b) = (da, -db) with da = sum_j dp_j ^ (d a / d p_j)
PairElement de_rham_d(const PairElement& x);

// standard contracting homotopy: on x^alpha p^beta dp_S with l = |S| > 0,
//   h = 1/(l+|beta|) sum_k (-1)^{k-1} p_{S_k} x^alpha p^beta dp_{S minus k};
// zero on 0-forms; pairs get (ha, -hb)
PairElement homotopy_h(const PairElement& x);

// p: set momenta and their differentials to zero (x-part survives);
// i: canonical embedding of that subspace
PairElement project_p(const PairElement& x);
PairElement include_i(const PairElement& w);

// form degree of a homogeneous element (number of dp factors); error if
// mixed.  The pair slot contributes +1 through pair_form_degrees below.
std::optional<int> uniform_form_degree(const Element& e);

}  // namespace resolution
