#pragma once

#include "exactalg/element.h"

#include <vector>

namespace exactalg {

// One summand c(x,...) * u_1^{e_1} ... u_r^{e_r} of a polynomial in ordered
// simplex variables 0 < u_1 < ... < u_r < 1 with Element coefficients.
struct SimplexTerm {
    std::vector<int> exps;
    Element coeff;
};

// Exact moment: integral of u_1^{a_1}...u_r^{a_r} over the ordered simplex,
// equal to prod_j 1/(a_1+...+a_j+j).
Rational simplex_moment(const std::vector<int>& exps);

// Iterated integral of the whole polynomial; all terms must have the same
// rank.  Empty variable list integrates to the coefficient itself.
Element simplex_integrate(const std::vector<SimplexTerm>& f);

}  // namespace exactalg
