#include "exactalg/simplex.h"

namespace exactalg {

Rational simplex_moment(const std::vector<int>& exps) {
    Rational r = 1;
    int acc = 0;
    for (size_t j = 0; j < exps.size(); ++j) {
        if (exps[j] < 0) throw unsupported_error("negative simplex exponent");
        acc += exps[j];
        r /= Rational(acc + static_cast<int>(j) + 1);
    }
    return r;
}

Element simplex_integrate(const std::vector<SimplexTerm>& f) {
    Element out;
    for (const auto& term : f) {
        if (!f.empty() && term.exps.size() != f.front().exps.size())
            throw unsupported_error("mixed simplex ranks");
        out = add(out, scale(simplex_moment(term.exps), term.coeff));
    }
    return out;
}

}  // namespace exactalg
