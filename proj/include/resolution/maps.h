#pragma once

#include "gradedmaps/maps.h"
#include "resolution/algebra.h"

#include <string>
#include <vector>

namespace resolution {

// Post-composition with the contracting homotopy / with the projection to
// momentum-free values.  Together with the commutator [d, -] these give a
// deformation retract on spaces of multilinear maps.
gradedmaps::GMap lifted_homotopy(const gradedmaps::GMap& f);
gradedmaps::GMap lifted_projection(const gradedmaps::GMap& f);

// The 2-form gamma solving
//   twisted(gamma) = gamma,  gamma . a = twisted(a) . gamma,  d gamma = 0.
// Needs exactly two twist eigenvalues away from 1, mutually inverse; an
// identity twist degenerates to the constant central form.  The exponential
// series is truncated by the presentation's p-degree bound and the result
// carries the matching reliability watermark.
Element solve_gamma(const ResolutionAlgebra& alg);

// Degree-1 differential on the extension: D(a, b) = (b . gamma, 0).
gradedmaps::GMap build_D(const ResolutionAlgebra& alg, const Element& gamma);

struct SDRData {
    gradedmaps::GMap d, h, i, p;
};

SDRData standard_sdr(const ResolutionAlgebra& alg);

struct SdrReport {
    bool pass = false;
    std::vector<std::string> lines;
};

// Evaluates hd + dh = 1 - ip, h^2 = 0, d^2 = 0, pi = 1, ph = 0, hi = 0 on
// all slot monomials of polynomial degree <= degree_max.
SdrReport check_sdr(const SDRData& s, const ResolutionAlgebra& alg,
                    int degree_max);

}  // namespace resolution
