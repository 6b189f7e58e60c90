#pragma once

#include "exactalg/element.h"

#include <string>
#include <vector>

namespace qsuper {

using exactalg::Element;
using exactalg::PresPtr;
using exactalg::Rational;

// Quantum Weyl superalgebra on n commuting coordinate pairs (x^i, p_i) and
// m odd pairs (theta^a, pi_a), with eigenvalue data q[a][i] (0-based rows =
// odd index, columns = coordinate).  The differential generators dp_i, dpi_a
// come along for free.  Throws on a zero q entry.  truncation caps the total
// p-degree kept by the rewriting kernel; pass nullopt only for computations
// that never meet an exponential prefactor.
PresPtr build_presentation(const std::vector<std::vector<Rational>>& q, int n,
                           std::optional<int> truncation);

// the exterior differential of the complex: d p_i = dp_i, d pi_a = dpi_a,
// everything else killed, extended as a degree-1 derivation with the Koszul
// sign of the factors passed over.  Lowers the reliability watermark by one
// (a missing p-power would have produced a dp-term one degree lower).
Element wz_d(const Element& e);

// Shape of a candidate central cocycle:
//
//   E(x,p) dp_{i_1} ... dp_{i_r} (dpi_1)^{n_1} ... (dpi_m)^{n_m}
//
// where the dp indices are forced_set followed by alpha_set (both ascending,
// disjoint) and E is the central-ordered exponential with per-coordinate
// normal form sum_j mu_i^j/j! (x^i)^j (p_i)^j.  Commuting x^i through the
// dpi-block costs prod_a q_{ai}^{n_a}, and mu_i = 1 - that product is the
// unique choice making E x^i = (prod q^n) x^i E hold, so the prefactor is
// determined by n_a; it is stored explicitly because expansion is the only
// place it turns into an Element.
struct CocycleDescriptor {
    std::vector<int> n_a;             // dpi exponents, one per odd direction
    std::vector<int> forced_set;      // 1-based coordinates with prod q^n != 1
    std::vector<int> alpha_set;       // optional extra dp indices, prod = 1
    std::vector<Rational> prefactor;  // mu_i per coordinate
};

// stable one-line rendering used by the classify front end and tests
std::string descriptor_str(const CocycleDescriptor& d);

// All shapes with sum n_a <= npi_bound whose dp-set (forced plus any subset
// of the unforced coordinates) passes the sign condition
//
//   prod_{i in dp-set} q_{ai} * (-1)^{sum_{b != a} n_b} = 1   for every a,
//
// which is exactly graded centrality against theta^a and pi_a; closedness
// forces every coordinate with prod q^n != 1 into the dp-set.  Output is
// sorted by (sum n, n_a, alpha_set) for deterministic listings.
std::vector<CocycleDescriptor> classify_central_cocycles(
    const std::vector<std::vector<Rational>>& q, int n, int npi_bound);

// expand the shape to an element at the presentation's p-truncation; the
// exponential tail beyond the truncation is recorded in the watermark.
// Throws unsupported_error when a nonzero prefactor meets an untruncated
// presentation.
Element expand_cocycle(const CocycleDescriptor& d, PresPtr pres);

struct VerifyReport {
    bool pass = false;
    // empty on pass; otherwise the first failing check, e.g. "theta 2",
    // "d-closedness", "mixed parity"
    std::string witness;
    Element residual;  // reliable part of the offending difference
};

// check graded centrality against every generator (x, p plain commutators;
// theta, pi, dp signed by the candidate's parity; dpi plain) and df = 0,
// exactly on terms below the reliability watermark.  degree_max bounds the
// p-degree up to which the checks are required to be meaningful; a watermark
// tighter than that is reported as a failure rather than silently passed.
VerifyReport verify_cocycle(const Element& f, PresPtr pres, int degree_max);
VerifyReport verify_cocycle(const CocycleDescriptor& d, PresPtr pres,
                            int degree_max);

// The seven multiplicative generators the two-plane product picture
// suggests for the Klein-group algebra, translated into the momentum
// calculus: dp1dp2, dp3dp4, the two one-plane exponential cocycles, the two
// squared dpi's, and 1.  Not all of them are actually central in the full
// algebra -- the cross-block sign twists break two of them -- so callers
// should judge each entry with verify_cocycle rather than assume.
std::vector<CocycleDescriptor> klein_product_generators();

// instance of one of the four top resolution-degree families for the
// Klein-group algebra: all four dp's present, dpi exponents of fixed parity
// per family, prefactor matching the odd exponents
struct Degree4Family {
    int family = 0;  // 1..4 in the order even/even, odd/even, even/odd, odd/odd
    int m1 = 0, m2 = 0;
    CocycleDescriptor shape;
};

// all instances with every dpi exponent <= bound; requires the Klein-group
// presentation data (n = 4, m = 2, the +-1 block pattern), otherwise throws
// unsupported_error
std::vector<Degree4Family> degree4_cocycles(
    const std::vector<std::vector<Rational>>& q, int n, int bound);

// Desk-scale completeness check for the two-coordinate reflection algebra:
// enumerate every theta/pi-free monomial with total x-degree <= xp_cap,
// total p-degree <= xp_cap, any dp subset and dpi exponent <= dpi_cap, and
// solve the linear system "graded-central against every generator and
// d-closed" (conditions imposed only on result monomials inside the degree
// box, since boundary terms are corrupted by the cut tail).  The nullspace
// is computed per parity sector by exact Gaussian elimination and compared
// against the classifier output at npi_bound expanded into the same box.
struct CompletenessReport {
    int candidates = 0;
    int nullspace_dim = 0;
    int classifier_dim = 0;        // independent truncated classifier vectors
    bool classifier_inside = false;  // every classifier vector solves the system
    bool nothing_outside = false;    // dims match, so the spans coincide
};

CompletenessReport completeness_check(
    const std::vector<std::vector<Rational>>& q, int n, int xp_cap,
    int dpi_cap, int npi_bound);

}  // namespace qsuper
