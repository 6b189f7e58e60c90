#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace exactalg {

using Rational = boost::multiprecision::cpp_rational;

// Generator kinds in canonical PBW order.  Every stored monomial keeps its
// factors sorted by (kind, index); all rewriting moves factors toward this
// order.
enum class Kind : int { X = 0, Theta, P, Pi, DP, DPi };

inline constexpr int kKindCount = 6;

const char* kind_name(Kind k);
std::optional<Kind> kind_from_name(const std::string& s);

// theta, pi, dp square to zero; x, p, dpi admit arbitrary powers.
bool kind_nilpotent(Kind k);

// (first degree, resolution degree) of a single generator.
// x,p -> (0,0); theta -> (1,0); pi -> (-1,0); dp -> (0,1); dpi -> (-1,1).
std::pair<int, int> kind_bidegree(Kind k);

// Grassmann parity = total degree mod 2 (theta, pi, dp odd; x, p, dpi even).
bool kind_odd(Kind k);

struct Factor {
    Kind kind;
    int index;  // 1-based
    int power;
};

bool operator==(const Factor& a, const Factor& b);

using Monomial = std::vector<Factor>;  // strictly increasing (kind, index)

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

int p_degree(const Monomial& m);
int x_degree(const Monomial& m);
std::pair<int, int> bidegree(const Monomial& m);  // sum over factors
int total_degree(const Monomial& m);              // first + resolution
bool odd_parity(const Monomial& m);

struct Presentation {
    int n = 0;  // commuting pairs x^i, p_i (and their dp_i), i = 1..n
    int m = 0;  // odd pairs theta^a, pi_a (and dpi_a), a = 1..m
    // eigenvalue data q[a-1][i-1], all nonzero
    std::vector<std::vector<Rational>> q;
    // x^i p_j - p_j x^i = delta^i_j active (quantum Weyl superalgebra);
    // off = x,p commute as symbols and interaction lives in the bullet product
    bool weyl = false;
    // antisymmetric n x n matrix for the Moyal-type bullet term; unset or
    // zero = plain polynomial bullet
    std::optional<std::vector<std::vector<Rational>>> weyl_form;
    // max total p-degree retained; terms beyond it are dropped and the
    // element watermark records the loss
    std::optional<int> truncation;
};

using PresPtr = std::shared_ptr<const Presentation>;

// validates and freezes
PresPtr make_presentation(Presentation p);

struct algebra_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct presentation_error : algebra_error {
    using algebra_error::algebra_error;
};
struct truncation_error : algebra_error {
    using algebra_error::algebra_error;
};
struct unsupported_error : algebra_error {
    using algebra_error::algebra_error;
};

struct Element {
    PresPtr pres;  // null for plain scalars; unified on binary ops
    std::map<Monomial, Rational, MonomialLess> terms;
    // Terms of p-degree >= reliable_below may be missing (dropped by the
    // truncation at some point of the computation); unset = exact.
    std::optional<int> reliable_below;
};

// watermark helpers: unset = +infinity
std::optional<int> wm_min(std::optional<int> a, std::optional<int> b);
std::optional<int> wm_shift(std::optional<int> a, int delta);

Element make_scalar(const Rational& c, PresPtr pres = nullptr);
Element make_generator(PresPtr pres, Kind k, int index, int power = 1);

// PBW normal form of a single word under the presentation's relations
Element normal_form(PresPtr pres, const std::vector<Factor>& word,
                    const Rational& coeff = Rational(1));

Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);
Element scale(const Rational& c, const Element& a);
Element mul(const Element& a, const Element& b);

// d/dx^index or d/dp_index; other kinds are rejected
Element partial_derivative(Kind k, int index, const Element& a);

// diagonal automorphism with one eigenvalue per coordinate:
// x^i -> q_i^{-1} x^i, p_i -> q_i p_i, dp_i -> q_i dp_i, odd block fixed
Element apply_automorphism(const std::vector<Rational>& eigen,
                           const Element& a);

bool is_zero(const Element& a);
bool equal(const Element& a, const Element& b);
Rational coefficient(const Element& a, const Monomial& m);

// throws truncation_error unless every term of p-degree < degree_needed is
// known to be present
void require_reliable(const Element& a, int degree_needed);

// max x-degree over terms (0 for empty); used by product watermark rules
int max_x_degree(const Element& a);

}  // namespace exactalg
