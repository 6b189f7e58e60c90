#pragma once

#include "resolution/algebra.h"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace gradedmaps {

using exactalg::PresPtr;
using exactalg::Rational;
using resolution::PairElement;

// Multilinear map on the graded space of pair elements.  The grading is the
// suspended one: a homogeneous element of natural degree n sits in degree
// n - 1, and every Koszul sign below is computed in that convention.
struct GMap {
    int arity = 0;
    int deg1 = 0;  // first degree
    int deg2 = 0;  // resolution (form) degree; |f| = deg1 + deg2
    std::function<PairElement(const std::vector<PairElement>&)> eval;
    std::string label;
};

int total_degree(const GMap& f);

// natural degree of a monomial: bidegree totals of its factors
int natural_degree(const exactalg::Monomial& m);

// split into homogeneous components, keyed by suspended degree; zero parts
// are dropped
std::vector<std::pair<int, PairElement>> homogeneous_parts(const PairElement& v);

GMap zero_map(int arity, int d1, int d2, PresPtr pres);
GMap identity_map(PresPtr pres);
GMap constant_map(const PairElement& value, int d1, int d2);

GMap add_maps(const GMap& f, const GMap& g);  // same arity and total degree
GMap scale_map(const Rational& c, const GMap& f);

// insertion composition with the Koszul sign (-1)^{|g|(|v_1|+...+|v_i|)};
// an arity-0 left factor has no slots and composes to zero
GMap compose_circle(const GMap& f, const GMap& g);
GMap gerstenhaber_bracket(const GMap& f, const GMap& g);
GMap hochschild_differential(const GMap& mprime, const GMap& f);

// families (arity -> component) and t-power series of families
using GFam = std::map<int, GMap>;
using Series = std::vector<GFam>;

GFam fam_of(const GMap& f);
GFam fam_add(const GFam& a, const GFam& b);
GFam fam_scale(const Rational& c, const GFam& a);
GFam fam_bracket(const GFam& a, const GFam& b);
PairElement fam_eval(const GFam& a, const std::vector<PairElement>& in);

// formal sums of tensor words; canonical form keeps every slot a single
// monomial of coefficient one in a single component
struct TensorTerm {
    Rational c;
    std::vector<PairElement> word;
};
struct Tensor {
    std::vector<TensorTerm> terms;
};

Tensor tensor_zero();
Tensor tensor_of_word(const Rational& c, const std::vector<PairElement>& word);
Tensor tensor_add(const Tensor& a, const Tensor& b);
Tensor tensor_scale(const Rational& c, const Tensor& a);
bool tensor_equal(const Tensor& a, const Tensor& b);
bool tensor_is_zero(const Tensor& a);

// linear operator on tensors described by its action on canonical words
using WordOp = std::function<Tensor(const std::vector<PairElement>&)>;
Tensor apply_word_op(const WordOp& op, const Tensor& t);

// unique coderivation extending f: inserts f into every window of the word
// with the sign (-1)^{|f|(|v_1|+...+|v_i|)}; words shorter than the arity
// map to zero, arity-0 maps insert at every gap
WordOp lift_coderivation(const GMap& f);

// sum of the length-1 words of a tensor
PairElement corestriction(const Tensor& t, PresPtr pres);

struct McReport {
    bool pass = true;
    std::vector<std::string> lines;
};

// residual sum_{i+j=k} [m^(i), m^(j)] for every k <= t_order, evaluated on
// every tuple from `basis` (element, filtration degree) whose degrees sum
// to at most degree_max, at arities <= arity_max
McReport check_mc(const Series& s, int t_order, int arity_max, int degree_max,
                  const std::vector<std::pair<PairElement, int>>& basis);

// truncated exponential adjoint: output order k collects
// sum_{n+i=k} (1/n!) ad_f^n (m^(i)); requires |f| = 0
Series apply_gauge(const GMap& f, const Series& s, int t_order);

}  // namespace gradedmaps
