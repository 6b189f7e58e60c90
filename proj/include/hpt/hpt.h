#pragma once

#include "deform/deform.h"
#include "gradedmaps/maps.h"
#include "resolution/maps.h"

#include <utility>
#include <vector>

namespace hpt {

using gradedmaps::Tensor;
using gradedmaps::WordOp;
using resolution::PairElement;
using resolution::ResolutionAlgebra;
using resolution::SDRData;

// a pure tensor written out by its factors; the empty word is the unit of
// the tensor coalgebra
using TensorWord = std::vector<PairElement>;

// deconcatenation coproduct: every way of cutting the word in two, the two
// cuts against the unit included (a length-n word has n + 1 of them)
std::vector<std::pair<TensorWord, TensorWord>> coproduct(const TensorWord& w);

// slotwise extension of the projection / inclusion; both are even, so no
// signs appear
WordOp tensor_projection(const SDRData& s);
WordOp tensor_inclusion(const SDRData& s);

// homotopy on words: sum over slots of 1 x ... x h x (ip) x ... x (ip),
// signed by moving the odd h past the factors it skips
WordOp tensor_homotopy(const SDRData& s);

// Transfer of the deformed structure onto the momentum-free part by the
// perturbation lemma.  Entry k of the result holds, for every arity up to
// arity_max, the length-one part of
//     p^ (1 + m^t h^)^{-1} m^t i^    with    m^t = m'^ + t * (seed)^,
// collected at t-power k, where f^ denotes the coderivation (respectively
// slotwise) extension of f to words.  The alternating series belongs to the
// homotopy orientation hd + dh = 1 - ip used throughout; a seed of even
// form degree leaves an even number of homotopy steps in every term that
// survives the projection, so for such seeds the values agree with the
// unsigned sum.  The series is materialized as a bounded sum: every
// homotopy application consumes one unit of form degree and the seed
// supplies at most its deg2 per power of t, so the depth is capped by
// t_order * max(deg2).  A series still alive past that cap raises an
// exactalg::algebra_error naming the filtration bound.
gradedmaps::Series bpl_transfer(const ResolutionAlgebra& alg, const SDRData& s,
                                const deform::SeedFamily& seed, int t_order,
                                int arity_max);

}  // namespace hpt
