#include "hpt/hpt.h"

#include <string>
#include <utility>

namespace hpt {

using exactalg::Rational;
using gradedmaps::apply_word_op;
using gradedmaps::corestriction;
using gradedmaps::GMap;
using gradedmaps::homogeneous_parts;
using gradedmaps::lift_coderivation;
using gradedmaps::tensor_add;
using gradedmaps::tensor_is_zero;
using gradedmaps::tensor_of_word;

std::vector<std::pair<TensorWord, TensorWord>> coproduct(const TensorWord& w) {
    std::vector<std::pair<TensorWord, TensorWord>> out;
    out.reserve(w.size() + 1);
    for (size_t cut = 0; cut <= w.size(); ++cut)
        out.emplace_back(TensorWord(w.begin(), w.begin() + cut),
                         TensorWord(w.begin() + cut, w.end()));
    return out;
}

namespace {

WordOp slotwise(const GMap& f) {
    const GMap fc = f;
    return [fc](const std::vector<PairElement>& w) -> Tensor {
        std::vector<PairElement> out;
        out.reserve(w.size());
        for (const auto& v : w) out.push_back(fc.eval({v}));
        return tensor_of_word(1, out);
    };
}

}  // namespace

WordOp tensor_projection(const SDRData& s) { return slotwise(s.p); }

WordOp tensor_inclusion(const SDRData& s) { return slotwise(s.i); }

WordOp tensor_homotopy(const SDRData& s) {
    const GMap h = s.h;
    const GMap i = s.i;
    const GMap p = s.p;
    return [h, i, p](const std::vector<PairElement>& w) -> Tensor {
        Tensor out;
        // canonicalize first so degree bookkeeping sees homogeneous slots
        Tensor canon = tensor_of_word(1, w);
        for (const auto& term : canon.terms) {
            const auto& word = term.word;
            int lead = 0;  // suspended degree of the slots already passed
            for (size_t pos = 0; pos < word.size(); ++pos) {
                std::vector<PairElement> nw;
                nw.reserve(word.size());
                nw.insert(nw.end(), word.begin(), word.begin() + pos);
                nw.push_back(h.eval({word[pos]}));
                for (size_t j = pos + 1; j < word.size(); ++j)
                    nw.push_back(i.eval({p.eval({word[j]})}));
                out = tensor_add(out,
                                 tensor_of_word(lead % 2 ? -term.c : term.c, nw));
                auto parts = homogeneous_parts(word[pos]);
                lead += parts.empty() ? 0 : parts.front().first;
            }
        }
        return out;
    };
}

gradedmaps::Series bpl_transfer(const ResolutionAlgebra& alg, const SDRData& s,
                                const deform::SeedFamily& seed, int t_order,
                                int arity_max) {
    if (t_order < 0 || arity_max < 1)
        throw exactalg::unsupported_error(
            "transfer needs a nonnegative order and at least arity one");
    const auto pres = alg.pres;
    const WordOp mhat = lift_coderivation(deform::product_map(alg));
    std::vector<WordOp> lifts;
    int d2max = 0;
    for (const auto& [m, fam] : seed)
        for (const auto& [r, g] : fam) {
            lifts.push_back(lift_coderivation(g));
            if (g.deg2 > d2max) d2max = g.deg2;
        }
    const WordOp lhat = [lifts](const std::vector<PairElement>& w) -> Tensor {
        Tensor out;
        for (const auto& op : lifts) out = tensor_add(out, op(w));
        return out;
    };
    const WordOp hhat = tensor_homotopy(s);
    const WordOp phat = tensor_projection(s);
    const GMap inc = s.i;

    gradedmaps::Series out(t_order + 1);
    for (int k = 0; k <= t_order; ++k) {
        for (int r = 1; r <= arity_max; ++r) {
            GMap g;
            g.arity = r;
            g.deg1 = 1;
            g.deg2 = 0;
            g.label =
                "transfer[" + std::to_string(k) + "]_" + std::to_string(r);
            g.eval = [pres, inc, mhat, lhat, hhat, phat, k, d2max](
                         const std::vector<PairElement>& in) -> PairElement {
                std::vector<PairElement> emb;
                emb.reserve(in.size());
                for (const auto& v : in) emb.push_back(inc.eval({v}));
                Tensor start = tensor_of_word(1, emb);
                // slot c of the state carries the words that already spent c
                // powers of the deformation parameter
                std::vector<Tensor> tg(k + 1);
                tg[0] = apply_word_op(mhat, start);
                if (k >= 1) tg[1] = apply_word_op(lhat, start);
                PairElement acc =
                    corestriction(apply_word_op(phat, tg[k]), pres);
                const int cap = k * d2max;
                int depth = 0;
                for (;;) {
                    std::vector<Tensor> hs(k + 1);
                    bool any = false;
                    for (int c = 0; c <= k; ++c) {
                        hs[c] = apply_word_op(hhat, tg[c]);
                        any = any || !tensor_is_zero(hs[c]);
                    }
                    if (!any) break;
                    if (++depth > cap)
                        throw exactalg::algebra_error(
                            "perturbation series still alive past the "
                            "filtration bound " +
                            std::to_string(cap) +
                            ": the seed form degrees do not control the "
                            "homotopy depth");
                    for (int c = k; c >= 0; --c) {
                        Tensor nx = apply_word_op(mhat, hs[c]);
                        if (c >= 1)
                            nx = tensor_add(nx, apply_word_op(lhat, hs[c - 1]));
                        // the geometric series alternates: with the homotopy
                        // oriented by hd + dh = 1 - ip the perturbation
                        // series is sum of (-(m^t h)^)^n; seeds of even form
                        // degree leave an even number of homotopy steps in
                        // every term that survives the final projection, so
                        // those values coincide with the unsigned sum
                        tg[c] = gradedmaps::tensor_scale(-1, nx);
                    }
                    acc = resolution::p_add(
                        acc, corestriction(apply_word_op(phat, tg[k]), pres));
                }
                return acc;
            };
            out[k][r] = g;
        }
    }
    return out;
}

}  // namespace hpt
