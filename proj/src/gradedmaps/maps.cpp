#include "gradedmaps/maps.h"

#include "exactalg/sexpr.h"

#include <algorithm>
#include <sstream>

namespace gradedmaps {

using exactalg::Element;
using exactalg::Monomial;

int total_degree(const GMap& f) { return f.deg1 + f.deg2; }

int natural_degree(const Monomial& m) {
    int d = 0;
    for (const auto& f : m) {
        auto [d1, d2] = exactalg::kind_bidegree(f.kind);
        d += (d1 + d2) * f.power;
    }
    return d;
}

std::vector<std::pair<int, PairElement>> homogeneous_parts(const PairElement& v) {
    std::map<int, PairElement> acc;
    auto slot = [&](const Element& e, bool second) {
        for (const auto& [m, c] : e.terms) {
            int deg = natural_degree(m) + (second ? 1 : 0) - 1;
            auto it = acc.find(deg);
            if (it == acc.end()) {
                PairElement z{exactalg::make_scalar(0, e.pres),
                              exactalg::make_scalar(0, e.pres)};
                it = acc.emplace(deg, std::move(z)).first;
            }
            Element& tgt = second ? it->second.b : it->second.a;
            tgt.pres = e.pres;
            tgt.terms.emplace(m, c);
        }
    };
    slot(v.a, false);
    slot(v.b, true);
    std::vector<std::pair<int, PairElement>> out;
    for (auto& [d, p] : acc) {
        p.a.reliable_below = v.a.reliable_below;
        p.b.reliable_below = v.b.reliable_below;
        out.emplace_back(d, std::move(p));
    }
    return out;
}

namespace {

PairElement pair_zero_like(const std::vector<PairElement>& in) {
    PresPtr pres = nullptr;
    for (const auto& v : in) {
        if (v.a.pres) pres = v.a.pres;
        if (v.b.pres) pres = v.b.pres;
        if (pres) break;
    }
    return {exactalg::make_scalar(0, pres), exactalg::make_scalar(0, pres)};
}

// run fn over every homogeneous expansion of the tuple, with degrees
void expand_tuple(
    const std::vector<PairElement>& in,
    const std::function<void(const std::vector<PairElement>&,
                             const std::vector<int>&)>& fn) {
    std::vector<std::vector<std::pair<int, PairElement>>> parts;
    parts.reserve(in.size());
    for (const auto& v : in) {
        parts.push_back(homogeneous_parts(v));
        if (parts.back().empty()) return;  // a zero factor kills the tuple
    }
    std::vector<size_t> idx(in.size(), 0);
    std::vector<PairElement> tuple(in.size());
    std::vector<int> degs(in.size());
    for (;;) {
        for (size_t i = 0; i < in.size(); ++i) {
            degs[i] = parts[i][idx[i]].first;
            tuple[i] = parts[i][idx[i]].second;
        }
        fn(tuple, degs);
        size_t i = 0;
        for (; i < in.size(); ++i) {
            if (++idx[i] < parts[i].size()) break;
            idx[i] = 0;
        }
        if (i == in.size()) break;
    }
}

}  // namespace

GMap zero_map(int arity, int d1, int d2, PresPtr pres) {
    GMap z;
    z.arity = arity;
    z.deg1 = d1;
    z.deg2 = d2;
    z.label = "0";
    z.eval = [pres](const std::vector<PairElement>&) -> PairElement {
        return {exactalg::make_scalar(0, pres), exactalg::make_scalar(0, pres)};
    };
    return z;
}

GMap identity_map(PresPtr pres) {
    GMap f;
    f.arity = 1;
    f.label = "id";
    f.eval = [pres](const std::vector<PairElement>& in) { return in[0]; };
    return f;
}

GMap constant_map(const PairElement& value, int d1, int d2) {
    GMap f;
    f.arity = 0;
    f.deg1 = d1;
    f.deg2 = d2;
    f.label = "const";
    f.eval = [value](const std::vector<PairElement>&) { return value; };
    return f;
}

GMap add_maps(const GMap& f, const GMap& g) {
    if (f.arity != g.arity)
        throw exactalg::algebra_error("add_maps: arity mismatch");
    if (total_degree(f) != total_degree(g))
        throw exactalg::algebra_error("add_maps: degree mismatch");
    GMap r = f;
    r.label = f.label + "+" + g.label;
    auto fe = f.eval, ge = g.eval;
    r.eval = [fe, ge](const std::vector<PairElement>& in) {
        return resolution::p_add(fe(in), ge(in));
    };
    return r;
}

GMap scale_map(const Rational& c, const GMap& f) {
    GMap r = f;
    auto fe = f.eval;
    r.eval = [c, fe](const std::vector<PairElement>& in) {
        return resolution::p_scale(c, fe(in));
    };
    return r;
}

GMap compose_circle(const GMap& f, const GMap& g) {
    GMap r;
    r.arity = std::max(f.arity + g.arity - 1, 0);
    r.deg1 = f.deg1 + g.deg1;
    r.deg2 = f.deg2 + g.deg2;
    r.label = f.label + "o" + g.label;
    if (f.arity == 0) {  // nothing to insert into
        r.eval = [](const std::vector<PairElement>& in) {
            return pair_zero_like(in);
        };
        return r;
    }
    const GMap fc = f, gc = g;
    const int gdeg = total_degree(g);
    r.eval = [fc, gc, gdeg](const std::vector<PairElement>& in) -> PairElement {
        PairElement acc = pair_zero_like(in);
        expand_tuple(in, [&](const std::vector<PairElement>& tuple,
                             const std::vector<int>& degs) {
            for (int i = 0; i + gc.arity <= static_cast<int>(tuple.size());
                 ++i) {
                int sg = 0;
                for (int j = 0; j < i; ++j) sg += degs[j];
                std::vector<PairElement> gin(tuple.begin() + i,
                                             tuple.begin() + i + gc.arity);
                PairElement mid = gc.eval(gin);
                if (resolution::p_is_zero(mid)) continue;
                std::vector<PairElement> fin;
                fin.reserve(fc.arity);
                fin.insert(fin.end(), tuple.begin(), tuple.begin() + i);
                fin.push_back(std::move(mid));
                fin.insert(fin.end(), tuple.begin() + i + gc.arity,
                           tuple.end());
                PairElement val = fc.eval(fin);
                if ((gdeg * sg) % 2) val = resolution::p_scale(-1, val);
                acc = resolution::p_add(acc, val);
            }
        });
        return acc;
    };
    return r;
}

GMap gerstenhaber_bracket(const GMap& f, const GMap& g) {
    GMap fg = compose_circle(f, g);
    GMap gf = compose_circle(g, f);
    Rational s = (total_degree(f) * total_degree(g)) % 2 ? 1 : -1;
    GMap r = add_maps(fg, scale_map(s, gf));
    r.label = "[" + f.label + "," + g.label + "]";
    return r;
}

GMap hochschild_differential(const GMap& mprime, const GMap& f) {
    return gerstenhaber_bracket(mprime, f);
}

GFam fam_of(const GMap& f) { return GFam{{f.arity, f}}; }

GFam fam_add(const GFam& a, const GFam& b) {
    GFam out = a;
    for (const auto& [r, g] : b) {
        auto it = out.find(r);
        if (it == out.end())
            out.emplace(r, g);
        else
            it->second = add_maps(it->second, g);
    }
    return out;
}

GFam fam_scale(const Rational& c, const GFam& a) {
    GFam out;
    for (const auto& [r, g] : a) out.emplace(r, scale_map(c, g));
    return out;
}

GFam fam_bracket(const GFam& a, const GFam& b) {
    GFam out;
    for (const auto& [ra, fa] : a)
        for (const auto& [rb, fb] : b) {
            GMap br = gerstenhaber_bracket(fa, fb);
            auto it = out.find(br.arity);
            if (it == out.end())
                out.emplace(br.arity, br);
            else
                it->second = add_maps(it->second, br);
        }
    return out;
}

PairElement fam_eval(const GFam& a, const std::vector<PairElement>& in) {
    auto it = a.find(static_cast<int>(in.size()));
    if (it == a.end()) {
        PairElement z = pair_zero_like(in);
        return z;
    }
    return it->second.eval(in);
}

Tensor tensor_zero() { return {}; }

namespace {

std::string word_key(const std::vector<PairElement>& w) {
    std::string k;
    for (const auto& s : w) {
        k += resolution::p_to_string(s);
        k += ";";
    }
    return k;
}

void merge_term(std::map<std::string, TensorTerm>& acc, const Rational& c,
                const std::vector<PairElement>& w) {
    if (c == 0) return;
    std::string k = word_key(w);
    auto it = acc.find(k);
    if (it == acc.end())
        acc.emplace(std::move(k), TensorTerm{c, w});
    else {
        it->second.c += c;
        if (it->second.c == 0) acc.erase(it);
    }
}

Tensor from_map(std::map<std::string, TensorTerm>&& acc) {
    Tensor t;
    for (auto& [k, term] : acc) t.terms.push_back(std::move(term));
    return t;
}

// expand a word of general elements into canonical words of unit monomials
void expand_word(const Rational& c, const std::vector<PairElement>& w,
                 std::map<std::string, TensorTerm>& acc) {
    // per-slot monomial pieces with their coefficients
    std::vector<std::vector<std::pair<Rational, PairElement>>> pieces;
    pieces.reserve(w.size());
    for (const auto& s : w) {
        std::vector<std::pair<Rational, PairElement>> ps;
        for (const auto& [m, cc] : s.a.terms) {
            Element e;
            e.pres = s.a.pres;
            e.terms.emplace(m, 1);
            ps.emplace_back(cc, PairElement{e, exactalg::make_scalar(0, s.a.pres)});
        }
        for (const auto& [m, cc] : s.b.terms) {
            Element e;
            e.pres = s.b.pres;
            e.terms.emplace(m, 1);
            ps.emplace_back(cc, PairElement{exactalg::make_scalar(0, s.b.pres), e});
        }
        if (ps.empty()) return;  // zero slot annihilates the word
        pieces.push_back(std::move(ps));
    }
    std::vector<size_t> idx(w.size(), 0);
    for (;;) {
        Rational coeff = c;
        std::vector<PairElement> word;
        word.reserve(w.size());
        for (size_t i = 0; i < w.size(); ++i) {
            coeff *= pieces[i][idx[i]].first;
            word.push_back(pieces[i][idx[i]].second);
        }
        merge_term(acc, coeff, word);
        size_t i = 0;
        for (; i < w.size(); ++i) {
            if (++idx[i] < pieces[i].size()) break;
            idx[i] = 0;
        }
        if (i == w.size()) break;
    }
}

}  // namespace

Tensor tensor_of_word(const Rational& c, const std::vector<PairElement>& word) {
    std::map<std::string, TensorTerm> acc;
    expand_word(c, word, acc);
    return from_map(std::move(acc));
}

Tensor tensor_add(const Tensor& a, const Tensor& b) {
    std::map<std::string, TensorTerm> acc;
    for (const auto& t : a.terms) merge_term(acc, t.c, t.word);
    for (const auto& t : b.terms) merge_term(acc, t.c, t.word);
    return from_map(std::move(acc));
}

Tensor tensor_scale(const Rational& c, const Tensor& a) {
    if (c == 0) return {};
    Tensor out = a;
    for (auto& t : out.terms) t.c *= c;
    return out;
}

bool tensor_equal(const Tensor& a, const Tensor& b) {
    return tensor_is_zero(tensor_add(a, tensor_scale(-1, b)));
}

bool tensor_is_zero(const Tensor& a) { return a.terms.empty(); }

Tensor apply_word_op(const WordOp& op, const Tensor& t) {
    Tensor out;
    for (const auto& term : t.terms)
        out = tensor_add(out, tensor_scale(term.c, op(term.word)));
    return out;
}

WordOp lift_coderivation(const GMap& f) {
    const GMap fc = f;
    const int fdeg = total_degree(f);
    return [fc, fdeg](const std::vector<PairElement>& w) -> Tensor {
        const int n = static_cast<int>(w.size());
        if (n < fc.arity) return {};
        // canonicalize first so every slot is homogeneous
        Tensor canon = tensor_of_word(1, w);
        std::map<std::string, TensorTerm> acc;
        for (const auto& term : canon.terms) {
            std::vector<int> degs(term.word.size());
            for (size_t i = 0; i < term.word.size(); ++i) {
                auto parts = homogeneous_parts(term.word[i]);
                degs[i] = parts.empty() ? 0 : parts.front().first;
            }
            for (int i = 0; i + fc.arity <= n; ++i) {
                int sg = 0;
                for (int j = 0; j < i; ++j) sg += degs[j];
                std::vector<PairElement> fin(term.word.begin() + i,
                                             term.word.begin() + i + fc.arity);
                PairElement val = fc.eval(fin);
                if (resolution::p_is_zero(val)) continue;
                std::vector<PairElement> nw;
                nw.reserve(n - fc.arity + 1);
                nw.insert(nw.end(), term.word.begin(), term.word.begin() + i);
                nw.push_back(std::move(val));
                nw.insert(nw.end(), term.word.begin() + i + fc.arity,
                          term.word.end());
                Rational coeff = term.c;
                if ((fdeg * sg) % 2) coeff = -coeff;
                expand_word(coeff, nw, acc);
            }
        }
        return from_map(std::move(acc));
    };
}

PairElement corestriction(const Tensor& t, PresPtr pres) {
    PairElement out{exactalg::make_scalar(0, pres),
                    exactalg::make_scalar(0, pres)};
    for (const auto& term : t.terms)
        if (term.word.size() == 1)
            out = resolution::p_add(out,
                                    resolution::p_scale(term.c, term.word[0]));
    return out;
}

namespace {

void tuples_within(const std::vector<std::pair<PairElement, int>>& basis,
                   int arity, int degree_max,
                   const std::function<void(const std::vector<PairElement>&)>& fn) {
    std::vector<size_t> idx(arity, 0);
    if (arity == 0) {
        fn({});
        return;
    }
    for (;;) {
        int deg = 0;
        for (int i = 0; i < arity; ++i) deg += basis[idx[i]].second;
        if (deg <= degree_max) {
            std::vector<PairElement> tuple;
            tuple.reserve(arity);
            for (int i = 0; i < arity; ++i) tuple.push_back(basis[idx[i]].first);
            fn(tuple);
        }
        int i = 0;
        for (; i < arity; ++i) {
            if (++idx[i] < basis.size()) break;
            idx[i] = 0;
        }
        if (i == arity) break;
    }
}

std::string tuple_str(const std::vector<PairElement>& tuple) {
    std::string s = "(";
    for (size_t i = 0; i < tuple.size(); ++i) {
        if (i) s += ", ";
        s += resolution::p_to_string(tuple[i]);
    }
    s += ")";
    return s;
}

}  // namespace

McReport check_mc(const Series& s, int t_order, int arity_max, int degree_max,
                  const std::vector<std::pair<PairElement, int>>& basis) {
    McReport rep;
    for (int k = 0; k <= t_order; ++k) {
        GFam residual;
        for (int i = 0; i <= k; ++i) {
            int j = k - i;
            if (i >= static_cast<int>(s.size()) ||
                j >= static_cast<int>(s.size()))
                continue;
            residual = fam_add(residual, fam_bracket(s[i], s[j]));
        }
        for (const auto& [r, map] : residual) {
            if (r > arity_max) continue;
            int bad = 0, total = 0;
            std::string witness;
            tuples_within(basis, r, degree_max,
                          [&](const std::vector<PairElement>& tuple) {
                              ++total;
                              PairElement v = map.eval(tuple);
                              if (!resolution::p_is_zero(v)) {
                                  if (!bad)
                                      witness = tuple_str(tuple) + " -> " +
                                                resolution::p_to_string(v);
                                  ++bad;
                              }
                          });
            std::ostringstream line;
            line << "order " << k << " arity " << r << ": " << total
                 << " tuples, ";
            if (bad) {
                rep.pass = false;
                line << bad << " nonzero; first " << witness;
            } else {
                line << "all zero";
            }
            rep.lines.push_back(line.str());
        }
    }
    rep.lines.push_back(rep.pass ? "PASS" : "FAIL");
    return rep;
}

Series apply_gauge(const GMap& f, const Series& s, int t_order) {
    if (total_degree(f) != 0)
        throw exactalg::algebra_error("gauge map must have total degree 0");
    Series out;
    GFam ff = fam_of(f);
    // ad_f^n (m^(i)) built incrementally in n
    std::vector<GFam> pow = s;  // pow[i] holds ad^n applied to s[i]
    Rational nfact = 1;
    for (int k = 0; k <= t_order; ++k) out.push_back(GFam{});
    for (int n = 0; n <= t_order; ++n) {
        if (n > 0) {
            nfact *= n;
            for (auto& g : pow) g = fam_bracket(ff, g);
        }
        for (int i = 0; i < static_cast<int>(pow.size()); ++i) {
            int k = n + i;
            if (k > t_order) continue;
            out[k] = fam_add(out[k], fam_scale(Rational(1) / nfact, pow[i]));
        }
    }
    return out;
}

}  // namespace gradedmaps
