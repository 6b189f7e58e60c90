#include "resolution/algebra.h"

#include "exactalg/sexpr.h"

#include <algorithm>

namespace resolution {

using exactalg::Factor;
using exactalg::Monomial;
using exactalg::Presentation;

ResolutionAlgebra make_resolution(int n, BulletKind kind,
                                  std::vector<Rational> twist,
                                  std::optional<int> truncation,
                                  std::optional<std::vector<std::vector<Rational>>>
                                      lambda) {
    Presentation p;
    p.n = n;
    p.m = 0;
    p.weyl = false;
    p.truncation = truncation;
    if (kind == BulletKind::Vasiliev) {
        if (!lambda) throw exactalg::presentation_error("vasiliev kind needs lambda");
        p.weyl_form = std::move(lambda);
    } else if (lambda) {
        p.weyl_form = std::move(lambda);
    }
    if (!twist.empty() && static_cast<int>(twist.size()) != n)
        throw exactalg::presentation_error("twist length must equal n");
    ResolutionAlgebra alg;
    alg.pres = exactalg::make_presentation(std::move(p));
    alg.kind = kind;
    alg.twist = std::move(twist);
    return alg;
}

PairElement pair_zero(const ResolutionAlgebra& alg) {
    return {exactalg::make_scalar(0, alg.pres), exactalg::make_scalar(0, alg.pres)};
}

PairElement pair_of(Element a, Element b) { return {std::move(a), std::move(b)}; }

PairElement p_add(const PairElement& x, const PairElement& y) {
    return {exactalg::add(x.a, y.a), exactalg::add(x.b, y.b)};
}

PairElement p_sub(const PairElement& x, const PairElement& y) {
    return {exactalg::sub(x.a, y.a), exactalg::sub(x.b, y.b)};
}

PairElement p_scale(const Rational& c, const PairElement& x) {
    return {exactalg::scale(c, x.a), exactalg::scale(c, x.b)};
}

bool p_is_zero(const PairElement& x) {
    return exactalg::is_zero(x.a) && exactalg::is_zero(x.b);
}

bool p_equal(const PairElement& x, const PairElement& y) {
    return exactalg::equal(x.a, y.a) && exactalg::equal(x.b, y.b);
}

std::string p_to_string(const PairElement& x) {
    return exactalg::to_sexpr(x.a) + "|" + exactalg::to_sexpr(x.b);
}

Element twisted(const ResolutionAlgebra& alg, const Element& e) {
    if (alg.twist.empty()) return e;
    return exactalg::apply_automorphism(alg.twist, e);
}

namespace {

int max_exponent(const Element& e, Kind k, int index) {
    int d = 0;
    for (const auto& [m, c] : e.terms)
        for (const auto& f : m)
            if (f.kind == k && f.index == index) d = std::max(d, f.power);
    return d;
}

Element iterated_derivative(Kind k, int index, int times, Element e) {
    for (int t = 0; t < times; ++t) e = exactalg::partial_derivative(k, index, e);
    return e;
}

Rational factorial(int n) {
    Rational r = 1;
    for (int j = 2; j <= n; ++j) r *= j;
    return r;
}

// enumerate multi-indices K with 0 <= K[i] <= cap[i]
bool next_multi(std::vector<int>& K, const std::vector<int>& cap) {
    for (size_t i = 0; i < K.size(); ++i) {
        if (K[i] < cap[i]) {
            ++K[i];
            return true;
        }
        K[i] = 0;
    }
    return false;
}

}  // namespace

Element bullet_coeff(const ResolutionAlgebra& alg, const Element& a,
                     const Element& b) {
    const int n = alg.pres->n;
    Element out = exactalg::make_scalar(0, alg.pres);
    // a's momenta contract against b's coordinates, so a's losses surface
    // lowered by b's x-degree; b's losses keep their own p-degree
    out.reliable_below =
        exactalg::wm_min(exactalg::wm_shift(a.reliable_below,
                                            -exactalg::max_x_degree(b)),
                         b.reliable_below);

    std::vector<int> capK(n), K(n, 0);
    for (int i = 0; i < n; ++i)
        capK[i] = std::min(max_exponent(a, Kind::P, i + 1),
                           max_exponent(b, Kind::X, i + 1));

    const bool vas = alg.kind == BulletKind::Vasiliev && alg.pres->weyl_form;

    do {
        Element da = a;
        Element db = b;
        Rational cK = 1;
        for (int i = 0; i < n; ++i) {
            if (K[i] == 0) continue;
            da = iterated_derivative(Kind::P, i + 1, K[i], std::move(da));
            db = iterated_derivative(Kind::X, i + 1, K[i], std::move(db));
            cK /= factorial(K[i]);
        }
        if (exactalg::is_zero(da) || exactalg::is_zero(db)) continue;

        if (!vas) {
            Element prod = exactalg::mul(da, db);
            out = exactalg::add(out, exactalg::scale(cK, prod));
            continue;
        }

        // extra lambda^{ij} d/dx^i (x) d/dx^j contractions
        const auto& lam = *alg.pres->weyl_form;
        std::vector<int> capM(n * n), M(n * n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                capM[i * n + j] =
                    lam[i][j] == 0 ? 0
                                   : std::min(max_exponent(da, Kind::X, i + 1),
                                              max_exponent(db, Kind::X, j + 1));
        do {
            Rational cM = cK;
            Element ta = da, tb = db;
            bool dead = false;
            for (int i = 0; i < n && !dead; ++i) {
                int row = 0;
                for (int j = 0; j < n; ++j) {
                    int mij = M[i * n + j];
                    if (mij == 0) continue;
                    Rational l = lam[i][j];
                    Rational lpow = 1;
                    for (int t = 0; t < mij; ++t) lpow *= l;
                    cM *= lpow / factorial(mij);
                    row += mij;
                }
                if (row) ta = iterated_derivative(Kind::X, i + 1, row, std::move(ta));
                if (exactalg::is_zero(ta)) dead = true;
            }
            if (dead) continue;
            for (int j = 0; j < n && !dead; ++j) {
                int col = 0;
                for (int i = 0; i < n; ++i) col += M[i * n + j];
                if (col) tb = iterated_derivative(Kind::X, j + 1, col, std::move(tb));
                if (exactalg::is_zero(tb)) dead = true;
            }
            if (dead) continue;
            out = exactalg::add(out, exactalg::scale(cM, exactalg::mul(ta, tb)));
        } while (next_multi(M, capM));
    } while (next_multi(K, capK));
    return out;
}

PairElement bullet_product(const ResolutionAlgebra& alg, const PairElement& x,
                           const PairElement& y) {
    Element aa = bullet_coeff(alg, x.a, y.a);
    Element ab = bullet_coeff(alg, x.a, y.b);
    Element bta = bullet_coeff(alg, x.b, twisted(alg, y.a));
    return {std::move(aa), exactalg::add(ab, bta)};
}

namespace {

Element de_rham_coeff(const Element& e) {
    Element out = exactalg::make_scalar(0, e.pres);
    out.reliable_below = exactalg::wm_shift(e.reliable_below, -1);
    if (!e.pres) return out;
    for (int j = 1; j <= e.pres->n; ++j) {
        Element der = exactalg::partial_derivative(Kind::P, j, e);
        if (exactalg::is_zero(der)) continue;
        Element dpj = exactalg::make_generator(e.pres, Kind::DP, j);
        out = exactalg::add(out, exactalg::mul(dpj, der));
    }
    return out;
}

Element homotopy_coeff(const Element& e) {
    Element out = exactalg::make_scalar(0, e.pres);
    out.reliable_below = exactalg::wm_shift(e.reliable_below, 1);
    for (const auto& [m, c] : e.terms) {
        std::vector<int> dps;
        int pdeg = 0;
        for (const auto& f : m) {
            if (f.kind == Kind::DP) dps.push_back(f.index);
            if (f.kind == Kind::P) pdeg += f.power;
        }
        const int l = static_cast<int>(dps.size());
        if (l == 0) continue;
        Rational denom = l + pdeg;
        for (int k = 0; k < l; ++k) {
            std::vector<Factor> word;
            word.push_back({Kind::P, dps[k], 1});
            for (const auto& f : m)
                if (!(f.kind == Kind::DP && f.index == dps[k])) word.push_back(f);
            Rational coeff = c / denom;
            if (k % 2) coeff = -coeff;
            Element part = exactalg::normal_form(e.pres, word, coeff);
            out.reliable_below =
                exactalg::wm_min(out.reliable_below, part.reliable_below);
            out = exactalg::add(out, part);
        }
    }
    return out;
}

Element project_coeff(const Element& e) {
    exactalg::require_reliable(e, 1);  // the p-free window must be intact
    Element out;
    out.pres = e.pres;
    for (const auto& [m, c] : e.terms) {
        bool keep = true;
        for (const auto& f : m)
            if (f.kind == Kind::P || f.kind == Kind::DP) {
                keep = false;
                break;
            }
        if (keep) out.terms.emplace(m, c);
    }
    return out;
}

}  // namespace

PairElement de_rham_d(const PairElement& x) {
    return {de_rham_coeff(x.a), exactalg::scale(-1, de_rham_coeff(x.b))};
}

PairElement homotopy_h(const PairElement& x) {
    return {homotopy_coeff(x.a), exactalg::scale(-1, homotopy_coeff(x.b))};
}

PairElement project_p(const PairElement& x) {
    return {project_coeff(x.a), project_coeff(x.b)};
}

PairElement include_i(const PairElement& w) {
    for (const Element* e : {&w.a, &w.b})
        for (const auto& [m, c] : e->terms)
            for (const auto& f : m)
                if (f.kind == Kind::P || f.kind == Kind::DP)
                    throw exactalg::unsupported_error(
                        "include_i expects a momentum-free element");
    return w;
}

std::optional<int> uniform_form_degree(const Element& e) {
    std::optional<int> deg;
    for (const auto& [m, c] : e.terms) {
        int d = 0;
        for (const auto& f : m)
            if (f.kind == Kind::DP) d += f.power;
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg ? deg : std::optional<int>(0);
}

}  // namespace resolution
