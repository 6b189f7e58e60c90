#include "resolution/maps.h"

#include <functional>

namespace resolution {

using exactalg::make_generator;
using exactalg::make_scalar;
using gradedmaps::GMap;

GMap lifted_homotopy(const GMap& f) {
    GMap out;
    out.arity = f.arity;
    out.deg1 = f.deg1;
    out.deg2 = f.deg2 - 1;
    out.label = "h~" + f.label;
    auto inner = f.eval;
    out.eval = [inner](const std::vector<PairElement>& in) {
        return homotopy_h(inner(in));
    };
    return out;
}

GMap lifted_projection(const GMap& f) {
    GMap out;
    out.arity = f.arity;
    out.deg1 = f.deg1;
    out.deg2 = f.deg2;
    out.label = "ip~" + f.label;
    auto inner = f.eval;
    out.eval = [inner](const std::vector<PairElement>& in) {
        return include_i(project_p(inner(in)));
    };
    return out;
}

Element solve_gamma(const ResolutionAlgebra& alg) {
    const auto& q = alg.twist;
    if (q.empty())
        throw exactalg::algebra_error("solve_gamma: the algebra has no twist");
    const int n = alg.pres->n;
    std::vector<int> moved;
    for (int i = 0; i < n; ++i)
        if (q[i] != 1) moved.push_back(i + 1);

    if (moved.empty()) {
        // identity twist: the commutation constraints reduce to centrality
        // and any constant 2-form will do
        if (n < 2)
            throw exactalg::algebra_error(
                "solve_gamma: need at least two coordinates");
        return exactalg::mul(make_generator(alg.pres, Kind::DP, 1),
                             make_generator(alg.pres, Kind::DP, 2));
    }
    if (moved.size() != 2)
        throw exactalg::algebra_error(
            "solve_gamma: twist must move exactly two eigendirections, got " +
            std::to_string(moved.size()));
    if (q[moved[0] - 1] * q[moved[1] - 1] != 1)
        throw exactalg::algebra_error(
            "solve_gamma: the two moved eigenvalues must be mutually inverse");
    if (!alg.pres->truncation)
        throw exactalg::algebra_error(
            "solve_gamma: the exponential series needs a p-degree truncation");

    // exponent sum_i (q_i^{-1} - 1) x^i p_i, plus the momentum-momentum
    // pairing fed by the lambda matrix in the Vasiliev case
    Element expo = make_scalar(0, alg.pres);
    for (int i : moved) {
        Rational c = Rational(1) / q[i - 1] - 1;
        expo = exactalg::add(
            expo, exactalg::scale(
                      c, exactalg::mul(make_generator(alg.pres, Kind::X, i),
                                       make_generator(alg.pres, Kind::P, i))));
    }

    Element lamform;
    if (alg.kind == BulletKind::Vasiliev) {
        const auto& lam = *alg.pres->weyl_form;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational c = lam[i][j] * q[i];
                if (c == 0) continue;
                expo = exactalg::add(
                    expo,
                    exactalg::scale(
                        c,
                        exactalg::mul(make_generator(alg.pres, Kind::P, i + 1),
                                      make_generator(alg.pres, Kind::P, j + 1))));
            }
        // lambda(dp - t(dp), dp - t(dp))
        lamform = make_scalar(0, alg.pres);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                Rational c =
                    (1 - q[i]) * (1 - q[j]) * (lam[i][j] - lam[j][i]);
                if (c == 0) continue;
                lamform = exactalg::add(
                    lamform,
                    exactalg::scale(
                        c, exactalg::mul(
                               make_generator(alg.pres, Kind::DP, i + 1),
                               make_generator(alg.pres, Kind::DP, j + 1))));
            }
    } else {
        lamform = exactalg::mul(make_generator(alg.pres, Kind::DP, moved[0]),
                                make_generator(alg.pres, Kind::DP, moved[1]));
    }

    const int cap = *alg.pres->truncation;
    Element gamma = lamform;
    Element power = make_scalar(1, alg.pres);
    Rational kfact = 1;
    for (int k = 1; k <= cap + 1; ++k) {
        power = exactalg::mul(power, expo);
        kfact *= k;
        gamma = exactalg::add(
            gamma, exactalg::scale(1 / kfact, exactalg::mul(power, lamform)));
    }
    return gamma;
}

GMap build_D(const ResolutionAlgebra& alg, const Element& gamma) {
    GMap f;
    f.arity = 1;
    f.deg1 = -1;
    f.deg2 = 2;
    f.label = "D";
    f.eval = [alg, gamma](const std::vector<PairElement>& in) {
        return PairElement{bullet_coeff(alg, in[0].b, gamma),
                           make_scalar(0, alg.pres)};
    };
    return f;
}

SDRData standard_sdr(const ResolutionAlgebra& alg) {
    (void)alg;
    SDRData s;
    s.d.arity = 1;
    s.d.deg2 = 1;
    s.d.label = "d";
    s.d.eval = [](const std::vector<PairElement>& in) {
        return de_rham_d(in[0]);
    };
    s.h.arity = 1;
    s.h.deg2 = -1;
    s.h.label = "h";
    s.h.eval = [](const std::vector<PairElement>& in) {
        return homotopy_h(in[0]);
    };
    s.p.arity = 1;
    s.p.label = "p";
    s.p.eval = [](const std::vector<PairElement>& in) {
        return project_p(in[0]);
    };
    s.i.arity = 1;
    s.i.label = "i";
    s.i.eval = [](const std::vector<PairElement>& in) {
        return include_i(in[0]);
    };
    return s;
}

namespace {

// all slot monomials of polynomial degree <= cap (dp factors count one each)
std::vector<Element> slot_monomials(PresPtr pres, int cap) {
    const int n = pres->n;
    std::vector<Element> out;
    std::vector<int> exps(3 * n, 0);  // x powers, p powers, dp flags
    for (;;) {
        int deg = 0;
        for (int v : exps) deg += v;
        if (deg <= cap) {
            Element m = make_scalar(1, pres);
            for (int i = 0; i < n; ++i)
                if (exps[i])
                    m = exactalg::mul(
                        m, make_generator(pres, Kind::X, i + 1, exps[i]));
            for (int i = 0; i < n; ++i)
                if (exps[n + i])
                    m = exactalg::mul(
                        m, make_generator(pres, Kind::P, i + 1, exps[n + i]));
            for (int i = 0; i < n; ++i)
                if (exps[2 * n + i])
                    m = exactalg::mul(m,
                                      make_generator(pres, Kind::DP, i + 1));
            out.push_back(m);
        }
        int i = 0;
        for (; i < 3 * n; ++i) {
            int lim = i < 2 * n ? cap : 1;
            if (++exps[i] <= lim) break;
            exps[i] = 0;
        }
        if (i == 3 * n) break;
    }
    return out;
}

struct IdentityTally {
    std::string name;
    int checked = 0;
    int failed = 0;
    std::string first_bad;
    void note(bool ok, const PairElement& v) {
        ++checked;
        if (!ok && failed++ == 0) first_bad = p_to_string(v);
    }
};

}  // namespace

SdrReport check_sdr(const SDRData& s, const ResolutionAlgebra& alg,
                    int degree_max) {
    auto ev = [](const GMap& f, const PairElement& v) {
        return f.eval({v});
    };
    Element zero = make_scalar(0, alg.pres);
    std::vector<PairElement> corpus;
    for (const auto& m : slot_monomials(alg.pres, degree_max)) {
        corpus.push_back(pair_of(m, zero));
        if (!alg.twist.empty()) corpus.push_back(pair_of(zero, m));
    }

    IdentityTally t_homotopy{"hd + dh = 1 - ip"};
    IdentityTally t_h2{"h h = 0"};
    IdentityTally t_d2{"d d = 0"};
    IdentityTally t_ph{"p h = 0"};
    IdentityTally t_hi{"h i = 0"};
    IdentityTally t_pi{"p i = 1"};

    for (const auto& v : corpus) {
        PairElement lhs = p_add(ev(s.h, ev(s.d, v)), ev(s.d, ev(s.h, v)));
        PairElement rhs = p_sub(v, ev(s.i, ev(s.p, v)));
        t_homotopy.note(p_equal(lhs, rhs), v);
        t_h2.note(p_is_zero(ev(s.h, ev(s.h, v))), v);
        t_d2.note(p_is_zero(ev(s.d, ev(s.d, v))), v);
        t_ph.note(p_is_zero(ev(s.p, ev(s.h, v))), v);
        // restrict to momentum-free arguments for the inclusion
        PairElement w = project_p(v);
        t_hi.note(p_is_zero(ev(s.h, ev(s.i, w))), w);
        t_pi.note(p_equal(ev(s.p, ev(s.i, w)), w), w);
    }

    SdrReport rep;
    rep.pass = true;
    for (const auto* t :
         {&t_homotopy, &t_h2, &t_d2, &t_ph, &t_hi, &t_pi}) {
        std::string line =
            t->name + ": " + std::to_string(t->checked) + " monomials, ";
        if (t->failed == 0) {
            line += "all exact";
        } else {
            line += std::to_string(t->failed) +
                    " failures; first at " + t->first_bad;
            rep.pass = false;
        }
        rep.lines.push_back(line);
    }
    rep.lines.push_back(rep.pass ? "PASS" : "FAIL");
    return rep;
}

}  // namespace resolution
