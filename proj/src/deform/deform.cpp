#include "deform/deform.h"

#include "exactalg/simplex.h"

#include <map>
#include <sstream>
#include <vector>

namespace deform {

using exactalg::algebra_error;
using exactalg::Element;
using exactalg::Kind;
using exactalg::Monomial;
using exactalg::Rational;
using gradedmaps::fam_add;
using gradedmaps::fam_bracket;
using gradedmaps::fam_of;
using gradedmaps::fam_scale;
using resolution::bullet_coeff;
using resolution::bullet_product;
using resolution::de_rham_d;
using resolution::homotopy_h;
using resolution::include_i;
using resolution::p_add;
using resolution::p_scale;
using resolution::p_to_string;
using resolution::pair_of;
using resolution::project_p;
using resolution::twisted;

namespace {

Element zero_of(const ResolutionAlgebra& alg) {
    return exactalg::make_scalar(0, alg.pres);
}

// a watermark-aware zero test: terms at or above the reliability mark were
// possibly dropped elsewhere and carry no information
bool reliably_zero(const Element& e) {
    for (const auto& [m, c] : e.terms) {
        if (c == 0) continue;
        if (e.reliable_below && exactalg::p_degree(m) >= *e.reliable_below) continue;
        return false;
    }
    return true;
}

bool reliably_zero(const PairElement& v) {
    return reliably_zero(v.a) && reliably_zero(v.b);
}

void require_x_polynomial(const Element& e, const char* what) {
    for (const auto& [m, c] : e.terms)
        for (const auto& f : m)
            if (f.kind != Kind::X)
                throw algebra_error(std::string(what) +
                                    " expects an x-polynomial argument");
}

using exactalg::max_x_degree;

// the two eigendirections moved by the twist (0-based), with the usual
// admissibility conditions
std::pair<int, int> moved_pair(const ResolutionAlgebra& alg) {
    const int n = alg.pres->n;
    if (static_cast<int>(alg.twist.size()) != n)
        throw algebra_error("the integral cochain needs a twist eigenvalue per coordinate");
    std::vector<int> moved;
    for (int i = 0; i < n; ++i)
        if (alg.twist[i] != 1) moved.push_back(i);
    if (moved.size() != 2)
        throw algebra_error("twist must move exactly two eigendirections");
    if (alg.twist[moved[0]] * alg.twist[moved[1]] != 1)
        throw algebra_error("the two moved eigenvalues must be mutually inverse");
    return {moved[0], moved[1]};
}

GFam htilde(const GFam& f) {
    GFam out;
    for (const auto& [r, g] : f) {
        GMap h = resolution::lifted_homotopy(g);
        out.emplace(h.arity, h);
    }
    return out;
}

GFam prune_arity(const GFam& f, int arity_max) {
    GFam out;
    for (const auto& [r, g] : f)
        if (r <= arity_max) out.emplace(r, g);
    return out;
}

// one step of the recursion operator on a t-indexed vector of families:
//   Y_j = -[m', h~ X_j] - sum_{r=1}^{j} [mu_r, h~ X_{j-r}]
std::vector<GFam> apply_step(const std::vector<GFam>& X,
                             const std::vector<GFam>& mu, const GMap& mprime) {
    std::vector<GFam> H(X.size());
    for (size_t j = 0; j < X.size(); ++j) H[j] = htilde(X[j]);
    std::vector<GFam> Y(X.size());
    for (size_t j = 0; j < X.size(); ++j) {
        GFam acc = fam_bracket(fam_of(mprime), H[j]);
        for (size_t r = 1; r <= j && r < mu.size(); ++r)
            acc = fam_add(acc, fam_bracket(mu[r], H[j - r]));
        Y[j] = fam_scale(-1, acc);
    }
    return Y;
}

// the constant-mu part of the step, iterated k times
GFam step0_pow(int k, GFam g, const GMap& mprime) {
    while (k-- > 0) g = fam_scale(-1, fam_bracket(fam_of(mprime), htilde(g)));
    return g;
}

void validate_seed(const SeedFamily& seed, const ResolutionAlgebra& alg) {
    for (const auto& [n, fam] : seed) {
        if (n < 0 || n > alg.pres->n)
            throw algebra_error("seed resolution degree out of range");
        for (const auto& [r, g] : fam)
            if (g.deg2 != n)
                throw algebra_error("seed component form degree disagrees with its resolution degree key");
    }
}

std::vector<PairElement> probe_elements(const ResolutionAlgebra& alg) {
    auto pres = alg.pres;
    const Element one = exactalg::make_scalar(1, pres);
    const Element zero = exactalg::make_scalar(0, pres);
    std::vector<PairElement> out;
    out.push_back(pair_of(one, zero));
    out.push_back(pair_of(zero, one));
    for (int i = 1; i <= pres->n; ++i) {
        out.push_back(pair_of(exactalg::make_generator(pres, Kind::X, i), zero));
        out.push_back(pair_of(exactalg::make_generator(pres, Kind::P, i), zero));
        out.push_back(pair_of(exactalg::make_generator(pres, Kind::DP, i), zero));
    }
    out.push_back(pair_of(zero, exactalg::make_generator(pres, Kind::X, 1)));
    out.push_back(pair_of(zero, exactalg::make_generator(pres, Kind::DP, 1)));
    return out;
}

// evaluate a residual family on all probe tuples; throw with the first
// nonzero value
void require_vanishing(const GFam& fam, const ResolutionAlgebra& alg,
                       const char* what) {
    const auto basis = probe_elements(alg);
    for (const auto& [r, g] : fam) {
        std::vector<size_t> idx(static_cast<size_t>(r), 0);
        while (true) {
            std::vector<PairElement> in;
            in.reserve(idx.size());
            for (size_t k : idx) in.push_back(basis[k]);
            PairElement v = g.eval(in);
            if (!reliably_zero(v)) {
                std::ostringstream os;
                os << what << ": residual at (";
                for (size_t t = 0; t < in.size(); ++t)
                    os << (t ? ", " : "") << p_to_string(in[t]);
                os << ") = " << p_to_string(v);
                throw algebra_error(os.str());
            }
            size_t pos = 0;
            for (; pos < idx.size(); ++pos) {
                if (++idx[pos] < basis.size()) break;
                idx[pos] = 0;
            }
            if (pos == idx.size()) break;
            if (idx.empty()) break;
        }
        if (r == 0) continue;
    }
}

GFam seed_total(const SeedFamily& seed) {
    GFam out;
    for (const auto& [n, fam] : seed) out = fam_add(out, fam);
    return out;
}

void check_compatible(const SeedFamily& seed, const ResolutionAlgebra& alg) {
    validate_seed(seed, alg);
    GFam bg;
    {
        GMap d = boundary_map(alg);
        GMap m2 = product_map(alg);
        bg.emplace(d.arity, d);
        bg.emplace(m2.arity, m2);
    }
    const GFam lam = seed_total(seed);
    require_vanishing(fam_bracket(bg, lam), alg,
                      "deformation seed fails the background cocycle check");
    require_vanishing(fam_bracket(lam, lam), alg,
                      "deformation seed fails the self-commutation check");
}

int w_degree(const PairElement& v) {
    return std::max(max_x_degree(v.a), max_x_degree(v.b));
}

}  // namespace

GMap product_map(const ResolutionAlgebra& alg) {
    GMap m;
    m.arity = 2;
    m.deg1 = 1;
    m.deg2 = 0;
    m.label = "m2";
    m.eval = [alg](const std::vector<PairElement>& in) {
        PairElement out = pair_of(zero_of(alg), zero_of(alg));
        for (const auto& [deg, part] : gradedmaps::homogeneous_parts(in[0])) {
            PairElement prod = bullet_product(alg, part, in[1]);
            out = p_add(out, (deg % 2 == 0 ? prod : p_scale(-1, prod)));
        }
        return out;
    };
    return m;
}

GMap boundary_map(const ResolutionAlgebra& alg) {
    GMap d;
    d.arity = 1;
    d.deg1 = 0;
    d.deg2 = 1;
    d.label = "d";
    d.eval = [](const std::vector<PairElement>& in) { return de_rham_d(in[0]); };
    return d;
}

SeedFamily constant_form_seed(const ResolutionAlgebra& alg, const Element& form) {
    auto fd = resolution::uniform_form_degree(form);
    if (!fd)
        throw algebra_error("constant seed needs a form-homogeneous value");
    GMap c = gradedmaps::constant_map(pair_of(form, zero_of(alg)), -1, *fd);
    c.label = "const-form";
    SeedFamily seed;
    seed[*fd] = fam_of(c);
    return seed;
}

SeedFamily differential_seed(const ResolutionAlgebra& alg) {
    Element gamma = resolution::solve_gamma(alg);
    GMap D = resolution::build_D(alg, gamma);
    SeedFamily seed;
    seed[D.deg2] = fam_of(D);
    return seed;
}

GFam first_order(const SeedFamily& seed, const ResolutionAlgebra& alg) {
    check_compatible(seed, alg);
    const GMap mp = product_map(alg);
    GFam out;
    for (const auto& [m, fam] : seed)
        out = fam_add(out, step0_pow(m, fam, mp));
    return out;
}

GFam second_order(const SeedFamily& seed, const ResolutionAlgebra& alg,
                  SecondOrderForm form) {
    check_compatible(seed, alg);
    const GMap mp = product_map(alg);
    const int NB = alg.pres->n;
    const GFam mu1 = [&] {
        GFam out;
        for (const auto& [m, fam] : seed) out = fam_add(out, step0_pow(m, fam, mp));
        return out;
    }();

    const int k0 = (form == SecondOrderForm::Derived) ? 0 : 1;
    GFam total;
    for (const auto& [m, fam] : seed)
        for (int k = k0; k <= m - 1; ++k) {
            GFam inner = htilde(step0_pow(m - 1 - k, fam, mp));
            GFam t = step0_pow(k, fam_bracket(mu1, inner), mp);
            total = fam_add(total, fam_scale(-1, t));
        }

    for (int n = 0; n <= NB; ++n) {
        GFam ldot;
        for (int c = 0; c <= n; ++c) {
            auto right = seed.find(n - c);
            if (right == seed.end()) continue;
            for (int j = 0; c + j + 1 <= NB; ++j) {
                auto left = seed.find(c + j + 1);
                if (left == seed.end()) continue;
                ldot = fam_add(ldot, fam_bracket(htilde(step0_pow(j, left->second, mp)),
                                                 right->second));
            }
        }
        if (!ldot.empty()) total = fam_add(total, step0_pow(n, ldot, mp));
    }
    return total;
}

Series solve_master(const SeedFamily& seed, const ResolutionAlgebra& alg,
                    int t_order, int arity_max) {
    if (t_order < 0) throw algebra_error("negative order in the deformation series");
    check_compatible(seed, alg);
    const GMap mp = product_map(alg);
    const int NB = alg.pres->n;

    std::vector<GFam> mu(static_cast<size_t>(t_order) + 1);
    std::vector<std::vector<GFam>> L(static_cast<size_t>(NB) + 1);
    for (auto& row : L) row.resize(static_cast<size_t>(t_order) + 1);
    for (const auto& [n, fam] : seed) L[static_cast<size_t>(n)][0] = fam;

    for (int k = 0; k + 1 <= t_order; ++k) {
        // (k+1) mu_{k+1} = t^k coefficient of sum_m (step)^m Lambda_m
        GFam accmu;
        for (int m = 0; m <= NB; ++m) {
            std::vector<GFam> Z(L[static_cast<size_t>(m)].begin(),
                                L[static_cast<size_t>(m)].begin() + k + 1);
            for (int s = 0; s < m; ++s) Z = apply_step(Z, mu, mp);
            accmu = fam_add(accmu, Z[static_cast<size_t>(k)]);
        }
        mu[static_cast<size_t>(k) + 1] = fam_scale(Rational(1, k + 1), accmu);

        // (k+1) Lambda_{n,k+1} = t^k coefficient of
        //   sum_{c<=n} sum_j [ h~ (step)^j Lambda_{c+j+1}, Lambda_{n-c} ]
        for (int n = 0; n <= NB; ++n) {
            GFam accL;
            for (int c = 0; c <= n; ++c) {
                for (int j = 0; c + j + 1 <= NB; ++j) {
                    std::vector<GFam> Z(L[static_cast<size_t>(c + j + 1)].begin(),
                                        L[static_cast<size_t>(c + j + 1)].begin() + k + 1);
                    for (int s = 0; s < j; ++s) Z = apply_step(Z, mu, mp);
                    for (int i = 0; i <= k; ++i)
                        accL = fam_add(accL,
                                       fam_bracket(htilde(Z[static_cast<size_t>(i)]),
                                                   L[static_cast<size_t>(n - c)]
                                                    [static_cast<size_t>(k - i)]));
                }
            }
            L[static_cast<size_t>(n)][static_cast<size_t>(k) + 1] =
                fam_scale(Rational(1, k + 1), accL);
        }
    }

    Series out(static_cast<size_t>(t_order) + 1);
    {
        GMap d = boundary_map(alg);
        GMap m2 = product_map(alg);
        out[0].emplace(d.arity, d);
        out[0].emplace(m2.arity, m2);
    }
    for (int k = 1; k <= t_order; ++k)
        out[static_cast<size_t>(k)] = prune_arity(mu[static_cast<size_t>(k)], arity_max);
    return out;
}

Series restrict_to_W(const Series& s, const ResolutionAlgebra& alg,
                     const std::vector<PairElement>& w_basis, int degree_max) {
    for (const auto& w : w_basis) include_i(w);  // validates zero-momentum inputs
    std::vector<int> bdeg(w_basis.size());
    for (size_t i = 0; i < w_basis.size(); ++i) bdeg[i] = w_degree(w_basis[i]);

    const GMap d = boundary_map(alg);
    Series out(s.size());
    for (size_t k = 0; k < s.size(); ++k) {
        for (const auto& [r, f] : s[k]) {
            GMap br = gradedmaps::gerstenhaber_bracket(d, f);
            std::vector<size_t> idx(static_cast<size_t>(r), 0);
            while (true) {
                int deg = 0;
                for (size_t t : idx) deg += bdeg[t];
                if (deg <= degree_max) {
                    std::vector<PairElement> in;
                    in.reserve(idx.size());
                    for (size_t t : idx) in.push_back(w_basis[t]);
                    if (!reliably_zero(br.eval(in))) {
                        std::ostringstream os;
                        os << "restriction of the deformation series is inconsistent: "
                           << "the order-" << k << " arity-" << r
                           << " component does not commute with the boundary at (";
                        for (size_t t = 0; t < in.size(); ++t)
                            os << (t ? ", " : "") << p_to_string(in[t]);
                        os << ")";
                        throw algebra_error(os.str());
                    }
                }
                size_t pos = 0;
                for (; pos < idx.size(); ++pos) {
                    if (++idx[pos] < w_basis.size()) break;
                    idx[pos] = 0;
                }
                if (pos == idx.size()) break;
            }

            GMap g;
            g.arity = f.arity;
            g.deg1 = f.deg1 + f.deg2;
            g.deg2 = 0;
            g.label = f.label + "|W";
            auto inner = f.eval;
            g.eval = [inner](const std::vector<PairElement>& in) {
                std::vector<PairElement> emb;
                emb.reserve(in.size());
                for (const auto& w : in) emb.push_back(include_i(w));
                return project_p(inner(emb));
            };
            out[k].emplace(r, g);
        }
    }
    return out;
}

Element closed_phi(const ResolutionAlgebra& alg, const Element& a,
                   const Element& b) {
    require_x_polynomial(a, "closed_phi");
    require_x_polynomial(b, "closed_phi");
    auto [i0, i1] = moved_pair(alg);
    auto pres = alg.pres;
    const int n = pres->n;

    // substitute x^i -> (1 + (1/q_i - 1) t) x^i and collect by powers of t
    auto substituted = [&](const Element& e) {
        std::vector<Element> out(static_cast<size_t>(max_x_degree(e)) + 1,
                                 exactalg::make_scalar(0, pres));
        for (const auto& [mon, c] : e.terms) {
            std::vector<Rational> poly{c};
            for (const auto& f : mon) {
                Rational slope = 1 / alg.twist[static_cast<size_t>(f.index - 1)] - 1;
                for (int rep = 0; rep < f.power; ++rep) {
                    std::vector<Rational> next(poly.size() + 1, Rational(0));
                    for (size_t j = 0; j < poly.size(); ++j) {
                        next[j] += poly[j];
                        next[j + 1] += poly[j] * slope;
                    }
                    poly = std::move(next);
                }
            }
            Element mono = exactalg::make_scalar(1, pres);
            mono.terms = {{mon, Rational(1)}};
            for (size_t j = 0; j < poly.size(); ++j) {
                if (poly[j] == 0) continue;
                if (j >= out.size())
                    out.resize(j + 1, exactalg::make_scalar(0, pres));
                out[j] = exactalg::add(out[j], exactalg::scale(poly[j], mono));
            }
        }
        return out;
    };

    (void)n;
    std::vector<exactalg::SimplexTerm> integrand;
    const std::array<std::tuple<int, int, int>, 2> legs{
        std::tuple<int, int, int>{i0, i1, 1},
        std::tuple<int, int, int>{i1, i0, -1}};
    for (const auto& [al, be, eps] : legs) {
        auto da = substituted(exactalg::partial_derivative(Kind::X, al + 1, a));
        auto db = substituted(exactalg::partial_derivative(Kind::X, be + 1, b));
        for (size_t mw = 0; mw < da.size(); ++mw) {
            if (exactalg::is_zero(da[mw])) continue;
            for (size_t mu_ = 0; mu_ < db.size(); ++mu_) {
                if (exactalg::is_zero(db[mu_])) continue;
                exactalg::SimplexTerm term;
                term.exps = {static_cast<int>(mu_), static_cast<int>(mw)};
                term.coeff = exactalg::scale(Rational(-eps),
                                             exactalg::mul(da[mw], db[mu_]));
                integrand.push_back(term);
            }
        }
    }
    if (integrand.empty()) return exactalg::make_scalar(0, pres);
    return exactalg::simplex_integrate(integrand);
}

Element closed_Phi(const ResolutionAlgebra& alg, const Element& a,
                   const Element& b, bool pairing_exponentials) {
    require_x_polynomial(a, "closed_Phi");
    require_x_polynomial(b, "closed_Phi");
    if (alg.kind != resolution::BulletKind::Vasiliev || !alg.pres->weyl_form)
        throw algebra_error("closed_Phi needs the pairing matrix of a Vasiliev-kind algebra");
    auto pres = alg.pres;
    const int n = pres->n;
    if (static_cast<int>(alg.twist.size()) != n)
        throw algebra_error("closed_Phi needs a twist eigenvalue per coordinate");
    const auto& lam = *pres->weyl_form;
    const auto& q = alg.twist;

    const int da = max_x_degree(a);
    const int db = max_x_degree(b);

    // polynomial ring in u, w, the two derivative banks and the output
    // coordinates; key layout [pu, pw, k1(n), k2(n), xe(n)]
    const size_t W = 2 + 3 * static_cast<size_t>(n);
    using OpPoly = std::map<std::vector<int>, Rational>;
    auto padd = [](OpPoly& P, const std::vector<int>& key, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = P.emplace(key, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) P.erase(it);
        }
    };
    auto k1at = [&](size_t i) { return 2 + i; };
    auto k2at = [&](size_t i) { return 2 + static_cast<size_t>(n) + i; };
    auto xeat = [&](size_t i) { return 2 + 2 * static_cast<size_t>(n) + i; };

    OpPoly S;
    for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
        // shift part: p_bank . (x scaled towards the twisted coordinates)
        std::vector<int> key(W, 0);
        key[k1at(i)] = 1;
        key[xeat(i)] = 1;
        padd(S, key, Rational(1));
        key[1] = 1;  // times w
        padd(S, key, 1 / q[i] - 1);
        key[1] = 0;
        key[k1at(i)] = 0;
        key[k2at(i)] = 1;
        padd(S, key, Rational(1));
        key[0] = 1;  // times u
        padd(S, key, 1 / q[i] - 1);
    }
    if (pairing_exponentials) {
        for (size_t i = 0; i < static_cast<size_t>(n); ++i)
            for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
                const Rational lij = lam[i][j];
                if (lij == 0) continue;
                auto quad = [&](size_t slotA, size_t slotB, int pu, int pw,
                                const Rational& c) {
                    std::vector<int> key(W, 0);
                    key[0] = pu;
                    key[1] = pw;
                    key[slotA] += 1;
                    key[slotB] += 1;
                    padd(S, key, c);
                };
                quad(k1at(i), k2at(j), 0, 0, lij);               // lam(p1, p2)
                quad(k1at(i), k1at(j), 0, 1, lij * q[j]);        // w lam(p1, tp1)
                quad(k1at(i), k2at(j), 0, 1, lij * (q[j] - 1));  // w lam(p1, tp2-p2)
                quad(k2at(i), k2at(j), 1, 0, lij * q[j]);        // u lam(p2, tp2)
                quad(k2at(i), k1at(j), 1, 0, lij * (q[j] - 1));  // u lam(p2, tp1-p1)
                quad(k1at(i), k1at(j), 0, 2, lij * q[j]);        // w^2 lam(p1, tp1)
                quad(k1at(i), k2at(j), 1, 1, lij * q[j]);        // uw lam(p1, tp2)
                quad(k2at(i), k1at(j), 1, 1, lij * q[j]);        // uw lam(p2, tp1)
                quad(k2at(i), k2at(j), 2, 0, lij * q[j]);        // u^2 lam(p2, tp2)
            }
    }

    auto bank_degree = [&](const std::vector<int>& key, bool first) {
        int s = 0;
        for (size_t i = 0; i < static_cast<size_t>(n); ++i)
            s += key[first ? k1at(i) : k2at(i)];
        return s;
    };
    auto pmul = [&](const OpPoly& A, const OpPoly& B) {
        OpPoly out;
        for (const auto& [ka, ca] : A)
            for (const auto& [kb, cb] : B) {
                std::vector<int> key(W);
                for (size_t t = 0; t < W; ++t) key[t] = ka[t] + kb[t];
                if (bank_degree(key, true) > da || bank_degree(key, false) > db)
                    continue;
                padd(out, key, ca * cb);
            }
        return out;
    };

    // exp(S), truncated: every derivative bank is nilpotent past the degree
    // of its argument, so S^k dies once k exceeds deg a + deg b
    OpPoly expS{{std::vector<int>(W, 0), Rational(1)}};
    OpPoly power = expS;  // after step k: S^k / k!
    for (int k = 1; k <= da + db; ++k) {
        power = pmul(power, S);
        if (power.empty()) break;
        OpPoly next;
        for (const auto& [key, c] : power) next.emplace(key, c / k);
        power = std::move(next);
        for (const auto& [key, c] : power) padd(expS, key, c);
    }

    OpPoly pref;
    for (size_t i = 0; i < static_cast<size_t>(n); ++i)
        for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
            const Rational c = lam[i][j] * (1 - q[i]) * (1 - q[j]);
            if (c == 0) continue;
            std::vector<int> key(W, 0);
            key[k1at(i)] += 1;
            key[k2at(j)] += 1;
            padd(pref, key, c);
        }
    const OpPoly integrand = pmul(expS, pref);

    // coefficient tables of the two polynomial arguments
    auto coeff_table = [&](const Element& e) {
        std::map<std::vector<int>, Rational> out;
        for (const auto& [mon, c] : e.terms) {
            std::vector<int> exps(static_cast<size_t>(n), 0);
            for (const auto& f : mon) exps[static_cast<size_t>(f.index - 1)] = f.power;
            out[exps] = c;
        }
        return out;
    };
    const auto amap = coeff_table(a);
    const auto bmap = coeff_table(b);

    std::vector<exactalg::SimplexTerm> terms;
    for (const auto& [key, c] : integrand) {
        std::vector<int> k1(static_cast<size_t>(n)), k2(static_cast<size_t>(n));
        for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
            k1[i] = key[k1at(i)];
            k2[i] = key[k2at(i)];
        }
        auto ia = amap.find(k1);
        auto ib = bmap.find(k2);
        if (ia == amap.end() || ib == bmap.end()) continue;
        Rational fact(1);
        for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
            for (int f = 2; f <= k1[i]; ++f) fact *= f;
            for (int f = 2; f <= k2[i]; ++f) fact *= f;
        }
        Element mono = exactalg::make_scalar(1, pres);
        for (size_t i = 0; i < static_cast<size_t>(n); ++i)
            if (key[xeat(i)] > 0)
                mono = exactalg::mul(mono,
                                     exactalg::make_generator(pres, Kind::X,
                                                              static_cast<int>(i) + 1,
                                                              key[xeat(i)]));
        exactalg::SimplexTerm term;
        term.exps = {key[0], key[1]};
        term.coeff = exactalg::scale(Rational(-1) * c * ia->second * ib->second * fact,
                                     mono);
        terms.push_back(term);
    }
    if (terms.empty()) return exactalg::make_scalar(0, pres);
    return exactalg::simplex_integrate(terms);
}

PairElement m3_closed_form(const ResolutionAlgebra& alg, const PairElement& a1,
                           const PairElement& a2, const PairElement& a3) {
    for (const PairElement* v : {&a1, &a2, &a3}) {
        require_x_polynomial(v->a, "m3_closed_form");
        require_x_polynomial(v->b, "m3_closed_form");
    }
    auto cochain = [&](const Element& u, const Element& v) {
        // The integral kernel has to carry twice the dp-form coefficients of
        // gamma written in the unordered index basis: in the plain variant
        // eps^{ab} d_a x d_b pairs with dp1^dp2 = (1/2) eps^{ab} dp_a dp_b.
        // The quadratic lam(dp - t dp, dp - t dp) in the pairing-deformed
        // gamma already sums over both index orders, while the two-bank
        // prefactor of the double integral does not, hence the factor 2.
        return alg.kind == resolution::BulletKind::Vasiliev
                   ? exactalg::scale(2, closed_Phi(alg, u, v))
                   : closed_phi(alg, u, v);
    };
    Element first = bullet_coeff(alg, a1.b, cochain(a2.a, a3.a));
    Element second =
        exactalg::sub(bullet_coeff(alg, a1.b, cochain(a2.a, a3.b)),
                      bullet_coeff(alg, a1.b, cochain(a2.b, twisted(alg, a3.a))));
    return pair_of(first, second);
}

PairElement m3_composite(const ResolutionAlgebra& alg, const Element& gamma,
                         const PairElement& a1, const PairElement& a2,
                         const PairElement& a3) {
    const Element zero = zero_of(alg);
    PairElement inner = homotopy_h(pair_of(bullet_coeff(alg, a1.b, gamma), zero));

    // split the middle slot by form degree; the sign of the composite reads
    // the form degree alone
    std::map<int, PairElement> buckets;
    auto put = [&](int slot, const Monomial& m, const Rational& c,
                   const std::optional<int>& wm) {
        int fd = 0;
        for (const auto& f : m)
            if (f.kind == Kind::DP || f.kind == Kind::DPi) fd += f.power;
        auto [it, fresh] = buckets.emplace(fd, pair_of(zero, zero));
        Element& dst = slot == 0 ? it->second.a : it->second.b;
        dst.terms[m] = c;
        dst.reliable_below = exactalg::wm_min(dst.reliable_below, wm);
    };
    for (const auto& [m, c] : a2.a.terms) put(0, m, c, a2.a.reliable_below);
    for (const auto& [m, c] : a2.b.terms) put(1, m, c, a2.b.reliable_below);

    PairElement out = pair_of(zero, zero);
    for (const auto& [fd, comp] : buckets) {
        PairElement t = homotopy_h(bullet_product(alg, inner, comp));
        t = bullet_product(alg, t, a3);
        out = p_add(out, ((fd - 1) % 2 == 0 ? t : p_scale(-1, t)));
    }
    return project_p(out);
}

}  // namespace deform
