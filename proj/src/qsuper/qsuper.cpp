#include "qsuper/qsuper.h"

#include "exactalg/sexpr.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace qsuper {

using exactalg::Factor;
using exactalg::Kind;
using exactalg::Monomial;
using exactalg::Presentation;

PresPtr build_presentation(const std::vector<std::vector<Rational>>& q, int n,
                           std::optional<int> truncation) {
    if (n < 0) throw exactalg::presentation_error("negative dimension");
    Presentation p;
    p.n = n;
    p.m = static_cast<int>(q.size());
    for (const auto& row : q) {
        if (static_cast<int>(row.size()) != n)
            throw exactalg::presentation_error("q row length != n");
        for (const auto& e : row)
            if (e == 0) throw exactalg::presentation_error("zero q entry");
    }
    p.q = q;
    p.weyl = true;
    p.truncation = truncation;
    return exactalg::make_presentation(std::move(p));
}

Element wz_d(const Element& e) {
    Element out;
    out.pres = e.pres;
    out.reliable_below = exactalg::wm_shift(e.reliable_below, -1);
    if (!e.pres) return out;
    for (const auto& [mono, c] : e.terms) {
        bool lead = false;  // parity of the factors already passed over
        for (size_t j = 0; j < mono.size(); ++j) {
            const Factor& f = mono[j];
            if (f.kind == Kind::P || f.kind == Kind::Pi) {
                std::vector<Factor> w(mono.begin(),
                                      mono.begin() + static_cast<long>(j));
                Rational coeff = lead ? -c : c;
                if (f.kind == Kind::P) {
                    coeff *= f.power;
                    if (f.power > 1) w.push_back({Kind::P, f.index, f.power - 1});
                    w.push_back({Kind::DP, f.index, 1});
                } else {
                    w.push_back({Kind::DPi, f.index, 1});
                }
                w.insert(w.end(), mono.begin() + static_cast<long>(j) + 1,
                         mono.end());
                Element part = exactalg::normal_form(e.pres, w, coeff);
                out = exactalg::add(out, part);
            }
            if (exactalg::kind_odd(f.kind) && (f.power % 2)) lead = !lead;
        }
    }
    return out;
}

std::string descriptor_str(const CocycleDescriptor& d) {
    std::ostringstream os;
    os << "dpi=(";
    for (size_t a = 0; a < d.n_a.size(); ++a)
        os << (a ? " " : "") << d.n_a[a];
    os << ") dp=(";
    std::vector<int> dps = d.forced_set;
    dps.insert(dps.end(), d.alpha_set.begin(), d.alpha_set.end());
    std::sort(dps.begin(), dps.end());
    for (size_t i = 0; i < dps.size(); ++i) os << (i ? " " : "") << dps[i];
    os << ") mu=(";
    for (size_t i = 0; i < d.prefactor.size(); ++i)
        os << (i ? " " : "") << d.prefactor[i];
    os << ")";
    return os.str();
}

namespace {

Rational q_power(const Rational& q, int n) {
    Rational r(1);
    for (int i = 0; i < n; ++i) r *= q;
    return r;
}

// eigenvalue picked up by x^i when commuted through the dpi-block
std::vector<Rational> block_eigenvalues(
    const std::vector<std::vector<Rational>>& q, int n,
    const std::vector<int>& n_a) {
    std::vector<Rational> P(static_cast<size_t>(n), Rational(1));
    for (size_t a = 0; a < n_a.size(); ++a)
        for (int i = 0; i < n; ++i)
            P[static_cast<size_t>(i)] *= q_power(q[a][static_cast<size_t>(i)],
                                                 n_a[a]);
    return P;
}

CocycleDescriptor make_shape(const std::vector<std::vector<Rational>>& q,
                             int n, std::vector<int> n_a,
                             const std::vector<int>& alpha) {
    CocycleDescriptor d;
    d.n_a = std::move(n_a);
    auto P = block_eigenvalues(q, n, d.n_a);
    for (int i = 1; i <= n; ++i)
        if (P[static_cast<size_t>(i - 1)] != 1) d.forced_set.push_back(i);
    d.alpha_set = alpha;
    for (int i = 0; i < n; ++i)
        d.prefactor.push_back(Rational(1) - P[static_cast<size_t>(i)]);
    return d;
}

bool sign_condition(const std::vector<std::vector<Rational>>& q,
                    const CocycleDescriptor& d) {
    for (size_t a = 0; a < q.size(); ++a) {
        Rational lhs(1);
        for (int i : d.forced_set) lhs *= q[a][static_cast<size_t>(i - 1)];
        for (int i : d.alpha_set) lhs *= q[a][static_cast<size_t>(i - 1)];
        int other = 0;
        for (size_t b = 0; b < d.n_a.size(); ++b)
            if (b != a) other += d.n_a[b];
        if (other % 2) lhs = -lhs;
        if (lhs != 1) return false;
    }
    return true;
}

bool shape_less(const CocycleDescriptor& a, const CocycleDescriptor& b) {
    int sa = 0, sb = 0;
    for (int v : a.n_a) sa += v;
    for (int v : b.n_a) sb += v;
    if (sa != sb) return sa < sb;
    if (a.n_a != b.n_a) return a.n_a < b.n_a;
    return a.alpha_set < b.alpha_set;
}

}  // namespace

std::vector<CocycleDescriptor> classify_central_cocycles(
    const std::vector<std::vector<Rational>>& q, int n, int npi_bound) {
    if (npi_bound < 0) return {};
    const int m = static_cast<int>(q.size());
    std::vector<CocycleDescriptor> out;
    std::vector<int> n_a(static_cast<size_t>(m), 0);
    for (;;) {
        int total = 0;
        for (int v : n_a) total += v;
        if (total <= npi_bound) {
            auto P = block_eigenvalues(q, n, n_a);
            std::vector<int> free_idx;
            for (int i = 1; i <= n; ++i)
                if (P[static_cast<size_t>(i - 1)] == 1) free_idx.push_back(i);
            for (std::uint32_t mask = 0;
                 mask < (std::uint32_t{1} << free_idx.size()); ++mask) {
                std::vector<int> alpha;
                for (size_t b = 0; b < free_idx.size(); ++b)
                    if (mask & (std::uint32_t{1} << b))
                        alpha.push_back(free_idx[b]);
                CocycleDescriptor d = make_shape(q, n, n_a, alpha);
                if (sign_condition(q, d)) out.push_back(std::move(d));
            }
        }
        // odometer over dpi exponents, each digit capped by the bound
        int a = 0;
        for (; a < m; ++a) {
            if (++n_a[static_cast<size_t>(a)] <= npi_bound) break;
            n_a[static_cast<size_t>(a)] = 0;
        }
        if (a == m) break;
    }
    std::sort(out.begin(), out.end(), shape_less);
    return out;
}

Element expand_cocycle(const CocycleDescriptor& d, PresPtr pres) {
    std::vector<int> expo;  // 1-based coordinates with a nonzero mu
    for (size_t i = 0; i < d.prefactor.size(); ++i)
        if (d.prefactor[i] != 0) expo.push_back(static_cast<int>(i) + 1);
    if (!expo.empty() && !pres->truncation)
        throw exactalg::unsupported_error(
            "exponential prefactor needs a p-truncation to expand");

    // The prefactor product over coordinates is assembled term by term
    // rather than via mul: the generic product watermark rule assumes p's
    // of one factor may cross x's of the other, which never happens here
    // (distinct coordinates commute), and would wreck the window.
    Element out;
    out.pres = pres;
    if (expo.empty()) {
        out = exactalg::make_scalar(1, pres);
    } else {
        const int cap = *pres->truncation;
        std::vector<int> js(expo.size(), 0);
        for (;;) {
            int total = 0;
            for (int j : js) total += j;
            if (total <= cap) {
                Rational coeff(1);
                Monomial mono;
                for (size_t t = 0; t < expo.size(); ++t)
                    if (js[t]) mono.push_back({Kind::X, expo[t], js[t]});
                for (size_t t = 0; t < expo.size(); ++t) {
                    for (int r = 1; r <= js[t]; ++r) {
                        coeff *= d.prefactor[static_cast<size_t>(expo[t] - 1)];
                        coeff /= r;
                    }
                    if (js[t]) mono.push_back({Kind::P, expo[t], js[t]});
                }
                out.terms.emplace(std::move(mono), coeff);
            }
            size_t t = 0;
            for (; t < js.size(); ++t) {
                if (++js[t] <= cap) break;
                js[t] = 0;
            }
            if (t == js.size()) break;
        }
        out.reliable_below = cap + 1;
    }
    std::vector<int> dps = d.forced_set;
    dps.insert(dps.end(), d.alpha_set.begin(), d.alpha_set.end());
    std::sort(dps.begin(), dps.end());
    std::vector<Factor> form;
    for (int i : dps) form.push_back({Kind::DP, i, 1});
    for (size_t a = 0; a < d.n_a.size(); ++a)
        if (d.n_a[a] > 0)
            form.push_back({Kind::DPi, static_cast<int>(a) + 1, d.n_a[a]});
    if (!form.empty())
        out = exactalg::mul(out, exactalg::normal_form(pres, form));
    return out;
}

namespace {

// terms the watermark still vouches for
Element reliable_part(const Element& e) {
    if (!e.reliable_below) return e;
    Element out;
    out.pres = e.pres;
    out.reliable_below = e.reliable_below;
    for (const auto& [m, c] : e.terms)
        if (exactalg::p_degree(m) < *e.reliable_below) out.terms.emplace(m, c);
    return out;
}

struct Check {
    std::string name;
    Element residual;
};

VerifyReport judge(const std::vector<Check>& checks, int degree_max) {
    for (const auto& ch : checks) {
        if (ch.residual.reliable_below &&
            *ch.residual.reliable_below <= degree_max) {
            VerifyReport r;
            r.witness = ch.name + " (reliability window)";
            r.residual = reliable_part(ch.residual);
            return r;
        }
        Element rel = reliable_part(ch.residual);
        if (!exactalg::is_zero(rel)) {
            VerifyReport r;
            r.witness = ch.name;
            r.residual = rel;
            return r;
        }
    }
    VerifyReport r;
    r.pass = true;
    return r;
}

}  // namespace

VerifyReport verify_cocycle(const Element& f, PresPtr pres, int degree_max) {
    if (exactalg::is_zero(f)) {
        VerifyReport r;
        r.pass = true;
        return r;
    }
    bool odd = exactalg::odd_parity(f.terms.begin()->first);
    for (const auto& [m, c] : f.terms)
        if (exactalg::odd_parity(m) != odd) {
            VerifyReport r;
            r.witness = "mixed parity";
            r.residual = f;
            return r;
        }
    std::vector<Check> checks;
    auto commutator = [&](Kind k, int index) {
        Element g = exactalg::make_generator(pres, k, index);
        Element lhs = exactalg::mul(g, f);
        Element rhs = exactalg::mul(f, g);
        // graded commutator: odd generators see the candidate's parity
        if (exactalg::kind_odd(k) && odd) rhs = exactalg::scale(-1, rhs);
        checks.push_back({std::string(exactalg::kind_name(k)) + " " +
                              std::to_string(index),
                          exactalg::sub(lhs, rhs)});
    };
    for (int i = 1; i <= pres->n; ++i) {
        commutator(Kind::X, i);
        commutator(Kind::P, i);
        commutator(Kind::DP, i);
    }
    for (int a = 1; a <= pres->m; ++a) {
        commutator(Kind::Theta, a);
        commutator(Kind::Pi, a);
        commutator(Kind::DPi, a);
    }
    checks.push_back({"d-closedness", wz_d(f)});
    return judge(checks, degree_max);
}

VerifyReport verify_cocycle(const CocycleDescriptor& d, PresPtr pres,
                            int degree_max) {
    return verify_cocycle(expand_cocycle(d, pres), pres, degree_max);
}

namespace {

const std::vector<std::vector<Rational>>& klein_q() {
    static const std::vector<std::vector<Rational>> q{
        {-1, -1, 1, 1}, {1, 1, -1, -1}};
    return q;
}

}  // namespace

std::vector<CocycleDescriptor> klein_product_generators() {
    const auto& q = klein_q();
    std::vector<CocycleDescriptor> out;
    out.push_back(make_shape(q, 4, {0, 0}, {1, 2}));  // dp1 dp2
    out.push_back(make_shape(q, 4, {0, 0}, {3, 4}));  // dp3 dp4
    out.push_back(make_shape(q, 4, {1, 0}, {}));      // e^x dp1 dp2 dpi1
    out.push_back(make_shape(q, 4, {0, 1}, {}));      // e^y dp3 dp4 dpi2
    out.push_back(make_shape(q, 4, {2, 0}, {}));      // dpi1^2
    out.push_back(make_shape(q, 4, {0, 2}, {}));      // dpi2^2
    out.push_back(make_shape(q, 4, {0, 0}, {}));      // 1
    return out;
}

std::vector<Degree4Family> degree4_cocycles(
    const std::vector<std::vector<Rational>>& q, int n, int bound) {
    if (n != 4 || q != klein_q())
        throw exactalg::unsupported_error(
            "top-degree families are defined for the Klein-group data only");
    std::vector<Degree4Family> out;
    auto emit = [&](int family, int off1, int off2) {
        for (int m1 = 0; 2 * m1 + off1 <= bound; ++m1)
            for (int m2 = 0; 2 * m2 + off2 <= bound; ++m2) {
                Degree4Family f;
                f.family = family;
                f.m1 = m1;
                f.m2 = m2;
                std::vector<int> n_a{2 * m1 + off1, 2 * m2 + off2};
                // full dp block: whatever the eigenvalues force, the rest
                // joins as alpha indices
                auto P = block_eigenvalues(q, n, n_a);
                std::vector<int> alpha;
                for (int i = 1; i <= n; ++i)
                    if (P[static_cast<size_t>(i - 1)] == 1) alpha.push_back(i);
                f.shape = make_shape(q, n, n_a, alpha);
                out.push_back(std::move(f));
            }
    };
    emit(1, 0, 0);
    emit(2, 1, 0);
    emit(3, 0, 1);
    emit(4, 1, 1);
    return out;
}

namespace {

// sparse exact Gaussian elimination keyed by arbitrary ordered keys
struct Rref {
    // pivot key -> row (normalized so the pivot coefficient is 1)
    std::map<long, std::map<long, Rational>> rows;

    // reduce v against the pivots in place
    void reduce(std::map<long, Rational>& v) const {
        for (auto it = v.begin(); it != v.end();) {
            auto p = rows.find(it->first);
            if (p == rows.end()) {
                ++it;
                continue;
            }
            Rational c = it->second;
            for (const auto& [k, w] : p->second) {
                auto [pos, fresh] = v.emplace(k, -c * w);
                if (!fresh) {
                    pos->second -= c * w;
                    if (pos->second == 0) v.erase(pos);
                }
            }
            it = v.upper_bound(p->first);
        }
    }

    // returns true when v was independent (rank grew)
    bool insert(std::map<long, Rational> v) {
        reduce(v);
        if (v.empty()) return false;
        Rational lead = v.begin()->second;
        for (auto& [k, w] : v) w /= lead;
        rows.emplace(v.begin()->first, std::move(v));
        return true;
    }

    int rank() const { return static_cast<int>(rows.size()); }
};

}  // namespace

CompletenessReport completeness_check(
    const std::vector<std::vector<Rational>>& q, int n, int xp_cap,
    int dpi_cap, int npi_bound) {
    const int m = static_cast<int>(q.size());
    // roomy truncation so the kernel never cuts mid-check; the degree box
    // below does the honest bounding
    PresPtr pres = build_presentation(q, n, xp_cap + dpi_cap + 4);

    // candidate pool: theta/pi-free monomials inside the degree box
    std::vector<Monomial> pool;
    std::vector<int> xe(static_cast<size_t>(n), 0);
    std::vector<int> pe(static_cast<size_t>(n), 0);
    auto total = [](const std::vector<int>& v) {
        int t = 0;
        for (int d : v) t += d;
        return t;
    };
    auto advance = [&](std::vector<int>& v) {
        for (size_t i = 0; i < v.size(); ++i) {
            if (++v[i] <= xp_cap) return true;
            v[i] = 0;
        }
        return false;
    };
    do {
        if (total(xe) > xp_cap) continue;
        std::vector<int> pz(static_cast<size_t>(n), 0);
        pe = pz;
        do {
            if (total(pe) > xp_cap) continue;
            for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n);
                 ++mask) {
                std::vector<int> ge(static_cast<size_t>(m), 0);
                for (;;) {
                    Monomial mono;
                    for (int i = 0; i < n; ++i)
                        if (xe[static_cast<size_t>(i)])
                            mono.push_back(
                                {Kind::X, i + 1, xe[static_cast<size_t>(i)]});
                    for (int i = 0; i < n; ++i)
                        if (pe[static_cast<size_t>(i)])
                            mono.push_back(
                                {Kind::P, i + 1, pe[static_cast<size_t>(i)]});
                    for (int i = 0; i < n; ++i)
                        if (mask & (std::uint32_t{1} << i))
                            mono.push_back({Kind::DP, i + 1, 1});
                    for (int a = 0; a < m; ++a)
                        if (ge[static_cast<size_t>(a)])
                            mono.push_back(
                                {Kind::DPi, a + 1, ge[static_cast<size_t>(a)]});
                    pool.push_back(std::move(mono));
                    int a = 0;
                    for (; a < m; ++a) {
                        if (++ge[static_cast<size_t>(a)] <= dpi_cap) break;
                        ge[static_cast<size_t>(a)] = 0;
                    }
                    if (a == m) break;
                }
            }
        } while (advance(pe));
    } while (advance(xe));

    CompletenessReport rep;
    rep.candidates = static_cast<int>(pool.size());

    // every generator the centrality conditions quantify over
    std::vector<std::pair<Kind, int>> gens;
    for (int i = 1; i <= n; ++i) {
        gens.emplace_back(Kind::X, i);
        gens.emplace_back(Kind::P, i);
        gens.emplace_back(Kind::DP, i);
    }
    for (int a = 1; a <= m; ++a) {
        gens.emplace_back(Kind::Theta, a);
        gens.emplace_back(Kind::Pi, a);
        gens.emplace_back(Kind::DPi, a);
    }

    std::map<Monomial, long, exactalg::MonomialLess> row_ids;
    auto row_id = [&](const Monomial& mo) {
        auto [pos, fresh] = row_ids.emplace(mo, 0);
        if (fresh) pos->second = static_cast<long>(row_ids.size());
        return pos->second;
    };

    // one concatenated condition vector per candidate; conditions are only
    // imposed on result monomials whose x- and p-degrees stay inside the
    // box, since the cut exponential tail corrupts the boundary
    auto condition_vector = [&](const Element& cand, bool odd) {
        std::map<long, Rational> v;
        auto absorb = [&](int op, const Element& r) {
            for (const auto& [mo, c] : r.terms) {
                if (exactalg::x_degree(mo) > xp_cap) continue;
                if (exactalg::p_degree(mo) > xp_cap) continue;
                long key = static_cast<long>(op) * 1000000 + row_id(mo);
                auto [pos, fresh] = v.emplace(key, c);
                if (!fresh) {
                    pos->second += c;
                    if (pos->second == 0) v.erase(pos);
                }
            }
        };
        for (size_t gi = 0; gi < gens.size(); ++gi) {
            Element g =
                exactalg::make_generator(pres, gens[gi].first, gens[gi].second);
            Element rhs = exactalg::mul(cand, g);
            if (exactalg::kind_odd(gens[gi].first) && odd)
                rhs = exactalg::scale(-1, rhs);
            absorb(static_cast<int>(gi),
                   exactalg::sub(exactalg::mul(g, cand), rhs));
        }
        absorb(static_cast<int>(gens.size()), wz_d(cand));
        return v;
    };

    // solve per parity sector (the sign in the graded conditions depends on
    // the candidate's parity, so sectors must not mix)
    for (int sector = 0; sector < 2; ++sector) {
        Rref rref;
        int cols = 0;
        for (const auto& mono : pool) {
            if (exactalg::odd_parity(mono) != (sector == 1)) continue;
            ++cols;
            Element cand;
            cand.pres = pres;
            cand.terms.emplace(mono, Rational(1));
            rref.insert(condition_vector(cand, sector == 1));
        }
        rep.nullspace_dim += cols - rref.rank();
    }

    // classifier output, expanded into the same box: a tight truncation
    // stops the exponentials at the box edge
    PresPtr boxed = build_presentation(q, n, xp_cap);
    auto listed = classify_central_cocycles(q, n, npi_bound);
    Rref span;
    rep.classifier_inside = true;
    for (const auto& d : listed) {
        Element f = expand_cocycle(d, boxed);
        bool odd = !f.terms.empty() && exactalg::odd_parity(f.terms.begin()->first);
        Element boxed_f;
        boxed_f.pres = pres;
        std::map<long, Rational> coords;
        for (const auto& [mo, c] : f.terms) {
            boxed_f.terms.emplace(mo, c);
            coords.emplace(row_id(mo), c);
        }
        if (!condition_vector(boxed_f, odd).empty())
            rep.classifier_inside = false;
        span.insert(std::move(coords));
    }
    rep.classifier_dim = span.rank();
    rep.nothing_outside =
        rep.classifier_inside && rep.nullspace_dim == rep.classifier_dim;
    return rep;
}

}  // namespace qsuper
