#include "exactalg/element.h"

#include <algorithm>
#include <tuple>

namespace exactalg {

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::X: return "x";
        case Kind::Theta: return "theta";
        case Kind::P: return "p";
        case Kind::Pi: return "pi";
        case Kind::DP: return "dp";
        case Kind::DPi: return "dpi";
    }
    return "?";
}

std::optional<Kind> kind_from_name(const std::string& s) {
    for (int i = 0; i < kKindCount; ++i) {
        Kind k = static_cast<Kind>(i);
        if (s == kind_name(k)) return k;
    }
    return std::nullopt;
}

bool kind_nilpotent(Kind k) {
    return k == Kind::Theta || k == Kind::Pi || k == Kind::DP;
}

std::pair<int, int> kind_bidegree(Kind k) {
    switch (k) {
        case Kind::X: return {0, 0};
        case Kind::Theta: return {1, 0};
        case Kind::P: return {0, 0};
        case Kind::Pi: return {-1, 0};
        case Kind::DP: return {0, 1};
        case Kind::DPi: return {-1, 1};
    }
    return {0, 0};
}

bool kind_odd(Kind k) {
    auto [a, b] = kind_bidegree(k);
    return ((a + b) % 2 + 2) % 2 == 1;
}

bool operator==(const Factor& a, const Factor& b) {
    return a.kind == b.kind && a.index == b.index && a.power == b.power;
}

static std::tuple<int, int, int> factor_key(const Factor& f) {
    return {static_cast<int>(f.kind), f.index, f.power};
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [](const Factor& x, const Factor& y) { return factor_key(x) < factor_key(y); });
}

int p_degree(const Monomial& m) {
    int d = 0;
    for (const auto& f : m)
        if (f.kind == Kind::P) d += f.power;
    return d;
}

int x_degree(const Monomial& m) {
    int d = 0;
    for (const auto& f : m)
        if (f.kind == Kind::X) d += f.power;
    return d;
}

std::pair<int, int> bidegree(const Monomial& m) {
    int a = 0, b = 0;
    for (const auto& f : m) {
        auto [da, db] = kind_bidegree(f.kind);
        a += da * f.power;
        b += db * f.power;
    }
    return {a, b};
}

int total_degree(const Monomial& m) {
    auto [a, b] = bidegree(m);
    return a + b;
}

bool odd_parity(const Monomial& m) {
    return ((total_degree(m) % 2) + 2) % 2 == 1;
}

PresPtr make_presentation(Presentation p) {
    if (p.n < 0 || p.m < 0) throw presentation_error("negative dimension");
    if (static_cast<int>(p.q.size()) != p.m)
        throw presentation_error("q matrix must have m rows");
    for (const auto& row : p.q) {
        if (static_cast<int>(row.size()) != p.n)
            throw presentation_error("q matrix row must have n entries");
        for (const auto& e : row)
            if (e == 0) throw presentation_error("q entries must be nonzero");
    }
    if (p.weyl_form) {
        const auto& w = *p.weyl_form;
        if (static_cast<int>(w.size()) != p.n)
            throw presentation_error("weyl_form must be n x n");
        for (int i = 0; i < p.n; ++i) {
            if (static_cast<int>(w[i].size()) != p.n)
                throw presentation_error("weyl_form must be n x n");
            for (int j = 0; j < p.n; ++j)
                if (w[i][j] != -w[j][i])
                    throw presentation_error("weyl_form must be antisymmetric");
        }
    }
    if (p.truncation && *p.truncation < 0)
        throw presentation_error("negative truncation");
    return std::make_shared<const Presentation>(std::move(p));
}

std::optional<int> wm_min(std::optional<int> a, std::optional<int> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

std::optional<int> wm_shift(std::optional<int> a, int delta) {
    if (!a) return a;
    return std::max(0, *a + delta);
}

Element make_scalar(const Rational& c, PresPtr pres) {
    Element e;
    e.pres = std::move(pres);
    if (c != 0) e.terms.emplace(Monomial{}, c);
    return e;
}

static void check_index(const PresPtr& pres, Kind k, int index) {
    if (!pres) throw presentation_error("generator needs a presentation");
    int limit = (k == Kind::X || k == Kind::P || k == Kind::DP) ? pres->n : pres->m;
    if (index < 1 || index > limit)
        throw presentation_error(std::string("index out of range for ") + kind_name(k));
}

Element make_generator(PresPtr pres, Kind k, int index, int power) {
    check_index(pres, k, index);
    if (power < 0) throw presentation_error("negative power");
    if (power == 0) return make_scalar(1, pres);
    return normal_form(pres, {Factor{k, index, power}});
}

namespace {

// Rewrite rule for an adjacent out-of-order pair "g f" -> c * "f g" (+ tail
// handled separately for the two inhomogeneous relations).
enum class Rule { Scale, WeylPX, PiTheta };

struct SwapRule {
    Rule rule = Rule::Scale;
    Rational c = 1;
};

Rational q_entry(const Presentation& pres, int a, int i) {
    return pres.q[a - 1][i - 1];
}

SwapRule swap_rule(const Presentation& pres, const Factor& g, const Factor& f) {
    const Kind gk = g.kind, fk = f.kind;
    if (gk == fk) {
        // same kind, out-of-order index
        if (gk == Kind::DP || gk == Kind::DPi) return {Rule::Scale, -1};
        return {Rule::Scale, 1};
    }
    switch (gk) {
        case Kind::Theta:
            // theta^a x^i = q_{ai} x^i theta^a
            return {Rule::Scale, q_entry(pres, g.index, f.index)};
        case Kind::P:
            if (fk == Kind::X) {
                if (pres.weyl && g.index == f.index) return {Rule::WeylPX, 0};
                return {Rule::Scale, 1};
            }
            // p_i theta^a = q_{ai} theta^a p_i
            return {Rule::Scale, q_entry(pres, f.index, g.index)};
        case Kind::Pi:
            if (fk == Kind::X)
                return {Rule::Scale, 1 / q_entry(pres, g.index, f.index)};
            if (fk == Kind::Theta) {
                if (g.index == f.index) return {Rule::PiTheta, 0};
                return {Rule::Scale, 1};
            }
            // pi_a p_i = q_{ai} p_i pi_a
            return {Rule::Scale, q_entry(pres, g.index, f.index)};
        case Kind::DP:
            if (fk == Kind::X || fk == Kind::P) return {Rule::Scale, 1};
            if (fk == Kind::Theta)
                return {Rule::Scale, -q_entry(pres, f.index, g.index)};
            // dp_i pi_a = -q_{ai}^{-1} pi_a dp_i
            return {Rule::Scale, -1 / q_entry(pres, f.index, g.index)};
        case Kind::DPi:
            if (fk == Kind::X)
                return {Rule::Scale, 1 / q_entry(pres, g.index, f.index)};
            if (fk == Kind::Theta || fk == Kind::Pi)
                return {Rule::Scale, g.index == f.index ? Rational(1) : Rational(-1)};
            if (fk == Kind::P)
                return {Rule::Scale, q_entry(pres, g.index, f.index)};
            // dpi_a dp_i = q_{ai} dp_i dpi_a
            return {Rule::Scale, q_entry(pres, g.index, f.index)};
        default:
            break;
    }
    throw algebra_error("unexpected factor pair");
}

Rational rational_pow(const Rational& c, int e) {
    Rational r = 1;
    Rational base = c;
    int n = e;
    if (n < 0) {
        base = 1 / base;
        n = -n;
    }
    for (; n > 0; n >>= 1) {
        if (n & 1) r *= base;
        base *= base;
    }
    return r;
}

Rational binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Rational r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - j + 1) / j;
    return r;
}

struct WorkItem {
    std::vector<Factor> word;
    Rational coeff;
};

}  // namespace

Element normal_form(PresPtr pres, const std::vector<Factor>& word,
                    const Rational& coeff) {
    if (!pres) throw presentation_error("normal_form needs a presentation");
    for (const auto& f : word) check_index(pres, f.kind, f.index);

    Element out;
    out.pres = pres;
    if (coeff == 0) return out;

    bool dropped = false;
    std::vector<WorkItem> stack;
    stack.push_back({word, coeff});

    while (!stack.empty()) {
        WorkItem it = std::move(stack.back());
        stack.pop_back();
        if (it.coeff == 0) continue;
        auto& w = it.word;

        bool dead = false, changed = true;
        while (changed && !dead) {
            changed = false;
            for (size_t i = 0; i < w.size(); ++i) {
                if (w[i].power == 0) {
                    w.erase(w.begin() + i);
                    changed = true;
                    break;
                }
                if (i + 1 >= w.size()) continue;
                Factor &g = w[i], &f = w[i + 1];
                if (g.kind == f.kind && g.index == f.index) {
                    if (kind_nilpotent(g.kind)) {
                        dead = true;
                        break;
                    }
                    g.power += f.power;
                    w.erase(w.begin() + i + 1);
                    changed = true;
                    break;
                }
                if (std::make_pair(static_cast<int>(g.kind), g.index) <=
                    std::make_pair(static_cast<int>(f.kind), f.index))
                    continue;

                SwapRule rule = swap_rule(*pres, g, f);
                if (rule.rule == Rule::Scale) {
                    it.coeff *= rational_pow(rule.c, g.power * f.power);
                    std::swap(w[i], w[i + 1]);
                    changed = true;
                    break;
                }
                if (rule.rule == Rule::WeylPX) {
                    // p^b x^a = sum_k (-1)^k k! C(a,k) C(b,k) x^{a-k} p^{b-k}
                    int b = g.power, a = f.power, idx = g.index;
                    std::vector<Factor> head(w.begin(), w.begin() + i);
                    std::vector<Factor> tail(w.begin() + i + 2, w.end());
                    Rational kfact = 1;
                    for (int k = 0; k <= std::min(a, b); ++k) {
                        if (k > 0) kfact *= k;
                        Rational c = it.coeff * kfact * binomial(a, k) * binomial(b, k);
                        if (k % 2) c = -c;
                        std::vector<Factor> nw = head;
                        if (a - k > 0) nw.push_back({Kind::X, idx, a - k});
                        if (b - k > 0) nw.push_back({Kind::P, idx, b - k});
                        nw.insert(nw.end(), tail.begin(), tail.end());
                        stack.push_back({std::move(nw), c});
                    }
                    dead = true;  // replaced by branches
                    break;
                }
                // pi_a theta^a = 1 - theta^a pi_a  (powers are 1: nilpotent)
                std::vector<Factor> head(w.begin(), w.begin() + i);
                std::vector<Factor> tail(w.begin() + i + 2, w.end());
                std::vector<Factor> unitw = head;
                unitw.insert(unitw.end(), tail.begin(), tail.end());
                stack.push_back({std::move(unitw), it.coeff});
                std::vector<Factor> swapped = head;
                swapped.push_back({Kind::Theta, g.index, 1});
                swapped.push_back({Kind::Pi, g.index, 1});
                swapped.insert(swapped.end(), tail.begin(), tail.end());
                stack.push_back({std::move(swapped), -it.coeff});
                dead = true;
                break;
            }
        }
        if (dead) continue;

        if (pres->truncation && p_degree(w) > *pres->truncation) {
            dropped = true;
            continue;
        }
        auto [pos, fresh] = out.terms.emplace(std::move(w), it.coeff);
        if (!fresh) {
            pos->second += it.coeff;
            if (pos->second == 0) out.terms.erase(pos);
        }
    }

    if (dropped) out.reliable_below = *pres->truncation + 1;
    return out;
}

static PresPtr unify(const Element& a, const Element& b) {
    if (a.pres && b.pres) {
        if (a.pres != b.pres)
            throw presentation_error("elements from different presentations");
        return a.pres;
    }
    return a.pres ? a.pres : b.pres;
}

Element add(const Element& a, const Element& b) {
    Element out;
    out.pres = unify(a, b);
    out.terms = a.terms;
    for (const auto& [m, c] : b.terms) {
        auto [pos, fresh] = out.terms.emplace(m, c);
        if (!fresh) {
            pos->second += c;
            if (pos->second == 0) out.terms.erase(pos);
        }
    }
    out.reliable_below = wm_min(a.reliable_below, b.reliable_below);
    return out;
}

Element sub(const Element& a, const Element& b) {
    return add(a, scale(-1, b));
}

Element scale(const Rational& c, const Element& a) {
    Element out;
    out.pres = a.pres;
    out.reliable_below = a.reliable_below;
    if (c == 0) return out;
    for (const auto& [m, v] : a.terms) out.terms.emplace(m, c * v);
    return out;
}

int max_x_degree(const Element& a) {
    int d = 0;
    for (const auto& [m, c] : a.terms) d = std::max(d, x_degree(m));
    return d;
}

Element mul(const Element& a, const Element& b) {
    PresPtr pres = unify(a, b);
    Element out;
    out.pres = pres;
    // In the Weyl case a's p-block crosses b's x-block, so terms missing in
    // a above its watermark can contaminate output as low as the watermark
    // minus b's x-degree.  b's missing terms stay at their own p-degree.
    out.reliable_below =
        wm_min(wm_shift(a.reliable_below, -max_x_degree(b)), b.reliable_below);
    for (const auto& [ma, ca] : a.terms) {
        for (const auto& [mb, cb] : b.terms) {
            std::vector<Factor> w = ma;
            w.insert(w.end(), mb.begin(), mb.end());
            Element part = pres ? normal_form(pres, w, ca * cb) : [&] {
                Element e;
                if (ca * cb != 0) e.terms.emplace(w, ca * cb);
                return e;
            }();
            out.reliable_below = wm_min(out.reliable_below, part.reliable_below);
            for (const auto& [m, c] : part.terms) {
                auto [pos, fresh] = out.terms.emplace(m, c);
                if (!fresh) {
                    pos->second += c;
                    if (pos->second == 0) out.terms.erase(pos);
                }
            }
        }
    }
    return out;
}

Element partial_derivative(Kind k, int index, const Element& a) {
    if (k != Kind::X && k != Kind::P)
        throw unsupported_error("partial_derivative supports x and p kinds only");
    Element out;
    out.pres = a.pres;
    out.reliable_below =
        k == Kind::P ? wm_shift(a.reliable_below, -1) : a.reliable_below;
    for (const auto& [m, c] : a.terms) {
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i].kind != k || m[i].index != index) continue;
            Monomial nm = m;
            Rational nc = c * m[i].power;
            if (nm[i].power == 1)
                nm.erase(nm.begin() + i);
            else
                nm[i].power -= 1;
            auto [pos, fresh] = out.terms.emplace(std::move(nm), nc);
            if (!fresh) {
                pos->second += nc;
                if (pos->second == 0) out.terms.erase(pos);
            }
            break;  // factors are merged, only one slot per (kind, index)
        }
    }
    return out;
}

Element apply_automorphism(const std::vector<Rational>& eigen, const Element& a) {
    if (a.pres && static_cast<int>(eigen.size()) != a.pres->n)
        throw presentation_error("eigenvalue list length must equal n");
    for (const auto& e : eigen)
        if (e == 0) throw presentation_error("zero eigenvalue");
    Element out;
    out.pres = a.pres;
    out.reliable_below = a.reliable_below;
    for (const auto& [m, c] : a.terms) {
        Rational factor = 1;
        for (const auto& f : m) {
            if (f.index > static_cast<int>(eigen.size())) {
                if (f.kind == Kind::X || f.kind == Kind::P || f.kind == Kind::DP)
                    throw presentation_error("eigenvalue list too short");
                continue;
            }
            const Rational& q = eigen[f.index - 1];
            if (f.kind == Kind::X)
                factor *= rational_pow(1 / q, f.power);
            else if (f.kind == Kind::P || f.kind == Kind::DP)
                factor *= rational_pow(q, f.power);
        }
        out.terms.emplace(m, c * factor);
    }
    return out;
}

bool is_zero(const Element& a) { return a.terms.empty(); }

bool equal(const Element& a, const Element& b) {
    return a.terms == b.terms;
}

Rational coefficient(const Element& a, const Monomial& m) {
    auto it = a.terms.find(m);
    return it == a.terms.end() ? Rational(0) : it->second;
}

void require_reliable(const Element& a, int degree_needed) {
    if (a.reliable_below && *a.reliable_below < degree_needed)
        throw truncation_error("requested degree " + std::to_string(degree_needed) +
                               " exceeds reliable window " +
                               std::to_string(*a.reliable_below));
}

}  // namespace exactalg
