#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "exactalg/element.h"
#include "exactalg/sexpr.h"
#include "gradedmaps/maps.h"
#include "resolution/algebra.h"

#include <map>
#include <string>
#include <vector>

using namespace exactalg;
using namespace resolution;
using namespace gradedmaps;

namespace {

bool odd(int d) { return ((d % 2) + 2) % 2 == 1; }

ResolutionAlgebra plain_alg() {
    return make_resolution(2, BulletKind::Polynomial, {}, std::nullopt);
}

Element parse(const ResolutionAlgebra& alg, const std::string& s) {
    return parse_sexpr(s, alg.pres);
}

PairElement pe(const ResolutionAlgebra& alg, const std::string& a,
               const std::string& b) {
    return pair_of(parse(alg, a), parse(alg, b));
}

// the product as a structure map: sign (-1)^{|u|} against the suspension
GMap m2_map(const ResolutionAlgebra& alg) {
    GMap f;
    f.arity = 2;
    f.deg1 = 1;
    f.deg2 = 0;
    f.label = "m2";
    f.eval = [alg](const std::vector<PairElement>& in) {
        PairElement acc{make_scalar(0, alg.pres), make_scalar(0, alg.pres)};
        for (const auto& [du, part] : homogeneous_parts(in[0])) {
            PairElement prod = bullet_product(alg, part, in[1]);
            acc = p_add(acc, odd(du) ? p_scale(-1, prod) : prod);
        }
        return acc;
    };
    return f;
}

GMap d_map(PresPtr pres) {
    GMap f;
    f.arity = 1;
    f.deg2 = 1;
    f.label = "d";
    f.eval = [](const std::vector<PairElement>& in) { return de_rham_d(in[0]); };
    (void)pres;
    return f;
}

GMap h_map() {
    GMap f;
    f.arity = 1;
    f.deg2 = -1;
    f.label = "h";
    f.eval = [](const std::vector<PairElement>& in) { return homotopy_h(in[0]); };
    return f;
}

GMap lambda_map(const ResolutionAlgebra& alg) {
    return constant_map(pe(alg, "(+ (mon 1 (dp 1 1) (dp 2 1)))", "(+)"), -1, 2);
}

GMap gamma_d_map(const ResolutionAlgebra& alg, const Element& gamma) {
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

// t^k coefficient of the two-variable graded star product, as a structure map
GMap star_coeff_map(const ResolutionAlgebra& alg, int k) {
    GMap f;
    f.arity = 2;
    f.deg1 = 1;
    f.deg2 = 0;
    f.label = "star" + std::to_string(k);
    f.eval = [alg, k](const std::vector<PairElement>& in) {
        Rational denom = 1;
        for (int j = 1; j <= k; ++j) denom *= 2 * j;
        PairElement acc{make_scalar(0, alg.pres), make_scalar(0, alg.pres)};
        // sum over direction words in {(1,2), (2,1)}^k
        for (int mask = 0; mask < (1 << k); ++mask) {
            Rational sgn = 1;
            auto app = [&](const Element& e, bool first_slot) {
                Element r = e;
                for (int b = 0; b < k; ++b) {
                    bool fwd = mask & (1 << b);
                    int i = first_slot ? (fwd ? 1 : 2) : (fwd ? 2 : 1);
                    r = partial_derivative(Kind::X, i, r);
                }
                return r;
            };
            for (int b = 0; b < k; ++b)
                if (!(mask & (1 << b))) sgn = -sgn;
            for (const auto& [du, part] : homogeneous_parts(in[0])) {
                Element ua = app(part.a, true), ub = app(part.b, true);
                Element va = app(in[1].a, false), vb = app(in[1].b, false);
                PairElement prod = bullet_product(
                    alg, PairElement{ua, ub}, PairElement{va, vb});
                if (odd(du)) prod = p_scale(-1, prod);
                acc = p_add(acc, p_scale(sgn / denom, prod));
            }
        }
        return acc;
    };
    return f;
}

std::vector<PairElement> small_basis(const ResolutionAlgebra& alg) {
    return {
        pe(alg, "(+ (mon 1 (x 1 1)))", "(+)"),
        pe(alg, "(+ (mon 1 (p 1 1)))", "(+)"),
        pe(alg, "(+ (mon 1 (dp 1 1)))", "(+)"),
        pe(alg, "(+)", "(+ (mon 1))"),
        pe(alg, "(+)", "(+ (mon 1 (p 2 1)))"),
    };
}

void all_tuples(const std::vector<PairElement>& basis, int arity,
                const std::function<void(const std::vector<PairElement>&)>& fn) {
    std::vector<size_t> idx(arity, 0);
    if (arity == 0) {
        fn({});
        return;
    }
    for (;;) {
        std::vector<PairElement> t;
        t.reserve(arity);
        for (int i = 0; i < arity; ++i) t.push_back(basis[idx[i]]);
        fn(t);
        int i = 0;
        for (; i < arity; ++i) {
            if (++idx[i] < basis.size()) break;
            idx[i] = 0;
        }
        if (i == arity) break;
    }
}

std::string word_key(const std::vector<PairElement>& w) {
    std::string k;
    for (const auto& s : w) k += p_to_string(s) + ";";
    return k;
}

int slot_vdeg(const PairElement& v) {
    auto parts = homogeneous_parts(v);
    REQUIRE(parts.size() == 1);
    return parts.front().first;
}

}  // namespace

TEST_CASE("insertion composition anchors") {
    auto alg = plain_alg();
    GMap m2 = m2_map(alg);
    GMap id = identity_map(alg.pres);
    auto basis = small_basis(alg);

    GMap m2_id = compose_circle(m2, id);
    GMap id_m2 = compose_circle(id, m2);
    GMap br = gerstenhaber_bracket(m2, id);
    all_tuples(basis, 2, [&](const std::vector<PairElement>& t) {
        PairElement direct = m2.eval(t);
        CHECK(p_equal(m2_id.eval(t), p_scale(2, direct)));
        CHECK(p_equal(id_m2.eval(t), direct));
        CHECK(p_equal(br.eval(t), direct));
    });

    // arity-0 left factor has no insertion slots
    GMap lam = lambda_map(alg);
    GMap lam_m2 = compose_circle(lam, m2);
    all_tuples(basis, 1, [&](const std::vector<PairElement>& t) {
        CHECK(p_is_zero(lam_m2.eval(t)));
    });

    // inserting an arity-0 map feeds its value into each slot
    GMap m2_lam = compose_circle(m2, lam);
    PairElement lv = lam.eval({});
    all_tuples(basis, 1, [&](const std::vector<PairElement>& t) {
        PairElement want = m2.eval({lv, t[0]});
        PairElement second = m2.eval({t[0], lv});
        int sg = total_degree(lam) * slot_vdeg(t[0]);
        want = p_add(want, odd(sg) ? p_scale(-1, second) : second);
        CHECK(p_equal(m2_lam.eval(t), want));
    });
}

TEST_CASE("bracket skew symmetry across the map zoo") {
    auto alg = plain_alg();
    Element gamma = parse(alg, "(+ (mon 1 (dp 1 1) (dp 2 1)))");
    std::vector<GMap> zoo = {d_map(alg.pres), h_map(),        m2_map(alg),
                             lambda_map(alg), identity_map(alg.pres),
                             gamma_d_map(alg, gamma)};
    auto basis = small_basis(alg);
    for (const auto& f : zoo)
        for (const auto& g : zoo) {
            GMap lhs = gerstenhaber_bracket(f, g);
            GMap rhs = gerstenhaber_bracket(g, f);
            Rational s =
                odd(total_degree(f) * total_degree(g)) ? -1 : 1;
            if (lhs.arity > 3) continue;
            all_tuples(basis, lhs.arity,
                       [&](const std::vector<PairElement>& t) {
                           PairElement sum =
                               p_add(lhs.eval(t), p_scale(s, rhs.eval(t)));
                           CHECK(p_is_zero(sum));
                       });
        }
}

TEST_CASE("graded Jacobi identity") {
    auto alg = plain_alg();
    std::vector<GMap> zoo = {d_map(alg.pres), m2_map(alg), lambda_map(alg),
                             h_map()};
    auto basis = small_basis(alg);
    for (const auto& f : zoo)
        for (const auto& g : zoo)
            for (const auto& h : zoo) {
                GMap t1 = gerstenhaber_bracket(gerstenhaber_bracket(f, g), h);
                GMap t2 = gerstenhaber_bracket(f, gerstenhaber_bracket(g, h));
                GMap t3 = gerstenhaber_bracket(g, gerstenhaber_bracket(f, h));
                Rational s =
                    odd(total_degree(f) * total_degree(g)) ? 1 : -1;
                // [[f,g],h] - [f,[g,h]] + (-1)^{|f||g|}[g,[f,h]] = 0
                int arity = t1.arity;
                if (arity > 3) continue;
                all_tuples(basis, arity,
                           [&](const std::vector<PairElement>& t) {
                               PairElement v = p_sub(t1.eval(t), t2.eval(t));
                               PairElement w = t3.eval(t);
                               v = p_add(v, p_scale(-s, w));
                               CHECK(p_is_zero(v));
                           });
            }
}

TEST_CASE("coderivation lifts against the deconcatenation coproduct") {
    auto alg = plain_alg();
    auto basis = small_basis(alg);
    std::vector<GMap> cand = {d_map(alg.pres), m2_map(alg), lambda_map(alg)};
    for (const auto& f : cand) {
        WordOp lift = lift_coderivation(f);
        int fdeg = total_degree(f);
        for (int n = 0; n <= 3; ++n) {
            all_tuples(basis, n, [&](const std::vector<PairElement>& w) {
                // both sides live in T(V) (x) T(V): key by split words
                std::map<std::pair<std::string, std::string>, Rational> lhs,
                    rhs;
                auto addto =
                    [](std::map<std::pair<std::string, std::string>,
                               Rational>& m,
                       const std::string& a, const std::string& b,
                       const Rational& c) {
                        auto key = std::make_pair(a, b);
                        m[key] += c;
                        if (m[key] == 0) m.erase(key);
                    };
                // lhs: Delta applied to every word of lift(w)
                for (const auto& term : lift(w).terms)
                    for (size_t i = 0; i <= term.word.size(); ++i) {
                        std::vector<PairElement> L(term.word.begin(),
                                                   term.word.begin() + i);
                        std::vector<PairElement> R(term.word.begin() + i,
                                                   term.word.end());
                        addto(lhs, word_key(L), word_key(R), term.c);
                    }
                // rhs: (lift (x) 1 + 1 (x) lift) applied to Delta(w)
                for (size_t i = 0; i <= w.size(); ++i) {
                    std::vector<PairElement> L(w.begin(), w.begin() + i);
                    std::vector<PairElement> R(w.begin() + i, w.end());
                    for (const auto& t : lift(L).terms)
                        addto(rhs, word_key(t.word), word_key(R), t.c);
                    int ldeg = 0;
                    for (const auto& v : L) ldeg += slot_vdeg(v);
                    Rational s = odd(fdeg * ldeg) ? -1 : 1;
                    for (const auto& t : lift(R).terms)
                        addto(rhs, word_key(L), word_key(t.word), s * t.c);
                }
                CHECK(lhs == rhs);
            });
        }
    }
}

TEST_CASE("bracket equals the commutator of lifts on the diagonal arity") {
    auto alg = plain_alg();
    auto basis = small_basis(alg);
    std::vector<GMap> cand = {d_map(alg.pres), m2_map(alg), lambda_map(alg),
                              h_map()};
    for (const auto& f : cand)
        for (const auto& g : cand) {
            GMap br = gerstenhaber_bracket(f, g);
            WordOp lf = lift_coderivation(f), lg = lift_coderivation(g);
            Rational s = odd(total_degree(f) * total_degree(g)) ? 1 : -1;
            int n = br.arity;
            if (n > 3) continue;
            all_tuples(basis, n, [&](const std::vector<PairElement>& w) {
                Tensor comm = tensor_add(
                    apply_word_op(lf, lg(w)),
                    tensor_scale(s, apply_word_op(lg, lf(w))));
                PairElement via_lift = corestriction(comm, alg.pres);
                CHECK(p_equal(via_lift, br.eval(w)));
            });
        }
}

TEST_CASE("Maurer-Cartan residual checker") {
    auto alg = plain_alg();
    GMap m2 = m2_map(alg);

    std::vector<std::pair<PairElement, int>> basis;
    for (const char* s :
         {"(+ (mon 1 (x 1 1)))", "(+ (mon 1 (x 2 1)))", "(+ (mon 1 (p 1 1)))",
          "(+ (mon 1 (x 1 1) (x 2 1)))", "(+ (mon 1 (dp 2 1)))"}) {
        Element e = parse(alg, s);
        int deg = 0;
        for (const auto& [m, c] : e.terms)
            for (const auto& f : m) deg += f.power;
        basis.emplace_back(pair_of(e, make_scalar(0, alg.pres)), deg);
        basis.emplace_back(pair_of(make_scalar(0, alg.pres), e), deg);
    }

    // associative background structure alone
    McReport undeformed = check_mc({fam_of(m2)}, 2, 3, 3, basis);
    CHECK(undeformed.pass);

    // graded star product through order two, on coordinate monomials
    std::vector<std::pair<PairElement, int>> xbasis;
    for (const char* s : {"(+ (mon 1 (x 1 1)))", "(+ (mon 1 (x 2 1)))",
                          "(+ (mon 1 (x 1 2)))", "(+ (mon 1 (x 1 1) (x 2 1)))",
                          "(+ (mon 1 (x 2 2)))"}) {
        Element e = parse(alg, s);
        int deg = 0;
        for (const auto& [m, c] : e.terms)
            for (const auto& f : m) deg += f.power;
        xbasis.emplace_back(pair_of(e, make_scalar(0, alg.pres)), deg);
    }
    Series moyal = {fam_of(m2), fam_of(star_coeff_map(alg, 1)),
                    fam_of(star_coeff_map(alg, 2))};
    McReport star = check_mc(moyal, 2, 3, 4, xbasis);
    CHECK(star.pass);

    // a non-cocycle first-order term must be flagged at order 1
    GMap badmu;
    badmu.arity = 2;
    badmu.deg1 = 1;
    badmu.label = "bad";
    badmu.eval = [alg](const std::vector<PairElement>& in) {
        PairElement der{partial_derivative(Kind::X, 1, in[1].a),
                        partial_derivative(Kind::X, 1, in[1].b)};
        return bullet_product(alg, in[0], der);
    };
    McReport bad = check_mc({fam_of(m2), fam_of(badmu)}, 1, 3, 4, xbasis);
    CHECK(!bad.pass);
    bool seen = false;
    for (const auto& line : bad.lines)
        if (line.find("order 1") != std::string::npos &&
            line.find("nonzero") != std::string::npos)
            seen = true;
    CHECK(seen);
}

TEST_CASE("gauge transformations") {
    auto alg = plain_alg();
    GMap m2 = m2_map(alg);
    GMap c1 = star_coeff_map(alg, 1);

    GMap euler;
    euler.arity = 1;
    euler.label = "xdx";
    euler.eval = [alg](const std::vector<PairElement>& in) {
        Element x1 = make_generator(alg.pres, Kind::X, 1);
        return PairElement{
            mul(x1, partial_derivative(Kind::X, 1, in[0].a)),
            mul(x1, partial_derivative(Kind::X, 1, in[0].b))};
    };

    std::vector<std::pair<PairElement, int>> xbasis;
    for (const char* s : {"(+ (mon 1 (x 1 1)))", "(+ (mon 1 (x 2 1)))",
                          "(+ (mon 1 (x 1 1) (x 2 1)))"}) {
        Element e = parse(alg, s);
        xbasis.emplace_back(pair_of(e, make_scalar(0, alg.pres)), 1);
    }
    std::vector<PairElement> belems;
    for (auto& [e, dg] : xbasis) belems.push_back(e);

    // zero gauge leaves the series alone
    Series base = {fam_of(m2), fam_of(c1)};
    Series fixed = apply_gauge(zero_map(1, 0, 0, alg.pres), base, 1);
    all_tuples(belems, 2, [&](const std::vector<PairElement>& t) {
        CHECK(p_equal(fam_eval(fixed[0], t), fam_eval(base[0], t)));
        CHECK(p_equal(fam_eval(fixed[1], t), fam_eval(base[1], t)));
    });

    // first-order coefficient picks up [f, m.(0)]
    Series moved = apply_gauge(euler, base, 1);
    GFam want = fam_add(fam_of(c1), fam_bracket(fam_of(euler), fam_of(m2)));
    all_tuples(belems, 2, [&](const std::vector<PairElement>& t) {
        CHECK(p_equal(fam_eval(moved[1], t), fam_eval(want, t)));
    });

    // gauging the trivial series preserves the MC property
    Series gauged = apply_gauge(euler, {fam_of(m2)}, 1);
    McReport rep = check_mc(gauged, 1, 3, 3, xbasis);
    CHECK(rep.pass);

    CHECK_THROWS_AS(apply_gauge(d_map(alg.pres), base, 1), algebra_error);
}

TEST_CASE("tensor canonical form") {
    auto alg = plain_alg();
    Element x1 = parse(alg, "(+ (mon 1 (x 1 1)))");
    Element x2 = parse(alg, "(+ (mon 1 (x 2 1)))");
    Element sum = add(x1, scale(2, x2));
    PairElement ps = pair_of(sum, make_scalar(0, alg.pres));
    PairElement p1 = pair_of(x1, make_scalar(0, alg.pres));
    PairElement p2 = pair_of(x2, make_scalar(0, alg.pres));

    Tensor t = tensor_of_word(1, {ps, ps});
    Tensor manual = tensor_zero();
    manual = tensor_add(manual, tensor_of_word(1, {p1, p1}));
    manual = tensor_add(manual, tensor_of_word(2, {p1, p2}));
    manual = tensor_add(manual, tensor_of_word(2, {p2, p1}));
    manual = tensor_add(manual, tensor_of_word(4, {p2, p2}));
    CHECK(tensor_equal(t, manual));
    CHECK(tensor_is_zero(tensor_add(t, tensor_scale(-1, manual))));

    Tensor single = tensor_of_word(3, {ps});
    PairElement back = corestriction(single, alg.pres);
    CHECK(p_equal(back, p_scale(3, ps)));
}
