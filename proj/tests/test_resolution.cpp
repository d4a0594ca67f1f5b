#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

#include <random>

using namespace dsys;
using namespace dsys::testing;

namespace {

// y -> ((d1 + x2) y, d2 y) over Q(x1, x2).
OpMatrix pair_operator(const Presentation& p) {
    DiffOp P = DiffOp::d(p, mi({1, 0})) + DiffOp::constant(p, sym(p, "x2"));
    DiffOp U = DiffOp::d(p, 1);
    return OpMatrix::from_rows({{P}, {U}}, 1, p);
}

// y -> (d33 y - x2 d11 y, d22 y) over Q(x1, x2, x3).
OpMatrix janet_operator(const Presentation& p) {
    DiffOp A = DiffOp::d(p, mi({0, 0, 2})) -
               DiffOp::monomial(p, sym(p, "x2"), mi({2, 0, 0}));
    DiffOp B = DiffOp::d(p, mi({0, 2, 0}));
    return OpMatrix::from_rows({{A}, {B}}, 1, p);
}

int oprow_order(const std::vector<DiffOp>& ops) {
    int o = -1;
    for (auto& op : ops) o = std::max(o, op.order());
    return o;
}

// Completeness oracle: at window w the left kernel of the prolonged matrix
// of D is generated by prolongations of the CC rows (rank equality over K).
bool cc_complete_at(PresPtr pres, const OpMatrix& D, const OpMatrix& C, int w) {
    LinearSystem comb = combined_system(pres, D);
    LinearSystem P = comb.prolong(w);
    int m = D.cols();
    struct SplitLess {
        int split;
        bool operator()(const JetCoord& a, const JetCoord& b) const {
            bool ua = a.k >= split, ub = b.k >= split;
            if (ua != ub) return !ua;
            return JetCoord::cmp(a, b) < 0;
        }
    };
    Eliminator<JetCoord, SplitLess> el(SplitLess{m});
    for (auto& row : P.rows()) {
        Eliminator<JetCoord, SplitLess>::Row r;
        for (auto& [j, c] : row) r[j] = c;
        el.insert(std::move(r));
    }
    long kernel = 0;
    for (auto& e : el.entries())
        if (e.pivot.k >= m) ++kernel;
    // Span of prolonged CC rows as u-jet vectors, same window of orders.
    int maxord = 0;
    for (auto& e : el.entries())
        if (e.pivot.k >= m)
            for (auto& [j, c] : e.row) maxord = std::max(maxord, j.mu.order());
    JetEliminator cc;
    long ccrank = 0;
    for (int r = 0; r < C.rows(); ++r) {
        auto ops = C.row(r);
        int ro = oprow_order(ops);
        JetRow base;
        for (int k = 0; k < C.cols(); ++k)
            for (auto& [mu, c] : ops[k].terms()) base[{k, mu}] = c;
        std::vector<std::pair<JetRow, int>> frontier{{base, 0}};
        if (ro <= maxord && cc.insert(base)) ++ccrank;
        for (int step = 0; step < maxord - ro; ++step) {
            std::vector<std::pair<JetRow, int>> next;
            for (auto& [rr, start] : frontier)
                for (int i = start; i < pres->n(); ++i) {
                    JetRow d = formal_derivative(*pres, rr, i);
                    int o = 0;
                    for (auto& [j, c] : d) o = std::max(o, j.mu.order());
                    if (o <= maxord && cc.insert(d)) ++ccrank;
                    next.push_back({std::move(d), i});
                }
            frontier = std::move(next);
        }
    }
    return ccrank == kernel;
}

} // namespace

TEST_CASE("compatibility conditions of the first-order pair") {
    auto p = trivial_pres(2);
    OpMatrix D = pair_operator(*p);
    OpMatrix C = compatibility_conditions(p, D);
    REQUIRE(C.rows() == 2);
    CHECK(C.order() == 2);
    for (int r = 0; r < 2; ++r) CHECK(C.row(r)[0].order() >= 0);
    CHECK(compose(*p, C, D).is_zero());

    // CC of the CC: a single first-order generator, equal to
    // d2 B - d1 A - x2 A modulo row operations.
    OpMatrix C2 = compatibility_conditions(p, C);
    REQUIRE(C2.rows() == 1);
    CHECK(C2.order() == 1);
    CHECK(compose(*p, C2, C).is_zero());
    CHECK(cc_complete_at(p, D, C, 4));
    CHECK(cc_complete_at(p, C, C2, 4));
}

TEST_CASE("free resolution of the first-order pair") {
    auto p = trivial_pres(2);
    PresentedModule M(1, pair_operator(*p));
    ResolutionReport rep = free_resolution(p, M, 6);
    CHECK(rep.ranks == std::vector<long>{1, 2, 2, 1});
    CHECK(rep.euler_characteristic == 0);
    CHECK(rep.composes_zero);
    CHECK(differential_rank(p, M) == 0);
}

TEST_CASE("free module has a length-zero resolution") {
    auto p = trivial_pres(2);
    PresentedModule M(1, OpMatrix(0, 1, *p));
    ResolutionReport rep = free_resolution(p, M, 4);
    CHECK(rep.ranks == std::vector<long>{1});
    CHECK(rep.euler_characteristic == 1);
    CHECK(differential_rank(p, M) == 1);
}

TEST_CASE("Janet operator has generating conditions of orders three and six") {
    auto p = trivial_pres(3);
    OpMatrix D = janet_operator(*p);
    Budget budget;
    OpMatrix C = compatibility_conditions(p, D, budget);
    REQUIRE(C.rows() == 2);
    std::vector<int> orders;
    for (int r = 0; r < 2; ++r) orders.push_back(oprow_order(C.row(r)));
    std::sort(orders.begin(), orders.end());
    CHECK(orders == std::vector<int>{3, 6});
    CHECK(compose(*p, C, D).is_zero());
    CHECK(cc_complete_at(p, D, C, 7));
}

TEST_CASE("reduce decides membership") {
    auto p = trivial_pres(2);
    OpMatrix D = pair_operator(*p);
    PresentedModule M(1, D);
    // Relations reduce to zero, and stay zero under left multiplication.
    for (int r = 0; r < D.rows(); ++r) {
        CHECK(reduce(p, D.row(r), M).member);
        std::vector<DiffOp> dr{compose(*p, DiffOp::d(*p, 0), D.at(r, 0))};
        CHECK(reduce(p, dr, M).member);
    }
    // The commutator [d2, x2] = 1 lies in this module, so even constants do.
    CHECK(reduce(p, {DiffOp::constant(*p, num(*p, 1))}, M).member);

    // A genuine non-member: d1 against the module generated by d2 alone.
    PresentedModule M2(1, OpMatrix::from_rows({{DiffOp::d(*p, 1)}}, 1, *p));
    auto rr = reduce(p, {DiffOp::d(*p, 0)}, M2);
    CHECK(!rr.member);
    CHECK(!rr.normal_form[0].is_zero());
}

TEST_CASE("scalar torsion membership from the constant-coefficient module") {
    // N presented by d^5 v + 3 d^4 v - 4 d^2 v - d^3 u + d u = 0 in (u, v).
    auto p = trivial_pres(1);
    DiffOp d = DiffOp::d(*p, 0);
    auto dpow = [&](int k) {
        MultiIndex mu(1);
        for (int i = 0; i < k; ++i) mu = mu.plus(0);
        return DiffOp::d(*p, mu);
    };
    std::vector<DiffOp> row{-dpow(3) + d,
                            dpow(5) + dpow(4).scale(num(*p, 3)) - dpow(2).scale(num(*p, 4))};
    OpMatrix N = OpMatrix::from_rows({row}, 2, *p);
    PresentedModule M(2, N);
    // z = (d+2)^2 y - d(d+1) u taken in the (u, y=d^2 v) presentation is
    // checked in the duality tests; here: the relation itself reduces.
    CHECK(reduce(p, row, M).member);
}

TEST_CASE("ore pairs") {
    auto p = trivial_pres(2);
    RatFun x2 = sym(*p, "x2");
    DiffOp P = DiffOp::d(*p, mi({1, 0})) + DiffOp::constant(*p, x2);
    DiffOp U = DiffOp::d(*p, 1);
    auto [V, Q] = ore_pair(p, P, U);
    CHECK(!V.is_zero());
    CHECK(compose(*p, V, P) == compose(*p, Q, U));
    CHECK(V.order() == 2);

    // U = 1: V = 1, Q = P.
    auto [V1, Q1] = ore_pair(p, P, DiffOp::constant(*p, num(*p, 1)));
    CHECK(compose(*p, V1, P) == Q1);
    CHECK(V1.order() == 0);

    // commuting case: P = d1, U = d2 -> V = d2, Q = d1 up to scale.
    auto [V2, Q2] = ore_pair(p, DiffOp::d(*p, 0), DiffOp::d(*p, 1));
    CHECK(compose(*p, V2, DiffOp::d(*p, 0)) == compose(*p, Q2, DiffOp::d(*p, 1)));
    CHECK(V2.order() == 1);
}

TEST_CASE("left inverse of the identity") {
    auto p = trivial_pres(2);
    OpMatrix I = OpMatrix::identity(*p, 2);
    auto L = left_inverse(p, I, 0);
    REQUIRE(L.has_value());
    CHECK(*L == I);
}

TEST_CASE("submodule sum reproduces the input-output equation") {
    auto p = trivial_pres(1);
    DiffOp d = DiffOp::d(*p, 0);
    auto dpow = [&](int k) {
        MultiIndex mu(1);
        for (int i = 0; i < k; ++i) mu = mu.plus(0);
        return DiffOp::d(*p, mu);
    };
    std::vector<DiffOp> rel{-dpow(3) + d,
                            dpow(5) + dpow(4).scale(num(*p, 3)) - dpow(2).scale(num(*p, 4))};
    PresentedModule N(2, OpMatrix::from_rows({rel}, 2, *p));
    OpMatrix gensL = OpMatrix::from_rows({{DiffOp::constant(*p, num(*p, 1)), DiffOp(*p)}},
                                         2, *p);
    OpMatrix gensM = OpMatrix::from_rows({{DiffOp(*p), dpow(2)}}, 2, *p);
    SubmoduleSum sum = submodule_sum(p, gensL, gensM, N);
    REQUIRE(sum.sum.relations.rows() == 1);
    // relation: (d^3 - d) ubar = (d^3 + 3d^2 - 4) ybar (up to sign/scale)
    DiffOp cu = sum.sum.relations.at(0, 0), cy = sum.sum.relations.at(0, 1);
    DiffOp expect_u = dpow(3) - d;
    DiffOp expect_y = -(dpow(3) + dpow(2).scale(num(*p, 3)) - DiffOp::constant(*p, num(*p, 4)));
    // normalize on the u-component lead
    RatFun lead = cu.terms().begin()->second;
    cu = cu.scale(lead.inverse());
    cy = cy.scale(lead.inverse());
    bool match = (cu == expect_u && cy == expect_y) ||
                 (cu == -expect_u && cy == -expect_y);
    if (!match) {
        RatFun l2 = expect_u.terms().begin()->second;
        match = cu == expect_u.scale(l2.inverse()) && cy == expect_y.scale(l2.inverse());
    }
    CHECK(match);
    // Trivial cases: L = 0 gives N/M relations = N rel + gensM.
    SubmoduleSum s0 = submodule_sum(p, OpMatrix(0, 2, *p), gensM, N);
    CHECK(s0.quotient.relations.rows() == 2);
}

TEST_CASE("submodule intersection matches the univariate lclm oracle") {
    auto p = trivial_pres(1);
    PresentedModule N(1, OpMatrix(0, 1, *p));
    DiffOp d = DiffOp::d(*p, 0);
    OpMatrix L = OpMatrix::from_rows({{d}}, 1, *p);
    OpMatrix M = OpMatrix::from_rows({{d + DiffOp::constant(*p, num(*p, 1))}}, 1, *p);
    OpMatrix G = submodule_intersection(p, L, M, N);
    REQUIRE(G.rows() == 1);
    DiffOp g = G.at(0, 0);
    RatFun lead = g.terms().begin()->second;
    g = g.scale(lead.inverse());
    // d^2 + d
    DiffOp expect = compose(*p, d, d + DiffOp::constant(*p, num(*p, 1)));
    CHECK(g == expect);
}

TEST_CASE("commutative-case intersection of partials") {
    auto p = trivial_pres(2);
    PresentedModule N(1, OpMatrix(0, 1, *p));
    OpMatrix L = OpMatrix::from_rows({{DiffOp::d(*p, 0)}}, 1, *p);
    OpMatrix M = OpMatrix::from_rows({{DiffOp::d(*p, 1)}}, 1, *p);
    OpMatrix G = submodule_intersection(p, L, M, N);
    REQUIRE(G.rows() == 1);
    DiffOp g = G.at(0, 0);
    RatFun lead = g.terms().begin()->second;
    CHECK(g.scale(lead.inverse()) == DiffOp::d(*p, mi({1, 1})));
}

TEST_CASE("randomized lclm oracle over constant coefficients") {
    auto p = trivial_pres(1);
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> deg(1, 3);
    auto rand_monic = [&]() {
        int k = deg(rng);
        DiffOp op(1, p->nsyms());
        MultiIndex mu(1);
        for (int i = 0; i < k; ++i) mu = mu.plus(0);
        op.add_term(mu, RatFun::one(p->nsyms()));
        for (int j = 0; j < k; ++j) {
            MultiIndex nu(1);
            for (int i = 0; i < j; ++i) nu = nu.plus(0);
            int c = coef(rng);
            if (c) op.add_term(nu, num(*p, c));
        }
        return op;
    };
    PresentedModule N(1, OpMatrix(0, 1, *p));
    for (int trial = 0; trial < 20; ++trial) {
        DiffOp a = rand_monic(), b = rand_monic();
        OpMatrix G = submodule_intersection(p, OpMatrix::from_rows({{a}}, 1, *p),
                                            OpMatrix::from_rows({{b}}, 1, *p), N);
        REQUIRE(G.rows() >= 1);
        // Constant coefficients commute: lclm = a*b / gcd as commutative polys.
        // Oracle via jet elimination: dim of D/(a,b product space) ... use
        // the poly gcd through the commutative isomorphism d -> t.
        auto to_poly = [&](const DiffOp& op) {
            std::vector<Term> ts;
            for (auto& [mu, c] : op.terms()) {
                Mon m(1);
                m.e[0] = mu[0];
                ts.push_back({m, c.num().terms().empty() ? Rat(0) : c.num().lead().coef});
            }
            return Poly::from_terms(ts, 1);
        };
        Poly pa = to_poly(a), pb = to_poly(b);
        Poly gg = gcd(pa, pb);
        Poly lcm = (pa * pb).divexact(gg);
        // compare monic forms
        DiffOp g = G.at(0, 0);
        RatFun lead = g.terms().begin()->second;
        g = g.scale(lead.inverse());
        Poly pg = to_poly(g);
        Poly lcm_monic = lcm.mul_rat(Rat(1) / lcm.lead().coef);
        CHECK(pg == lcm_monic);
    }
}
