#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

#include <random>

using namespace dsys;
using namespace dsys::testing;

namespace {

DiffOp random_op(const Presentation& p, std::mt19937& rng, int max_order = 3) {
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> ord(0, max_order);
    std::uniform_int_distribution<int> pickvar(0, p.n() - 1);
    std::uniform_int_distribution<int> picksym(0, p.nsyms() - 1);
    std::uniform_int_distribution<int> nterms(1, 3);
    DiffOp out(p);
    int t = nterms(rng);
    for (int i = 0; i < t; ++i) {
        MultiIndex mu(p.n());
        int o = ord(rng);
        for (int k = 0; k < o; ++k) mu = mu.plus(pickvar(rng));
        Mon m(p.nsyms());
        if (nterms(rng) > 1) m.e[picksym(rng)] += 1;
        Poly c = Poly::from_terms({{m, Rat(coef(rng))}}, p.nsyms());
        out.add_term(mu, RatFun(c));
    }
    return out;
}

} // namespace

TEST_CASE("one Leibniz step") {
    auto p = trivial_pres(2);
    DiffOp d2 = DiffOp::d(*p, 1);
    DiffOp x2 = DiffOp::constant(*p, sym(*p, "x2"));
    DiffOp r = compose(*p, d2, x2);
    // x2 d2 + 1
    DiffOp expect = DiffOp::monomial(*p, sym(*p, "x2"), mi({0, 1})) +
                    DiffOp::constant(*p, num(*p, 1));
    CHECK(r == expect);
}

TEST_CASE("operator identities of the first-order pair") {
    auto p = trivial_pres(2);
    RatFun x2 = sym(*p, "x2"), one = num(*p, 1);
    DiffOp d22 = DiffOp::d(*p, mi({0, 2}));
    DiffOp P = DiffOp::d(*p, mi({1, 0})) + DiffOp::constant(*p, x2); // d1 + x2
    DiffOp Q = DiffOp::d(*p, mi({1, 1})) + DiffOp::monomial(*p, x2, mi({0, 1})) +
               DiffOp::constant(*p, num(*p, 2)); // d12 + x2 d2 + 2
    DiffOp d2 = DiffOp::d(*p, 1);
    CHECK(compose(*p, d22, P) == compose(*p, Q, d2));

    // second pair: (d12 + x2 d2 - 1)(d1 + x2) = (d11 + 2 x2 d1 + x2^2) d2
    DiffOp V2 = DiffOp::d(*p, mi({1, 1})) + DiffOp::monomial(*p, x2, mi({0, 1})) -
                DiffOp::constant(*p, one);
    DiffOp Q2 = DiffOp::d(*p, mi({2, 0})) +
                DiffOp::monomial(*p, num(*p, 2) * x2, mi({1, 0})) +
                DiffOp::constant(*p, x2 * x2);
    CHECK(compose(*p, V2, P) == compose(*p, Q2, d2));

    // adjoint transform: (d1 - x2) d22 = d2 (d12 - x2 d2 + 1)
    DiffOp lhs = compose(*p, DiffOp::d(*p, mi({1, 0})) - DiffOp::constant(*p, x2), d22);
    DiffOp rhs = compose(*p, d2,
                         DiffOp::d(*p, mi({1, 1})) - DiffOp::monomial(*p, x2, mi({0, 1})) +
                             DiffOp::constant(*p, one));
    CHECK(lhs == rhs);
    // and it is literally the adjoint of the first identity
    CHECK(adjoint(*p, compose(*p, d22, P)) == compose(*p, adjoint(*p, P), adjoint(*p, d22)));
}

TEST_CASE("unit composition") {
    auto p = trivial_pres(2);
    std::mt19937 rng(3);
    DiffOp one = DiffOp::constant(*p, num(*p, 1));
    for (int i = 0; i < 20; ++i) {
        DiffOp P = random_op(*p, rng);
        CHECK(compose(*p, P, one) == P);
        CHECK(compose(*p, one, P) == P);
    }
}

TEST_CASE("adjoint basics") {
    auto p = trivial_pres(2);
    for (int i = 0; i < 2; ++i) CHECK(adjoint(*p, DiffOp::d(*p, i)) == -DiffOp::d(*p, i));
    RatFun a = sym(*p, "x1") * sym(*p, "x2");
    CHECK(adjoint(*p, DiffOp::constant(*p, a)) == DiffOp::constant(*p, a));
}

TEST_CASE("adjoint involution and anti-homomorphism, randomized") {
    for (int n : {2, 3}) {
        auto p = trivial_pres(n);
        std::mt19937 rng(17 + n);
        for (int i = 0; i < 50; ++i) {
            DiffOp P = random_op(*p, rng), Q = random_op(*p, rng);
            CHECK(adjoint(*p, adjoint(*p, P)) == P);
            CHECK(adjoint(*p, compose(*p, P, Q)) ==
                  compose(*p, adjoint(*p, Q), adjoint(*p, P)));
        }
    }
}

TEST_CASE("composition associativity and order additivity, randomized") {
    auto p = trivial_pres(2);
    std::mt19937 rng(23);
    for (int i = 0; i < 25; ++i) {
        DiffOp P = random_op(*p, rng, 2), Q = random_op(*p, rng, 2), R = random_op(*p, rng, 2);
        CHECK(compose(*p, compose(*p, P, Q), R) == compose(*p, P, compose(*p, Q, R)));
        if (!P.is_zero() && !Q.is_zero())
            CHECK(compose(*p, P, Q).order() == P.order() + Q.order());
    }
}

TEST_CASE("adjoint over a presented field") {
    // ad of first-order operators with jet coefficients expands del of the rules.
    auto p = pd1_pres();
    DiffOp op = DiffOp::monomial(*p, sym(*p, "y"), mi({1, 0}));
    // ad(y d1) = -d1 o y = -y d1 - y1
    DiffOp expect = -DiffOp::monomial(*p, sym(*p, "y"), mi({1, 0})) -
                    DiffOp::constant(*p, sym(*p, "y1"));
    CHECK(adjoint(*p, op) == expect);
}
