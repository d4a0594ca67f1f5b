#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

#include <random>

using namespace dsys;
using namespace dsys::testing;

namespace {

RatFun random_ratfun(const Presentation& p, std::mt19937& rng, bool poly_only = false) {
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> pick(0, p.nsyms() - 1);
    std::uniform_int_distribution<int> nterms(1, 3);
    auto rand_poly = [&]() {
        Poly acc = Poly::zero(p.nsyms());
        int t = nterms(rng);
        for (int i = 0; i < t; ++i) {
            Mon m(p.nsyms());
            int factors = nterms(rng) - 1;
            for (int f = 0; f < factors; ++f) m.e[pick(rng)] += 1;
            acc = acc + Poly::from_terms({{m, Rat(coef(rng))}}, p.nsyms());
        }
        return acc;
    };
    Poly n = rand_poly();
    Poly d = poly_only ? Poly::one(p.nsyms()) : rand_poly();
    if (d.is_zero()) d = Poly::one(p.nsyms());
    return RatFun(n, d);
}

} // namespace

TEST_CASE("rational function canonical forms") {
    auto p = trivial_pres(2);
    RatFun x1 = sym(*p, "x1"), x2 = sym(*p, "x2");
    RatFun a = (x1 * x1 - x2 * x2) / (x1 - x2);
    RatFun b = x1 + x2;
    CHECK(a == b);
    RatFun c = (x1 * x2) / (x2 * x2);
    CHECK(c == x1 / x2);
    // Monic denominator: leading coefficient one.
    RatFun d = x1 / (num(*p, 3) * x2 + num(*p, 3));
    CHECK(d.den().lead().coef == Rat(1));
}

TEST_CASE("field axioms on randomized triples") {
    auto p = trivial_pres(2);
    std::mt19937 rng(7);
    for (int it = 0; it < 60; ++it) {
        RatFun a = random_ratfun(*p, rng), b = random_ratfun(*p, rng),
               c = random_ratfun(*p, rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) CHECK(a * a.inverse() == RatFun::one(p->nsyms()));
    }
}

TEST_CASE("derivation axioms and commutation on randomized inputs") {
    auto p = pd1_pres();
    std::mt19937 rng(11);
    for (int it = 0; it < 40; ++it) {
        RatFun a = random_ratfun(*p, rng), b = random_ratfun(*p, rng);
        for (int i = 0; i < 2; ++i) {
            CHECK(deriv(*p, a + b, i) == deriv(*p, a, i) + deriv(*p, b, i));
            CHECK(deriv(*p, a * b, i) == a * deriv(*p, b, i) + b * deriv(*p, a, i));
        }
        CHECK(deriv(*p, deriv(*p, a, 0), 1) == deriv(*p, deriv(*p, a, 1), 0));
    }
}

TEST_CASE("coordinate partials over the trivial presentation") {
    auto p = trivial_pres(2);
    RatFun x2 = sym(*p, "x2");
    CHECK(deriv(*p, x2, 1) == num(*p, 1));
    CHECK(deriv(*p, x2, 0) == num(*p, 0));
    CHECK(deriv(*p, x2 * x2, 1) == num(*p, 2) * x2);
}

TEST_CASE("presented jet derivatives") {
    auto p = pd1_pres();
    CHECK(deriv(*p, sym(*p, "y11"), 0).is_zero());
    CHECK(deriv(*p, sym(*p, "y1"), 1) == sym(*p, "y11"));
    CHECK(deriv(*p, sym(*p, "y"), 0) == sym(*p, "y1"));
}

TEST_CASE("presentation bound exceeded is an error") {
    auto p = std::make_shared<Presentation>(1);
    p->add_generator("w", "w", mi({0}));
    p->add_generator("w_x", "w", mi({1}));
    // no rule for w_x and no declared w_xx
    CHECK(deriv(*p, sym(*p, "w"), 0) == sym(*p, "w_x")); // automatic rule
    CHECK_THROWS_AS(deriv(*p, sym(*p, "w_x"), 0), PresentationError);
}

TEST_CASE("validate_presentation accepts the trivial and jet presentations") {
    CHECK(validate_presentation(*trivial_pres(2)).accepted);
    CHECK(validate_presentation(*pd1_pres()).accepted);
}

TEST_CASE("validate_presentation rejects non-commuting rules") {
    auto p = std::make_shared<Presentation>(2);
    p->add_generator("w", "w", mi({0, 0}));
    p->set_rule("w", 0, sym(*p, "w"));
    p->set_rule("w", 1, sym(*p, "x1") * sym(*p, "w"));
    auto rep = validate_presentation(*p);
    CHECK(!rep.accepted);
    REQUIRE(rep.failures.size() == 1);
    CHECK(rep.failures[0].gen == "w");
    CHECK(rep.failures[0].i == 1);
    CHECK(rep.failures[0].j == 2);
    // d1 d2 w - d2 d1 w = w
    CHECK(rep.failures[0].defect == sym(*p, "w"));
}
