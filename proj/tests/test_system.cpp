#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

using namespace dsys;
using namespace dsys::testing;

namespace {

// First-order pair as the homogeneous system in (y, u, v):
// y1 + x2 y - u = 0, y2 - v = 0.
LinearSystem pair_system(PresPtr p) {
    LinearSystem S(p, 3, {"y", "u", "v"});
    int w = p->nsyms();
    S.add_row(jrow({{JetCoord{0, mi({1, 0})}, RatFun::one(w)},
                    {JetCoord{0, mi({0, 0})}, sym(*p, "x2")},
                    {JetCoord{1, mi({0, 0})}, -RatFun::one(w)}}));
    S.add_row(jrow({{JetCoord{0, mi({0, 1})}, RatFun::one(w)},
                    {JetCoord{2, mi({0, 0})}, -RatFun::one(w)}}));
    return S;
}

LinearSystem macaulay_system(PresPtr p) {
    LinearSystem S(p, 1, {"y"});
    int w = p->nsyms();
    S.add_row(jrow({{JetCoord{0, mi({0, 0, 2})}, RatFun::one(w)}}));
    S.add_row(jrow({{JetCoord{0, mi({0, 1, 1})}, RatFun::one(w)},
                    {JetCoord{0, mi({2, 0, 0})}, -RatFun::one(w)}}));
    S.add_row(jrow({{JetCoord{0, mi({0, 2, 0})}, RatFun::one(w)}}));
    return S;
}

bool rowspace_contains(const LinearSystem& S, const JetRow& row) {
    JetEliminator el;
    for (auto& r : S.rows()) el.insert(r);
    JetRow probe = row;
    el.reduce(probe);
    return probe.empty();
}

} // namespace

TEST_CASE("prolongation applies the displayed rule") {
    auto p = trivial_pres(2);
    LinearSystem S = pair_system(p);
    LinearSystem P = S.prolong(1);
    int w = p->nsyms();
    // d2 of the first row: y12 + x2 y2 + y - u2
    JetRow expect = jrow({{JetCoord{0, mi({1, 1})}, RatFun::one(w)},
                          {JetCoord{0, mi({0, 1})}, sym(*p, "x2")},
                          {JetCoord{0, mi({0, 0})}, RatFun::one(w)},
                          {JetCoord{1, mi({0, 1})}, -RatFun::one(w)}});
    bool found = false;
    for (auto& r : P.rows())
        if (r == expect) found = true;
    CHECK(found);
    // enabling the zero-order relation y = u2 - v1 - x2 v
    JetRow rel = jrow({{JetCoord{0, mi({0, 0})}, RatFun::one(w)},
                       {JetCoord{1, mi({0, 1})}, -RatFun::one(w)},
                       {JetCoord{2, mi({1, 0})}, RatFun::one(w)},
                       {JetCoord{2, mi({0, 0})}, sym(*p, "x2")}});
    CHECK(rowspace_contains(P, rel));
    CHECK(rowspace_contains(P.project(1), rel));
}

TEST_CASE("prolong by zero is identity") {
    auto p = trivial_pres(2);
    LinearSystem S = pair_system(p);
    LinearSystem P = S.prolong(0);
    CHECK(P.rows().size() == S.rows().size());
    CHECK(P.dim() == S.dim());
}

TEST_CASE("Macaulay prolongation contains the hidden third-order relation") {
    auto p = trivial_pres(3);
    LinearSystem S = macaulay_system(p);
    LinearSystem P = S.prolong(1);
    int w = p->nsyms();
    JetRow rel = jrow({{JetCoord{0, mi({1, 1, 1})}, RatFun::one(w)},
                       {JetCoord{0, mi({3, 0, 0})}, -RatFun::one(w)}});
    CHECK(rowspace_contains(P, rel));
}

TEST_CASE("project echelonizes and keeps low rows") {
    auto p = trivial_pres(2);
    LinearSystem S = pair_system(p);
    LinearSystem P = S.project(S.order());
    CHECK(P.dim() == S.dim());
    // dim monotone under projection of the prolongation
    LinearSystem R1 = S.prolong(1).project(S.order());
    CHECK(R1.dim() <= S.dim());
}

TEST_CASE("presented-field projection kills the top jet generically") {
    auto p = pd1_pres();
    int w = p->nsyms();
    LinearSystem S(p, 1, {"h"});
    // eta22 - y11 eta11 = 0, eta12 - eta11 = 0
    S.add_row(jrow({{JetCoord{0, mi({0, 2})}, RatFun::one(w)},
                    {JetCoord{0, mi({2, 0})}, -sym(*p, "y11")}}));
    S.add_row(jrow({{JetCoord{0, mi({1, 1})}, RatFun::one(w)},
                    {JetCoord{0, mi({2, 0})}, -RatFun::one(w)}}));
    LinearSystem P = S.prolong(1).project(3);
    int wsz = p->nsyms();
    JetRow target = jrow({{JetCoord{0, mi({3, 0})}, RatFun::one(wsz)}});
    bool found = false;
    for (auto& r : P.echelon().rows)
        if (r == target) found = true;
    CHECK(found);
}

TEST_CASE("symbol dimensions") {
    auto p3 = trivial_pres(3);
    LinearSystem S = macaulay_system(p3);
    CHECK(S.symbol(2).dim() == 3);
    CHECK(S.symbol(3).dim() == 1);
    CHECK(S.symbol(4).dim() == 0);

    // empty system: full symmetric tensor space
    LinearSystem E(p3, 2);
    for (int s : {1, 2, 3})
        CHECK(E.symbol(s).dim() == 2 * count_of_order(3, s));

    // second-order pair with a coefficient: dim g2 = 6 - 2
    auto pj = trivial_pres(3);
    LinearSystem J(pj, 1, {"y"});
    int w = pj->nsyms();
    J.add_row(jrow({{JetCoord{0, mi({0, 0, 2})}, RatFun::one(w)},
                    {JetCoord{0, mi({2, 0, 0})}, -sym(*pj, "x2")}}));
    J.add_row(jrow({{JetCoord{0, mi({0, 2, 0})}, RatFun::one(w)}}));
    CHECK(J.symbol(2).dim() == 4);
}

TEST_CASE("prolongation row space is order-independent") {
    auto p = trivial_pres(2);
    LinearSystem S = pair_system(p);
    LinearSystem A = S.prolong(2);
    LinearSystem B = S.prolong(1).prolong(1);
    CHECK(A.dim() == B.dim());
    JetEliminator el;
    for (auto& r : A.rows()) el.insert(r);
    int rank_a = el.rank();
    for (auto& r : B.rows()) el.insert(r);
    CHECK(el.rank() == rank_a);
}

TEST_CASE("rank is invariant under row order") {
    auto p = trivial_pres(2);
    LinearSystem S = pair_system(p).prolong(2);
    JetEliminator fwd, rev;
    auto rows = S.rows();
    for (auto& r : rows) fwd.insert(r);
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) rev.insert(*it);
    CHECK(fwd.rank() == rev.rank());
}
