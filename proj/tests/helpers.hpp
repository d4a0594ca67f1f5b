#pragma once

#include "dsys/duality.hpp"
#include "dsys/module.hpp"
#include "dsys/section.hpp"

#include <memory>

namespace dsys::testing {

inline PresPtr trivial_pres(int n) { return std::make_shared<Presentation>(n); }

inline RatFun sym(const Presentation& p, const std::string& name) {
    int s = p.find_symbol(name);
    if (s < 0) throw std::runtime_error("unknown symbol " + name);
    return RatFun::symbol(s, p.nsyms());
}

inline RatFun num(const Presentation& p, long v) {
    return RatFun::constant(Rat(v), p.nsyms());
}

inline MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }

// Presented field of the second-order pair d1d2 y = d11 y, d22 y = (d11 y)^2/2:
// residual ring Q[y, y1, y2, y11] with d1 y11 = d2 y11 = 0.
inline PresPtr pd1_pres() {
    auto p = std::make_shared<Presentation>(2);
    p->add_generator("y", "y", mi({0, 0}));
    p->add_generator("y1", "y", mi({1, 0}));
    p->add_generator("y2", "y", mi({0, 1}));
    p->add_generator("y11", "y", mi({2, 0}));
    auto& P = *p;
    P.set_rule("y", 0, sym(P, "y1"));
    P.set_rule("y", 1, sym(P, "y2"));
    P.set_rule("y1", 0, sym(P, "y11"));
    P.set_rule("y1", 1, sym(P, "y11"));
    P.set_rule("y11", 0, num(P, 0));
    P.set_rule("y11", 1, num(P, 0));
    P.set_rule("y2", 0, sym(P, "y11"));
    P.set_rule("y2", 1, sym(P, "y11") * sym(P, "y11") * RatFun::constant(Rat(1, 2), P.nsyms()));
    return p;
}

// One-dimensional family w, w_x, ..., w_x..x (d-jets) with automatic rules.
inline void add_jet_family(Presentation& p, const std::string& base, int upto,
                           int coord = 0) {
    for (int j = 0; j <= upto; ++j) {
        std::string name = j == 0 ? base : base + "_" + std::string(j, 'x');
        MultiIndex idx(p.n());
        for (int k = 0; k < j; ++k) idx = idx.plus(coord);
        p.add_generator(name, base, idx);
    }
}

inline JetRow jrow(std::initializer_list<std::pair<JetCoord, RatFun>> items) {
    JetRow r;
    for (auto& [j, c] : items)
        if (!c.is_zero()) r[j] = c;
    return r;
}

// SISO system y1 y2_x - y1_x - a = 0: field Q[y1; y2, y2_x, ...] with
// d y1 = y1 y2_x - a.
inline PresPtr siso_pres(long a, int depth = 8) {
    auto p = std::make_shared<Presentation>(1);
    p->add_generator("w1", "w1", mi({0}));
    add_jet_family(*p, "w2", depth);
    p->set_rule("w1", 0, sym(*p, "w1") * sym(*p, "w2_x") - num(*p, a));
    return p;
}

// 2 y3_x + (y2_x)^2 - (y1_x)^2 = 0: field Q[y1-jets; y2-jets; y3] with
// d y3 = ((y1_x)^2 - (y2_x)^2)/2.
inline PresPtr three_unknown_pres(int depth = 8) {
    auto p = std::make_shared<Presentation>(1);
    add_jet_family(*p, "w1", depth);
    add_jet_family(*p, "w2", depth);
    p->add_generator("w3", "w3", mi({0}));
    RatFun a = sym(*p, "w1_x"), b = sym(*p, "w2_x");
    p->set_rule("w3", 0, (a * a - b * b) * RatFun::constant(Rat(1, 2), p->nsyms()));
    return p;
}

// d1-jet family with d2-rules generated by d2 g_j = d1(d2 g_{j-1}).
inline void chain_d2_rules(Presentation& p, const std::vector<std::string>& family,
                           const RatFun& seed) {
    p.set_rule(family[0], 1, seed);
    RatFun cur = seed;
    for (size_t j = 1; j + 1 < family.size(); ++j) {
        cur = deriv(p, cur, 0);
        p.set_rule(family[j], 1, cur);
    }
}

// y^a_2 = y3 y^a_1 (a = 1,2) with y3 differentially transcendental:
// gens y1-, y2-d1-families and the full y3 jet family.
inline PresPtr transport_pres(int depth = 6) {
    auto p = std::make_shared<Presentation>(2);
    std::vector<std::string> f1, f2;
    for (int j = 0; j <= depth; ++j) {
        std::string n1 = j == 0 ? "w1" : "w1_" + std::string(j, '1');
        f1.push_back(n1);
        p->add_generator(n1, "w1", mi({j, 0}));
    }
    for (int j = 0; j <= depth; ++j) {
        std::string n2 = j == 0 ? "w2" : "w2_" + std::string(j, '1');
        f2.push_back(n2);
        p->add_generator(n2, "w2", mi({j, 0}));
    }
    for (auto& mu : multiindices_up_to(2, depth)) {
        std::string n3 = mu.is_zero() ? "w3" : "w3_" + mu.digits();
        p->add_generator(n3, "w3", mu);
    }
    chain_d2_rules(*p, f1, sym(*p, "w3") * sym(*p, "w1_1"));
    chain_d2_rules(*p, f2, sym(*p, "w3") * sym(*p, "w2_1"));
    return p;
}

} // namespace dsys::testing
