#pragma once

#include "dsys/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dsys {

// Monomial over a fixed symbol universe (coordinates first, then generators).
struct Mon {
    std::vector<int> e;

    Mon() = default;
    explicit Mon(int width) : e(width, 0) {}
    explicit Mon(std::vector<int> exps) : e(std::move(exps)) {}

    int width() const { return (int)e.size(); }
    int deg() const {
        int s = 0;
        for (int v : e) s += v;
        return s;
    }
    bool is_one() const {
        for (int v : e)
            if (v) return false;
        return true;
    }
    bool divides(const Mon& o) const {
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }
    Mon operator*(const Mon& o) const {
        Mon r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
        return r;
    }
    Mon operator/(const Mon& o) const {
        Mon r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
        return r;
    }
    bool operator==(const Mon& o) const { return e == o.e; }

    // Degree-reverse-lexicographic: higher degree first; on ties the
    // rightmost differing exponent decides (smaller exponent there wins).
    static int cmp(const Mon& a, const Mon& b) {
        int da = a.deg(), db = b.deg();
        if (da != db) return da > db ? 1 : -1;
        for (int i = (int)a.e.size() - 1; i >= 0; --i) {
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
        }
        return 0;
    }
};

struct Term {
    Mon mon;
    Rat coef;
};

// Sparse multivariate polynomial with exact rational coefficients.
// Terms kept sorted descending under Mon::cmp; no zero coefficients stored.
class Poly {
public:
    Poly() = default;
    Poly(const Rat& c, int width) {
        if (c != 0) terms_.push_back({Mon(width), c});
        width_ = width;
    }
    static Poly zero(int width) { return Poly(Rat(0), width); }
    static Poly one(int width) { return Poly(Rat(1), width); }
    static Poly symbol(int s, int width) {
        Poly p;
        p.width_ = width;
        Mon m(width);
        m.e[s] = 1;
        p.terms_.push_back({m, Rat(1)});
        return p;
    }
    static Poly from_terms(std::vector<Term> ts, int width);

    int width() const { return width_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || terms_[0].mon.is_one(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_[0].mon.is_one() && terms_[0].coef == 1;
    }
    const std::vector<Term>& terms() const { return terms_; }
    const Term& lead() const { return terms_.front(); }
    int total_degree() const { return terms_.empty() ? -1 : terms_[0].mon.deg(); }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly mul_rat(const Rat& c) const;
    bool operator==(const Poly& o) const { return width_ == o.width_ && eq(o); }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // Exact division; throws std::logic_error if not divisible.
    Poly divexact(const Poly& d) const;

    int degree_in(int sym) const;
    // Coefficient of sym^k, as a polynomial with sym's slot zeroed.
    Poly coeff_in(int sym, int k) const;

    // gcd of numerators / lcm of denominators, sign of leading term.
    Rat content() const;
    Poly primitive_part() const;

    std::string str(const std::vector<std::string>& names) const;

private:
    bool eq(const Poly& o) const;
    std::vector<Term> terms_;
    int width_ = 0;
};

Poly gcd(const Poly& a, const Poly& b);
std::optional<Poly> try_divexact(const Poly& a, const Poly& d);

} // namespace dsys
