#include "dsys/field.hpp"

namespace dsys {

Presentation::Presentation(int n, std::vector<std::string> coord_names) : n_(n) {
    if (coord_names.empty()) {
        for (int i = 1; i <= n; ++i) names_.push_back("x" + std::to_string(i));
    } else {
        if ((int)coord_names.size() != n)
            throw std::invalid_argument("coordinate name count mismatch");
        names_ = std::move(coord_names);
    }
}

int Presentation::add_generator(const std::string& name, const std::string& owner,
                                MultiIndex idx) {
    if (find_symbol(name) >= 0)
        throw PresentationError("duplicate symbol: " + name);
    if (idx.size() != n_)
        throw PresentationError("generator index arity mismatch: " + name);
    gens_.push_back({name, owner, std::move(idx)});
    names_.push_back(name);
    return (int)gens_.size() - 1;
}

void Presentation::set_rule(const std::string& gen_name, int coord, const RatFun& value) {
    int s = find_symbol(gen_name);
    if (s < n_)
        throw PresentationError("rule target is not a generator: " + gen_name);
    if (coord < 0 || coord >= n_)
        throw PresentationError("rule coordinate out of range for " + gen_name);
    if (value.width() != nsyms())
        throw PresentationError("rule value over wrong symbol set for " + gen_name);
    rules_[{s - n_, coord}] = value;
}

int Presentation::find_symbol(const std::string& name) const {
    for (int i = 0; i < (int)names_.size(); ++i)
        if (names_[i] == name) return i;
    return -1;
}

int Presentation::find_generator(const std::string& owner, const MultiIndex& idx) const {
    for (int g = 0; g < (int)gens_.size(); ++g)
        if (gens_[g].owner == owner && gens_[g].index == idx) return g;
    return -1;
}

bool Presentation::has_rule(int g, int coord) const {
    if (rules_.count({g, coord})) return true;
    return find_generator(gens_[g].owner, gens_[g].index.plus(coord)) >= 0;
}

const RatFun& Presentation::rule(int g, int coord) const {
    auto it = rules_.find({g, coord});
    if (it != rules_.end()) return it->second;
    // Automatic parametric rule d_i w[mu] = w[mu+1_i] when that jet is declared.
    auto ait = auto_rules_.find({g, coord});
    if (ait != auto_rules_.end()) return ait->second;
    int tgt = find_generator(gens_[g].owner, gens_[g].index.plus(coord));
    if (tgt < 0)
        throw PresentationError("presentation bound exceeded: d" + std::to_string(coord + 1) +
                                " of " + gens_[g].name + " is undeclared");
    auto [jt, _] = auto_rules_.emplace(std::make_pair(g, coord),
                                       RatFun::symbol(n_ + tgt, nsyms()));
    return jt->second;
}

RatFun::RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("zero denominator");
    if (num_.width() != den_.width()) throw std::logic_error("ratfun width mismatch");
    reduce();
}

void RatFun::reduce() {
    if (num_.is_zero()) {
        den_ = Poly::one(num_.width());
        return;
    }
    Poly g = gcd(num_, den_);
    if (!(g == Poly::one(g.width()))) {
        num_ = num_.divexact(g);
        den_ = den_.divexact(g);
    }
    // Monic denominator under the global order.
    Rat lc = den_.lead().coef;
    if (lc != 1) {
        num_ = num_.mul_rat(Rat(1) / lc);
        den_ = den_.mul_rat(Rat(1) / lc);
    }
}

// Both operands are reduced, which keeps the residual gcds small: for a
// product (n1/d1)(n2/d2) with g1 = gcd(n1,d2), g2 = gcd(n2,d1) the result
// is already reduced; for a sum with g = gcd(d1,d2) only gcd(num, g) can
// survive.
RatFun RatFun::operator+(const RatFun& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    RatFun r;
    if (den_ == o.den_) {
        Poly num = num_ + o.num_;
        if (num.is_zero()) return zero(width());
        Poly g = gcd(num, den_);
        r.num_ = g.is_one() ? num : num.divexact(g);
        r.den_ = g.is_one() ? den_ : den_.divexact(g);
    } else {
        Poly g = gcd(den_, o.den_);
        Poly A = g.is_one() ? den_ : den_.divexact(g);
        Poly B = g.is_one() ? o.den_ : o.den_.divexact(g);
        Poly num = num_ * B + o.num_ * A;
        if (num.is_zero()) return zero(width());
        Poly den = A * B * g;
        Poly h = gcd(num, g);
        r.num_ = h.is_one() ? num : num.divexact(h);
        r.den_ = h.is_one() ? den : den.divexact(h);
    }
    Rat lc = r.den_.lead().coef;
    if (lc != 1) {
        r.num_ = r.num_.mul_rat(Rat(1) / lc);
        r.den_ = r.den_.mul_rat(Rat(1) / lc);
    }
    return r;
}
RatFun RatFun::operator-(const RatFun& o) const { return *this + (-o); }
RatFun RatFun::operator*(const RatFun& o) const {
    if (is_zero() || o.is_zero()) return zero(width());
    RatFun r;
    Poly g1 = gcd(num_, o.den_);
    Poly g2 = gcd(o.num_, den_);
    Poly n1 = g1.is_one() ? num_ : num_.divexact(g1);
    Poly d2 = g1.is_one() ? o.den_ : o.den_.divexact(g1);
    Poly n2 = g2.is_one() ? o.num_ : o.num_.divexact(g2);
    Poly d1 = g2.is_one() ? den_ : den_.divexact(g2);
    r.num_ = n1 * n2;
    r.den_ = d1 * d2;
    Rat lc = r.den_.lead().coef;
    if (lc != 1) {
        r.num_ = r.num_.mul_rat(Rat(1) / lc);
        r.den_ = r.den_.mul_rat(Rat(1) / lc);
    }
    return r;
}
RatFun RatFun::operator/(const RatFun& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero field element");
    return *this * o.inverse();
}
RatFun RatFun::operator-() const {
    RatFun r = *this;
    r.num_ = -r.num_;
    return r;
}
RatFun RatFun::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return RatFun(den_, num_);
}

std::string RatFun::str(const std::vector<std::string>& names) const {
    if (den_.is_one()) return num_.str(names);
    std::string n = num_.str(names), d = den_.str(names);
    if (num_.terms().size() > 1) n = "(" + n + ")";
    if (den_.terms().size() > 1) d = "(" + d + ")";
    return n + "/" + d;
}

RatFun deriv(const Presentation& pres, const Poly& p, int i) {
    int w = pres.nsyms();
    RatFun acc = RatFun::zero(w);
    std::vector<Term> coord_part;
    for (auto& t : p.terms()) {
        for (int s = 0; s < w; ++s) {
            int e = t.mon.e[s];
            if (!e) continue;
            Term u = t;
            u.mon.e[s] -= 1;
            u.coef *= e;
            if (s == i) {
                coord_part.push_back(u);
            } else if (s >= pres.n()) {
                const RatFun& r = pres.rule(s - pres.n(), i);
                if (!r.is_zero()) {
                    Poly mono = Poly::from_terms({u}, w);
                    acc = acc + RatFun(mono) * r;
                }
            }
        }
    }
    if (!coord_part.empty())
        acc = acc + RatFun(Poly::from_terms(std::move(coord_part), w));
    return acc;
}

RatFun deriv(const Presentation& pres, const RatFun& f, int i) {
    if (i < 0 || i >= pres.n()) throw std::invalid_argument("coordinate index out of range");
    RatFun dn = deriv(pres, f.num(), i);
    if (f.den().is_one()) return dn;
    RatFun dd = deriv(pres, f.den(), i);
    RatFun den(f.den());
    return (dn * den - RatFun(f.num()) * dd) / (den * den);
}

ValidationReport validate_presentation(const Presentation& pres) {
    ValidationReport rep;
    int w = pres.nsyms();
    for (int g = 0; g < pres.ngens(); ++g) {
        RatFun gsym = RatFun::symbol(pres.n() + g, w);
        for (int i = 0; i < pres.n(); ++i)
            for (int j = i + 1; j < pres.n(); ++j) {
                RatFun dij, dji;
                try {
                    dij = deriv(pres, deriv(pres, gsym, j), i);
                    dji = deriv(pres, deriv(pres, gsym, i), j);
                } catch (const PresentationError&) {
                    // Truncated jet family: the pair is unverifiable at the
                    // declared bound and does not reject the presentation.
                    ++rep.skipped_at_bound;
                    continue;
                }
                CommutationDefect d{pres.gen(g).name, i + 1, j + 1, dij - dji};
                rep.checks.push_back(d);
                if (!d.defect.is_zero()) {
                    rep.accepted = false;
                    rep.failures.push_back(d);
                }
            }
    }
    return rep;
}

} // namespace dsys
