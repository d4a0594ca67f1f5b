#pragma once

#include "dsys/multiindex.hpp"
#include "dsys/poly.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsys {

struct PresentationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A jet generator adjoined to the coordinate field, with its owner unknown
// and jet multi-index (used to resolve automatic rules d_i w[mu] = w[mu+1_i]).
struct Generator {
    std::string name;
    std::string owner;
    MultiIndex index;
};

class RatFun;

// Differential field K: Q(x^1..x^n) extended by finitely presented jet
// generators with prescribed first derivatives.
class Presentation {
public:
    explicit Presentation(int n, std::vector<std::string> coord_names = {});

    int n() const { return n_; }
    int nsyms() const { return n_ + (int)gens_.size(); }
    int ngens() const { return (int)gens_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int sym) const { return names_[sym]; }
    const Generator& gen(int g) const { return gens_[g]; }

    // Declaration order is the symbol order (coordinates first).
    int add_generator(const std::string& name, const std::string& owner, MultiIndex idx);
    void set_rule(const std::string& gen_name, int coord, const RatFun& value);

    int find_symbol(const std::string& name) const; // -1 if absent
    int find_generator(const std::string& owner, const MultiIndex& idx) const;

    // Value of d_coord on generator g (0-based indices into gens_).
    // Falls back to the automatic parametric rule; throws PresentationError
    // ("presentation bound exceeded") if no rule resolves.
    const RatFun& rule(int g, int coord) const;
    bool has_rule(int g, int coord) const;

    int order_bound() const { return order_bound_; }
    void set_order_bound(int b) { order_bound_ = b; }

private:
    int n_;
    std::vector<std::string> names_;
    std::vector<Generator> gens_;
    std::map<std::pair<int, int>, RatFun> rules_;
    mutable std::map<std::pair<int, int>, RatFun> auto_rules_;
    int order_bound_ = 20;
};

using PresPtr = std::shared_ptr<const Presentation>;

// Exact rational function over the presentation's symbols, kept reduced with
// a monic denominator under the global degrevlex order.
class RatFun {
public:
    RatFun() : num_(Poly::zero(0)), den_(Poly::one(0)) {}
    RatFun(Poly num, Poly den);
    explicit RatFun(Poly num) : RatFun(num, Poly::one(num.width())) {}

    static RatFun zero(int width) { return RatFun(Poly::zero(width)); }
    static RatFun one(int width) { return RatFun(Poly::one(width)); }
    static RatFun constant(const Rat& c, int width) { return RatFun(Poly(c, width)); }
    static RatFun symbol(int s, int width) { return RatFun(Poly::symbol(s, width)); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    int width() const { return num_.width(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_one() && num_ == Poly::one(width()); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    RatFun operator+(const RatFun& o) const;
    RatFun operator-(const RatFun& o) const;
    RatFun operator*(const RatFun& o) const;
    RatFun operator/(const RatFun& o) const;
    RatFun operator-() const;
    RatFun inverse() const;
    bool operator==(const RatFun& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFun& o) const { return !(*this == o); }

    std::string str(const std::vector<std::string>& names) const;

private:
    void reduce();
    Poly num_, den_;
};

// d_i f over the presentation (i is 0-based coordinate index).
RatFun deriv(const Presentation& pres, const RatFun& f, int i);
RatFun deriv(const Presentation& pres, const Poly& p, int i);

struct CommutationDefect {
    std::string gen;
    int i, j; // 1-based coordinates
    RatFun defect;
};

struct ValidationReport {
    bool accepted = true;
    std::vector<CommutationDefect> checks; // all pairs, defect recorded
    std::vector<CommutationDefect> failures;
    int skipped_at_bound = 0; // pairs unverifiable within the declared jets
};

// Checks d_i d_j g = d_j d_i g symbolically for every generator and i<j.
ValidationReport validate_presentation(const Presentation& pres);

} // namespace dsys
