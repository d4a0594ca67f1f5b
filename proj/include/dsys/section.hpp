#pragma once

#include "dsys/involution.hpp"

namespace dsys {

// Truncated element of R = hom_K(M, K): finite map (k, mu) -> K, |mu| <= Q.
class Section {
public:
    Section(PresPtr pres, int m, int order_bound)
        : pres_(std::move(pres)), m_(m), q_(order_bound) {}

    const Presentation& pres() const { return *pres_; }
    PresPtr pres_ptr() const { return pres_; }
    int m() const { return m_; }
    int order() const { return q_; }

    RatFun value(const JetCoord& j) const;
    void set(const JetCoord& j, const RatFun& v);
    const std::map<JetCoord, RatFun, JetLess>& values() const { return vals_; }

    bool is_zero() const { return vals_.empty(); }
    Section truncate(int q) const;
    Section operator+(const Section& o) const;
    Section operator-(const Section& o) const;
    Section scale(const RatFun& c) const;
    bool operator==(const Section& o) const;

    std::string str(const std::vector<std::string>& unknowns) const;

private:
    PresPtr pres_;
    int m_, q_;
    std::map<JetCoord, RatFun, JetLess> vals_;
};

// Spencer action: (d_i f)^k_mu = del_i f^k_mu - f^k_{mu+1_i}; drops the
// order bound by one.
Section spencer_apply(const Section& f, int i);

// Contraction of every prolonged equation row against f up to order(f).
bool is_section(const LinearSystem& S, const Section& f);

// Dual basis to the parametric jets of the involutive system S up to Q.
std::vector<Section> section_basis(const LinearSystem& S, int Q, const Budget& budget = {});

struct DerivationWord {
    MultiIndex nu;      // derivative word applied to the generator
    int generator = 0;  // index into GeneratorReport::generators
    RatFun coefficient;
};

struct GeneratorReport {
    std::vector<Section> generators;
    std::vector<std::string> modular_equations; // "E = a^{...} + ... = 0"
    // words[b] expresses basis section b as sum of derivative words.
    std::vector<std::vector<DerivationWord>> words;
    std::vector<Section> basis;
    bool truncated_certificate = false; // not finite type: certified at order(S) only
};

GeneratorReport generating_sections(const LinearSystem& S, int Q, const Budget& budget = {});

struct SolutionDim {
    bool finite = false;
    long dim = 0;            // valid when finite
    CharacterVector chars;   // valid when infinite
    int stable_order = 0;    // completion order; finite type: jets beyond vanish
};

SolutionDim solution_dim(const LinearSystem& S, const Budget& budget = {});

// Modular equation rendering for a section: sum f^k_mu a^{k mu} = 0.
std::string modular_equation(const Section& f, const std::vector<std::string>& unknowns);

} // namespace dsys
