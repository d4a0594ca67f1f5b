#pragma once

#include "dsys/involution.hpp"

namespace dsys {

// Finitely presented left D-module M = D^m / (row span of relations).
struct PresentedModule {
    int m = 0;
    OpMatrix relations; // p x m

    PresentedModule() = default;
    PresentedModule(int m_, OpMatrix rel) : m(m_), relations(std::move(rel)) {
        if (relations.cols() != m) throw std::invalid_argument("relation width mismatch");
    }
};

// Defining system of M: rows D_tau y = 0 in the m unknowns.
LinearSystem module_system(PresPtr pres, const PresentedModule& M,
                           std::vector<std::string> names = {});
// Homogeneous system for D y = u in unknowns (y_1..y_m, u_1..u_p).
LinearSystem combined_system(PresPtr pres, const OpMatrix& D);

// Generating left syzygies of the rows of D: C with compose(C, D) = 0 whose
// rows generate all left relations (Janet-sequence construction).
OpMatrix syzygies(PresPtr pres, const OpMatrix& D, const Budget& budget = {});
inline OpMatrix compatibility_conditions(PresPtr pres, const OpMatrix& D,
                                         const Budget& budget = {}) {
    return syzygies(pres, D, budget);
}

struct ReduceResult {
    bool member = false;
    std::vector<DiffOp> normal_form; // zero ops iff member
    int slack_used = 0;
};

// Membership of an operator row in the left module generated by M's
// relations, by prolongation to order(row)+slack and linear algebra over K.
ReduceResult reduce(PresPtr pres, const std::vector<DiffOp>& row, const PresentedModule& M,
                    const Budget& budget = {});

struct ResolutionReport {
    std::vector<OpMatrix> maps; // maps[0] = relations, maps[i+1] = CC(maps[i])
    std::vector<long> ranks;    // a_0 = m, a_1 = p, ...
    long euler_characteristic = 0;
    bool composes_zero = true;
};

ResolutionReport free_resolution(PresPtr pres, const PresentedModule& M, int length,
                                 const Budget& budget = {});

struct SubmoduleSum {
    PresentedModule quotient; // N / (L + M)
    PresentedModule sum;      // L + M presented on the generator stack
};

SubmoduleSum submodule_sum(PresPtr pres, const OpMatrix& gensL, const OpMatrix& gensM,
                           const PresentedModule& N, const Budget& budget = {});

// Generators of L cap M inside N.
OpMatrix submodule_intersection(PresPtr pres, const OpMatrix& gensL, const OpMatrix& gensM,
                                const PresentedModule& N, const Budget& budget = {});

long differential_rank(PresPtr pres, const PresentedModule& M, const Budget& budget = {});

// Drop rows that reduce to zero modulo the remaining rows (greedy, in row
// order); keeps a generating set.
OpMatrix minimize_rows(PresPtr pres, const OpMatrix& rows, const Budget& budget = {},
                       const OpMatrix* modulo = nullptr);

} // namespace dsys
