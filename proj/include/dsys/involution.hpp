#pragma once

#include "dsys/linsys.hpp"

namespace dsys {

// Integer coordinate frame: xbar = A x, A unimodular.
using IntMat = std::vector<std::vector<int>>;
IntMat identity_frame(int n);

struct CharacterVector {
    std::vector<long> alpha; // alpha^1..alpha^n (parametric per class)
    std::vector<long> beta;  // pivot counts per class
    long sum_alpha() const {
        long s = 0;
        for (long a : alpha) s += a;
        return s;
    }
    long weighted_sum() const { // sum i * alpha^i
        long s = 0;
        for (size_t i = 0; i < alpha.size(); ++i) s += (long)(i + 1) * alpha[i];
        return s;
    }
};

// Characters of a symbol, searching delta-regular frames.
std::pair<CharacterVector, IntMat> characters(const SymbolSpace& g, int attempts,
                                              unsigned seed = 0);
// Characters in one fixed frame.
CharacterVector characters_in_frame(const SymbolSpace& g, const IntMat& A);

struct CohomologyDims {
    int s = 0, r = 0;
    long dim_space = 0; // dim Lambda^s T* x g_{q+r}
    long dim_Z = 0, dim_B = 0, dim_H = 0;
};

// delta-cohomology H^s_{q+r}(g) at Lambda^s T* x g_{q+r}; asserts dd = 0.
CohomologyDims delta_cohomology(const SymbolSpace& g, int s, int r);

enum class Verdict { Involutive, FormallyIntegrableOnly, Incomplete, Degenerate };
std::string verdict_str(Verdict v);

struct TabularRow {
    std::string lead;          // solved jet
    int cls = 0;               // 0 = below top order ("bullet" row)
    std::vector<int> mult;     // multiplicative variables 1..cls
};

struct TraceStep {
    bool adjoined = false;          // adjoined new lower-order rows vs prolonged
    int order = 0;                  // working order after the step
    std::vector<std::string> added; // rendered new rows
    std::vector<JetRow> added_rows;
};

struct InvolutionReport {
    Verdict verdict = Verdict::Incomplete;
    bool surjective = false;
    bool janet_equality = false;
    CharacterVector chars;
    std::vector<TabularRow> tabular;
    std::vector<CohomologyDims> cohomology;
    IntMat frame;
    std::vector<TraceStep> trace;
    long dim_symbol = 0;
    long dim_symbol_next = 0;
    long dim_solution_fiber = 0; // dim R_q
};

InvolutionReport involution_test(const LinearSystem& S, const Budget& budget = {});

struct PPResult {
    LinearSystem system;      // involutive completion
    InvolutionReport report;  // includes trace
    OpMatrix provenance;      // rows_out = T o rows_in as operators
};

PPResult pp_complete(const LinearSystem& S, const Budget& budget = {});

struct CKReport {
    // counts[i] = number of arbitrary functions of i variables, i = 0..n.
    std::vector<long> counts;
    bool finite_type = false;
    long total_constants = 0; // finite type: exact solution-space dimension
};

CKReport ck_data(const LinearSystem& S, const Budget& budget = {});

struct SpencerFormResult {
    LinearSystem system;                 // first-order system in dim R_q unknowns
    std::vector<JetCoord> base_jets;     // z-unknown <- original parametric jet
};

SpencerFormResult spencer_form(const LinearSystem& S, const Budget& budget = {});

struct SpencerBundleDims {
    std::vector<long> janet;   // dim F_r, r = 0..n
    std::vector<long> spencer; // dim C_r, r = 0..n
};

SpencerBundleDims spencer_bundle_dims(const LinearSystem& S, const Budget& budget = {});

// Operator rows of a system's echelon (for provenance checks and CC).
std::vector<DiffOp> row_as_ops(const JetRow& row, int m, const Presentation& pres);

} // namespace dsys
