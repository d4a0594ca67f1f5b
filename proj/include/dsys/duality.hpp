#pragma once

#include "dsys/module.hpp"

namespace dsys {

struct TorsionGenerator {
    std::vector<DiffOp> row;          // residue class in the original unknowns
    std::vector<DiffOp> annihilators; // scalar P with P o row in the relation module
};

struct TorsionReport {
    bool torsion_free = true;
    std::vector<TorsionGenerator> generators;
    OpMatrix A, B, P, C; // A = ad(D), B = CC(A), P = ad(B), C = CC(P)
};

// Double-duality torsion test on the module presented by D.
TorsionReport torsion_test(PresPtr pres, const OpMatrix& D, const Budget& budget = {});

struct Parametrization {
    OpMatrix P;                        // m x c with compose(D, P) = 0
    bool exact = false;                // D generates all CC of P
    std::optional<OpMatrix> left_inv;  // injectivity witness when found
};

// Raw double-dual parametrization ad(CC(ad(D))); present iff torsion-free.
std::optional<Parametrization> parametrize(PresPtr pres, const OpMatrix& D,
                                           const Budget& budget = {});

struct ControlVerdict {
    bool controllable = false;
    TorsionReport torsion;
    std::optional<Parametrization> certificate;
};

ControlVerdict is_controllable(PresPtr pres, const OpMatrix& D, const Budget& budget = {});

// Scalar annihilators of a residue row: generators of { P : P o row in span(D) }.
std::vector<DiffOp> annihilators_of(PresPtr pres, const std::vector<DiffOp>& row,
                                    const OpMatrix& D, const Budget& budget = {});

} // namespace dsys
