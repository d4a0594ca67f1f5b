#include "dsys/duality.hpp"

namespace dsys {

std::vector<DiffOp> annihilators_of(PresPtr pres, const std::vector<DiffOp>& row,
                                    const OpMatrix& D, const Budget& budget) {
    OpMatrix stacked = OpMatrix::from_rows({row}, D.cols(), *pres);
    if (D.rows() > 0) stacked = stacked.vstack(D);
    OpMatrix syz = syzygies(pres, stacked, budget);
    std::vector<std::vector<DiffOp>> anns;
    for (int r = 0; r < syz.rows(); ++r)
        if (!syz.at(r, 0).is_zero()) anns.push_back({syz.at(r, 0)});
    if (anns.empty()) return {};
    OpMatrix A = OpMatrix::from_rows(anns, 1, *pres);
    A = minimize_rows(pres, A, budget);
    std::vector<DiffOp> out;
    for (int r = 0; r < A.rows(); ++r) {
        DiffOp op = A.at(r, 0);
        // Monic normalization on the leading term.
        RatFun lead = op.terms().begin()->second;
        out.push_back(op.scale(lead.inverse()));
    }
    return out;
}

TorsionReport torsion_test(PresPtr pres, const OpMatrix& D, const Budget& budget) {
    TorsionReport rep;
    try {
        rep.A = adjoint(*pres, D);
        rep.B = syzygies(pres, rep.A, budget);
    } catch (const BudgetError& e) {
        throw BudgetError(std::string(e.what()) + " [stage B = CC(ad(D))]", "torsion_test");
    }
    rep.P = adjoint(*pres, rep.B);
    try {
        rep.C = syzygies(pres, rep.P, budget);
    } catch (const BudgetError& e) {
        throw BudgetError(std::string(e.what()) + " [stage C = CC(ad(CC(ad(D))))]",
                          "torsion_test");
    }
    PresentedModule M(D.cols(), D);
    for (int r = 0; r < rep.C.rows(); ++r) {
        ReduceResult rr = reduce(pres, rep.C.row(r), M, budget);
        if (rr.member) continue;
        TorsionGenerator gen;
        gen.row = rr.normal_form;
        // Residues already found stay in the presentation for later rows, so
        // equivalent classes are reported once.
        bool fresh = true;
        for (auto& g : rep.generators) {
            OpMatrix aug = D.vstack(OpMatrix::from_rows({g.row}, D.cols(), *pres));
            if (reduce(pres, gen.row, PresentedModule(D.cols(), aug), budget).member) {
                fresh = false;
                break;
            }
        }
        if (!fresh) continue;
        gen.annihilators = annihilators_of(pres, gen.row, D, budget);
        rep.generators.push_back(std::move(gen));
    }
    rep.torsion_free = rep.generators.empty();
    return rep;
}

std::optional<Parametrization> parametrize(PresPtr pres, const OpMatrix& D,
                                           const Budget& budget) {
    TorsionReport rep = torsion_test(pres, D, budget);
    Parametrization par;
    par.P = rep.P;
    par.exact = rep.torsion_free;
    if (!compose(*pres, D, par.P).is_zero())
        throw std::logic_error("parametrization does not annihilate the system");
    if (!rep.torsion_free) return std::nullopt;
    par.left_inv = left_inverse(pres, par.P, budget.left_inverse_order);
    return par;
}

ControlVerdict is_controllable(PresPtr pres, const OpMatrix& D, const Budget& budget) {
    ControlVerdict v;
    v.torsion = torsion_test(pres, D, budget);
    v.controllable = v.torsion.torsion_free;
    if (v.controllable) {
        Parametrization par;
        par.P = v.torsion.P;
        par.exact = true;
        par.left_inv = left_inverse(pres, par.P, budget.left_inverse_order);
        v.certificate = std::move(par);
    }
    return v;
}

} // namespace dsys
