#pragma once

#include "dsys/field.hpp"
#include "dsys/multiindex.hpp"

#include <map>
#include <optional>

namespace dsys {

// Scalar differential operator sum a^mu d_mu with coefficients in K,
// normal form: all coefficients left of all d_mu.
class DiffOp {
public:
    DiffOp() = default;
    DiffOp(int n, int width) : n_(n), width_(width) {}
    explicit DiffOp(const Presentation& pres) : n_(pres.n()), width_(pres.nsyms()) {}

    static DiffOp zero(const Presentation& pres) { return DiffOp(pres); }
    static DiffOp constant(const Presentation& pres, const RatFun& c);
    static DiffOp constant(const Presentation& pres, const Rat& c);
    static DiffOp d(const Presentation& pres, int i); // d_{i+1}, i 0-based
    static DiffOp d(const Presentation& pres, const MultiIndex& mu);
    static DiffOp monomial(const Presentation& pres, const RatFun& c, const MultiIndex& mu);

    int n() const { return n_; }
    int width() const { return width_; }
    bool is_zero() const { return terms_.empty(); }
    int order() const; // -1 for the zero operator
    const std::map<MultiIndex, RatFun, MultiIndexLess>& terms() const { return terms_; }
    RatFun coeff(const MultiIndex& mu) const;
    void add_term(const MultiIndex& mu, const RatFun& c);

    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp operator-() const;
    DiffOp scale(const RatFun& c) const;
    bool operator==(const DiffOp& o) const { return n_ == o.n_ && terms_ == o.terms_; }
    bool operator!=(const DiffOp& o) const { return !(*this == o); }

    std::string str(const Presentation& pres) const;

private:
    int n_ = 0, width_ = 0;
    std::map<MultiIndex, RatFun, MultiIndexLess> terms_;
};

// P o Q expanded to normal form via d_i a = a d_i + (d_i a).
DiffOp compose(const Presentation& pres, const DiffOp& P, const DiffOp& Q);
// ad(P) = sum (-1)^{|mu|} d_mu o a^mu.
DiffOp adjoint(const Presentation& pres, const DiffOp& P);

class OpMatrix {
public:
    OpMatrix() = default;
    OpMatrix(int rows, int cols, const Presentation& pres)
        : rows_(rows), cols_(cols), n_(pres.n()), e_(rows * cols, DiffOp(pres)) {}
    OpMatrix(int rows, int cols, int n, int width)
        : rows_(rows), cols_(cols), n_(n), e_(rows * cols, DiffOp(n, width)) {}
    static OpMatrix identity(const Presentation& pres, int m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int n() const { return n_; }
    DiffOp& at(int r, int c) { return e_[r * cols_ + c]; }
    const DiffOp& at(int r, int c) const { return e_[r * cols_ + c]; }
    bool is_zero() const;
    int order() const;

    std::vector<DiffOp> row(int r) const;
    void set_row(int r, const std::vector<DiffOp>& ops);
    static OpMatrix from_rows(const std::vector<std::vector<DiffOp>>& rows, int cols,
                              const Presentation& pres);
    OpMatrix vstack(const OpMatrix& below) const;

    bool operator==(const OpMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

    std::string str(const Presentation& pres) const;

private:
    int rows_ = 0, cols_ = 0, n_ = 0;
    std::vector<DiffOp> e_;
};

OpMatrix compose(const Presentation& pres, const OpMatrix& A, const OpMatrix& B);
OpMatrix adjoint(const Presentation& pres, const OpMatrix& A); // transpose + entrywise ad

struct BudgetError : std::runtime_error {
    std::string stage;
    BudgetError(const std::string& what, std::string stage_ = "")
        : std::runtime_error(what), stage(std::move(stage_)) {}
};

struct Budget {
    int max_prolong = 8;    // prolongation advances in PP completion
    int max_order = 10;     // CC / syzygy order budget
    int delta_attempts = 8; // delta-regularity coordinate frames to try
    unsigned seed = 0;
    int left_inverse_order = 2;
    int membership_slack = 3;
    int section_order = -1; // -1: order(S) + 4
};

// Ore pair for U != 0: V != 0, Q with V P = Q U (syzygy-based search).
std::pair<DiffOp, DiffOp> ore_pair(PresPtr pres, const DiffOp& P, const DiffOp& U,
                                   const Budget& budget = {});

// L with L A = identity, all entries of order <= max_order; absent if none.
std::optional<OpMatrix> left_inverse(PresPtr pres, const OpMatrix& A, int max_order = 2);

} // namespace dsys
