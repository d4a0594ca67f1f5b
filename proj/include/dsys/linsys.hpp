#pragma once

#include "dsys/diffop.hpp"
#include "dsys/linalg.hpp"

#include <optional>

namespace dsys {

// Jet coordinate y^k_mu (k 0-based).
struct JetCoord {
    int k;
    MultiIndex mu;

    bool operator==(const JetCoord& o) const { return k == o.k && mu == o.mu; }

    // Elimination order: |mu| descending, class ascending, lex ascending, k.
    static int cmp(const JetCoord& a, const JetCoord& b) {
        int oa = a.mu.order(), ob = b.mu.order();
        if (oa != ob) return oa > ob ? -1 : 1;
        int ca = a.mu.cls(), cb = b.mu.cls();
        if (ca != cb) return ca < cb ? -1 : 1;
        if (a.mu.exps() < b.mu.exps()) return -1;
        if (b.mu.exps() < a.mu.exps()) return 1;
        if (a.k != b.k) return a.k < b.k ? -1 : 1;
        return 0;
    }
};

struct JetLess {
    bool operator()(const JetCoord& a, const JetCoord& b) const {
        return JetCoord::cmp(a, b) < 0;
    }
};

using JetRow = std::map<JetCoord, RatFun, JetLess>;
using JetEliminator = Eliminator<JetCoord, JetLess, std::pair<int, MultiIndex>>;

// Tag key for provenance: (input row index, prolongation multi-index).
struct ProvLess {
    bool operator()(const std::pair<int, MultiIndex>& a,
                    const std::pair<int, MultiIndex>& b) const {
        if (a.first != b.first) return a.first < b.first;
        return MultiIndex::cmp(a.second, b.second) < 0;
    }
};

std::string jet_name(const JetCoord& j, const std::vector<std::string>& unknowns);
std::string jetrow_str(const JetRow& row, const std::vector<std::string>& unknowns,
                       const Presentation& pres);

// Formal derivative of a row: coefficients shift to mu+1_i and gain their
// own d_i-derivatives.
JetRow formal_derivative(const Presentation& pres, const JetRow& row, int i);

class SymbolSpace;
struct EchelonView;

// Linear system a^{tau mu}_k y^k_mu = 0 of order q in m unknowns.
class LinearSystem {
public:
    LinearSystem(PresPtr pres, int m, std::vector<std::string> unknown_names = {});

    const Presentation& pres() const { return *pres_; }
    PresPtr pres_ptr() const { return pres_; }
    int m() const { return m_; }
    int n() const { return pres_->n(); }
    int order() const { return order_; }
    const std::vector<std::string>& unknowns() const { return unknowns_; }
    const std::vector<JetRow>& rows() const { return rows_; }

    void add_row(JetRow row);
    void add_equation_op(const std::vector<DiffOp>& oprow); // sum op_k y^k = 0

    // Echelon (full RREF under the jet order), cached.
    const EchelonView& echelon() const;

    long dim() const;                // dim R_q
    long dim_at(int q) const;        // dim R_q' for q' <= order
    std::vector<JetCoord> parametric_jets() const;

    LinearSystem prolong(int r) const;
    LinearSystem project(int q) const;
    SymbolSpace symbol(int s) const;

    std::string str() const;

private:
    PresPtr pres_;
    int m_;
    int order_ = 0;
    std::vector<std::string> unknowns_;
    std::vector<JetRow> rows_;
    mutable std::shared_ptr<EchelonView> ech_;
};

struct EchelonView {
    std::vector<JetRow> rows; // monic RREF rows, sorted by pivot
    std::vector<JetCoord> pivots;
    int rank = 0;
};

// Symbol g_s: top-order parts at order s (prolonged without coefficient
// derivation, per the principal-part rule).
class SymbolSpace {
public:
    SymbolSpace(PresPtr pres, int m, int s, std::vector<JetRow> top_rows);

    const Presentation& pres() const { return *pres_; }
    int m() const { return m_; }
    int n() const { return pres_->n(); }
    int order() const { return s_; }
    const std::vector<JetRow>& rows() const { return rows_; }

    long full_dim() const; // m * C(n+s-1, n-1)
    long dim() const;      // dim g_s
    int rank() const;

    // Pure top-degree prolongation of the symbol by r.
    SymbolSpace prolong(int r) const;

    // Basis of g_s as vectors over the order-s jets (solved form).
    std::vector<JetRow> basis() const;

private:
    PresPtr pres_;
    int m_, s_;
    std::vector<JetRow> rows_;
    mutable std::optional<int> rank_;
};

// Convenience: might a zero-order echelon row annihilate an unknown
// outright (pivot on a zero-order jet and no other support)?
bool has_annihilated_unknown(const LinearSystem& S);

} // namespace dsys
