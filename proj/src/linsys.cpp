#include "dsys/linsys.hpp"

namespace dsys {

std::string jet_name(const JetCoord& j, const std::vector<std::string>& unknowns) {
    std::string base = j.k < (int)unknowns.size() ? unknowns[j.k] : "y" + std::to_string(j.k + 1);
    if (j.mu.is_zero()) return base;
    bool digits_ok = j.mu.size() <= 9;
    for (int i = 0; i < j.mu.size(); ++i)
        if (j.mu[i] > 9) digits_ok = false;
    return base + (digits_ok ? "_" + j.mu.digits() : j.mu.tuple_str());
}

std::string jetrow_str(const JetRow& row, const std::vector<std::string>& unknowns,
                       const Presentation& pres) {
    if (row.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [j, c] : row) {
        std::string cs = c.str(pres.names());
        bool neg = cs[0] == '-' && c.num().terms().size() == 1;
        std::string body = neg ? cs.substr(1) : cs;
        if (body.find_first_of("+-") != std::string::npos && body.front() != '(')
            body = "(" + body + ")";
        std::string term = (body == "1") ? jet_name(j, unknowns) : body + "*" + jet_name(j, unknowns);
        if (first)
            s += (neg ? "-" : "") + term;
        else
            s += (neg ? " - " : " + ") + term;
        first = false;
    }
    return s;
}

JetRow formal_derivative(const Presentation& pres, const JetRow& row, int i) {
    JetRow out;
    auto add = [&out](const JetCoord& j, const RatFun& c) {
        if (c.is_zero()) return;
        auto it = out.find(j);
        if (it == out.end())
            out.emplace(j, c);
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    for (auto& [j, c] : row) {
        add({j.k, j.mu.plus(i)}, c);
        add(j, deriv(pres, c, i));
    }
    return out;
}

LinearSystem::LinearSystem(PresPtr pres, int m, std::vector<std::string> unknown_names)
    : pres_(std::move(pres)), m_(m), unknowns_(std::move(unknown_names)) {
    if (unknowns_.empty())
        for (int k = 1; k <= m; ++k) unknowns_.push_back("y" + std::to_string(k));
}

void LinearSystem::add_row(JetRow row) {
    if (row.empty()) return;
    for (auto& [j, c] : row) {
        if (j.k < 0 || j.k >= m_) throw std::invalid_argument("jet unknown out of range");
        order_ = std::max(order_, j.mu.order());
    }
    rows_.push_back(std::move(row));
    ech_.reset();
}

void LinearSystem::add_equation_op(const std::vector<DiffOp>& oprow) {
    if ((int)oprow.size() != m_) throw std::invalid_argument("operator row width mismatch");
    JetRow row;
    for (int k = 0; k < m_; ++k)
        for (auto& [mu, c] : oprow[k].terms()) row[{k, mu}] = c;
    add_row(std::move(row));
}

const EchelonView& LinearSystem::echelon() const {
    if (ech_) return *ech_;
    JetEliminator el;
    for (auto& r : rows_) el.insert(r);
    auto view = std::make_shared<EchelonView>();
    for (auto& e : el.entries()) {
        view->rows.push_back(e.row);
        view->pivots.push_back(e.pivot);
    }
    view->rank = el.rank();
    ech_ = view;
    return *ech_;
}

long LinearSystem::dim() const { return dim_at(order_); }

long LinearSystem::dim_at(int q) const {
    long total = (long)m_ * count_up_to(n(), q);
    long rk = 0;
    for (auto& p : echelon().pivots)
        if (p.mu.order() <= q) ++rk; // RREF pivots of order <= q
    // Rows with higher-order pivots cannot constrain order-q jets in RREF.
    return total - rk;
}

std::vector<JetCoord> LinearSystem::parametric_jets() const {
    auto& ech = echelon();
    std::vector<JetCoord> out;
    for (int k = 0; k < m_; ++k)
        for (auto& mu : multiindices_up_to(n(), order_)) {
            JetCoord j{k, mu};
            bool pivot = false;
            for (auto& p : ech.pivots)
                if (p == j) {
                    pivot = true;
                    break;
                }
            if (!pivot) out.push_back(j);
        }
    std::sort(out.begin(), out.end(), JetLess{});
    return out;
}

LinearSystem LinearSystem::prolong(int r) const {
    if (r < 0) throw std::invalid_argument("negative prolongation");
    LinearSystem out(pres_, m_, unknowns_);
    out.order_ = order_ + r; // full jet range even if rows stay lower order
    // BFS over derivative words, applying d_i in increasing i order once per nu.
    std::vector<JetRow> level = rows_;
    for (auto& row : level) out.rows_.push_back(row);
    std::vector<std::pair<JetRow, int>> frontier; // (row, min coord applied)
    for (auto& row : rows_) frontier.push_back({row, 0});
    for (int step = 0; step < r; ++step) {
        std::vector<std::pair<JetRow, int>> next;
        for (auto& [row, start] : frontier)
            for (int i = start; i < n(); ++i) {
                JetRow d = formal_derivative(*pres_, row, i);
                if (d.empty()) continue;
                out.rows_.push_back(d);
                next.push_back({std::move(d), i});
            }
        frontier = std::move(next);
    }
    return out;
}

LinearSystem LinearSystem::project(int q) const {
    if (q > order_) throw std::invalid_argument("projection above system order");
    auto& ech = echelon();
    LinearSystem out(pres_, m_, unknowns_);
    out.order_ = q;
    for (auto& row : ech.rows) {
        bool low = true;
        for (auto& [j, c] : row)
            if (j.mu.order() > q) {
                low = false;
                break;
            }
        if (low && !row.empty()) out.rows_.push_back(row);
    }
    return out;
}

SymbolSpace LinearSystem::symbol(int s) const {
    if (s < order_) throw std::invalid_argument("symbol below system order");
    const LinearSystem* base = this;
    LinearSystem tmp(pres_, m_, unknowns_);
    if (s > order_) {
        tmp = prolong(s - order_);
        base = &tmp;
    }
    std::vector<JetRow> top;
    for (auto& row : base->rows()) {
        JetRow t;
        for (auto& [j, c] : row)
            if (j.mu.order() == s) t[j] = c;
        if (!t.empty()) top.push_back(std::move(t));
    }
    return SymbolSpace(pres_, m_, s, std::move(top));
}

std::string LinearSystem::str() const {
    std::string s;
    for (auto& row : echelon().rows) s += jetrow_str(row, unknowns_, *pres_) + " = 0\n";
    return s;
}

SymbolSpace::SymbolSpace(PresPtr pres, int m, int s, std::vector<JetRow> top_rows)
    : pres_(std::move(pres)), m_(m), s_(s), rows_(std::move(top_rows)) {}

long SymbolSpace::full_dim() const { return (long)m_ * count_of_order(n(), s_); }

int SymbolSpace::rank() const {
    if (!rank_) {
        JetEliminator el;
        for (auto& r : rows_) el.insert(r);
        rank_ = el.rank();
    }
    return *rank_;
}

long SymbolSpace::dim() const { return full_dim() - rank(); }

SymbolSpace SymbolSpace::prolong(int r) const {
    if (r == 0) return *this;
    std::vector<JetRow> out;
    for (auto& row : rows_)
        for (auto& nu : multiindices_of_order(n(), r)) {
            JetRow shifted;
            for (auto& [j, c] : row) shifted[{j.k, j.mu.plus(nu)}] = c;
            out.push_back(std::move(shifted));
        }
    return SymbolSpace(pres_, m_, s_ + r, std::move(out));
}

std::vector<JetRow> SymbolSpace::basis() const {
    JetEliminator el;
    for (auto& r : rows_) el.insert(r);
    // Solved form: pivot = -sum c * parametric. Basis vector per parametric jet.
    std::vector<JetRow> basis;
    int w = pres_->nsyms();
    for (int k = 0; k < m_; ++k)
        for (auto& mu : multiindices_of_order(n(), s_)) {
            JetCoord j{k, mu};
            if (el.has_pivot(j)) continue;
            JetRow vec;
            vec[j] = RatFun::one(w);
            for (auto& e : el.entries()) {
                auto it = e.row.find(j);
                if (it != e.row.end()) vec[e.pivot] = -it->second;
            }
            basis.push_back(std::move(vec));
        }
    return basis;
}

bool has_annihilated_unknown(const LinearSystem& S) {
    for (auto& row : S.echelon().rows)
        if (row.size() == 1 && row.begin()->first.mu.is_zero()) return true;
    return false;
}

} // namespace dsys
