#include "dsys/involution.hpp"

#include <random>
#include <set>

namespace dsys {

IntMat identity_frame(int n) {
    IntMat A(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) A[i][i] = 1;
    return A;
}

namespace {

bool is_identity(const IntMat& A) {
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A.size(); ++j)
            if (A[i][j] != (i == j ? 1 : 0)) return false;
    return true;
}

// Deterministic unimodular integer frames with entries in [-3, 3]:
// products of a permutation and unit-triangular shears.
std::vector<IntMat> candidate_frames(int n, int attempts, unsigned seed) {
    std::vector<IntMat> out;
    out.push_back(identity_frame(n));
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> shear(-1, 1);
    int guard = 0;
    while ((int)out.size() < attempts && guard < attempts * 50) {
        ++guard;
        IntMat L = identity_frame(n), U = identity_frame(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i > j) L[i][j] = shear(rng);
                if (i < j) U[i][j] = shear(rng);
            }
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        IntMat A(n, std::vector<int>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                long s = 0;
                for (int k = 0; k < n; ++k) s += (long)L[perm[i]][k] * U[k][j];
                if (s < -3 || s > 3) goto reject;
                A[i][j] = (int)s;
            }
        if (is_identity(A)) continue;
        out.push_back(A);
    reject:;
    }
    return out;
}

// Class-major column order for character pivoting: class descending,
// then lexicographic, then unknown.
struct ClassMajorLess {
    bool operator()(const JetCoord& a, const JetCoord& b) const {
        int ca = a.mu.cls(), cb = b.mu.cls();
        if (ca != cb) return ca > cb;
        if (a.mu.exps() != b.mu.exps()) return a.mu.exps() < b.mu.exps();
        return a.k < b.k;
    }
};

// Substitute chi_i -> sum_j A[j][i] chibar_j in the symbol rows.
std::vector<JetRow> transform_symbol(const SymbolSpace& g, const IntMat& A) {
    int n = g.n();
    if (is_identity(A)) return g.rows();
    int w = g.pres().nsyms();
    // linear forms per coordinate
    std::vector<std::map<MultiIndex, Rat, MultiIndexLess>> lin(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (A[j][i] != 0) lin[i][MultiIndex(n).plus(j)] = Rat(A[j][i]);
    std::vector<JetRow> out;
    for (auto& row : g.rows()) {
        JetRow nrow;
        for (auto& [j, c] : row) {
            std::map<MultiIndex, Rat, MultiIndexLess> acc;
            acc[MultiIndex(n)] = Rat(1);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < j.mu[i]; ++k) {
                    std::map<MultiIndex, Rat, MultiIndexLess> nxt;
                    for (auto& [m1, c1] : acc)
                        for (auto& [m2, c2] : lin[i]) {
                            MultiIndex m = m1.plus(m2);
                            auto [it, fresh] = nxt.emplace(m, c1 * c2);
                            if (!fresh) it->second += c1 * c2;
                        }
                    acc = std::move(nxt);
                }
            for (auto& [nu, r] : acc) {
                if (r == 0) continue;
                RatFun cc = c * RatFun::constant(r, w);
                JetCoord key{j.k, nu};
                auto it = nrow.find(key);
                if (it == nrow.end())
                    nrow.emplace(key, cc);
                else {
                    it->second = it->second + cc;
                    if (it->second.is_zero()) nrow.erase(it);
                }
            }
        }
        if (!nrow.empty()) out.push_back(std::move(nrow));
    }
    return out;
}

CharacterVector chars_of_rows(const std::vector<JetRow>& rows, int m, int n, int s) {
    Eliminator<JetCoord, ClassMajorLess> el;
    for (auto& r : rows) {
        Eliminator<JetCoord, ClassMajorLess>::Row row;
        for (auto& [j, c] : r) row[j] = c;
        el.insert(std::move(row));
    }
    CharacterVector cv;
    cv.alpha.assign(n, 0);
    cv.beta.assign(n, 0);
    for (auto& e : el.entries()) cv.beta[e.pivot.mu.cls() - 1] += 1;
    for (int c = 1; c <= n; ++c)
        cv.alpha[c - 1] = (long)m * count_of_class(n, s, c) - cv.beta[c - 1];
    return cv;
}

} // namespace

CharacterVector characters_in_frame(const SymbolSpace& g, const IntMat& A) {
    auto rows = transform_symbol(g, A);
    return chars_of_rows(rows, g.m(), g.n(), g.order());
}

std::pair<CharacterVector, IntMat> characters(const SymbolSpace& g, int attempts,
                                              unsigned seed) {
    auto frames = candidate_frames(g.n(), std::max(1, attempts), seed);
    CharacterVector best;
    IntMat best_frame;
    bool have = false;
    for (auto& A : frames) {
        CharacterVector cv = characters_in_frame(g, A);
        if (!have || cv.weighted_sum() < best.weighted_sum()) {
            best = cv;
            best_frame = A;
            have = true;
        }
    }
    return {best, best_frame};
}

namespace {

// Column/row keys for Lambda^s T* x S_t x E spaces.
struct LamKey {
    std::vector<int> I; // strictly increasing, 0-based
    JetCoord j;
    bool operator<(const LamKey& o) const {
        if (I != o.I) return I < o.I;
        return JetCoord::cmp(j, o.j) < 0;
    }
};
struct LamLess {
    bool operator()(const LamKey& a, const LamKey& b) const { return a < b; }
};
using LamRow = std::map<LamKey, RatFun, LamLess>;

std::vector<std::vector<int>> subsets_of_size(int n, int s) {
    std::vector<std::vector<int>> out;
    if (s < 0 || s > n) return out;
    std::vector<int> idx(s);
    for (int i = 0; i < s; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        int i = s - 1;
        while (i >= 0 && idx[i] == n - s + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < s; ++k) idx[k] = idx[k - 1] + 1;
    }
    return out;
}

// dx^i wedge dx^I: sign and merged index set; zero if i in I.
std::optional<std::pair<int, std::vector<int>>> wedge(int i, const std::vector<int>& I) {
    std::vector<int> J;
    int sign = 1;
    bool placed = false;
    for (int v : I) {
        if (v == i) return std::nullopt;
        if (!placed && v > i) {
            J.push_back(i);
            placed = true;
        }
        if (!placed) sign = -sign;
        J.push_back(v);
    }
    if (!placed) J.push_back(i);
    return std::make_pair(sign, J);
}

// delta of one element given its ambient coordinates over order-t jets.
LamRow delta_apply(const LamRow& elem, int n, int w) {
    LamRow out;
    for (auto& [key, c] : elem) {
        for (int i = 0; i < n; ++i) {
            if (!key.j.mu.contains(MultiIndex(n).plus(i))) continue;
            auto wi = wedge(i, key.I);
            if (!wi) continue;
            LamKey nk{wi->second, {key.j.k, key.j.mu.minus(i)}};
            RatFun add = c * RatFun::constant(Rat(wi->first), w);
            auto it = out.find(nk);
            if (it == out.end())
                out.emplace(nk, add);
            else {
                it->second = it->second + add;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return out;
}

// Basis of Lambda^s x g_t in ambient coordinates. For t < base order of the
// symbol family the full symmetric space is used.
std::vector<LamRow> lambda_basis(const SymbolSpace& g0, int s, int t) {
    int n = g0.n(), m = g0.m(), w = g0.pres().nsyms();
    if (t < 0) return {};
    std::vector<JetRow> gbasis;
    if (t < g0.order()) {
        for (int k = 0; k < m; ++k)
            for (auto& mu : multiindices_of_order(n, t)) {
                JetRow v;
                v[{k, mu}] = RatFun::one(w);
                gbasis.push_back(std::move(v));
            }
    } else {
        gbasis = g0.prolong(t - g0.order()).basis();
    }
    std::vector<LamRow> out;
    for (auto& I : subsets_of_size(n, s))
        for (auto& b : gbasis) {
            LamRow e;
            for (auto& [j, c] : b) e[{I, j}] = c;
            out.push_back(std::move(e));
        }
    return out;
}

long rank_of(const std::vector<LamRow>& rows) {
    Eliminator<LamKey, LamLess> el;
    for (auto& r : rows) el.insert(r);
    return el.rank();
}

} // namespace

CohomologyDims delta_cohomology(const SymbolSpace& g, int s, int r) {
    int n = g.n(), w = g.pres().nsyms();
    if (s < 0 || s > n) throw std::invalid_argument("cohomology degree out of range");
    if (r < 0) throw std::invalid_argument("negative prolongation in cohomology");
    int t = g.order() + r;
    CohomologyDims out;
    out.s = s;
    out.r = r;
    auto mid = lambda_basis(g, s, t);
    out.dim_space = (long)mid.size();
    // outgoing delta: Lambda^s x g_t -> Lambda^{s+1} x g_{t-1}
    std::vector<LamRow> images;
    for (auto& e : mid) {
        LamRow im = delta_apply(e, n, w);
        if (im.empty()) continue;
        if (!delta_apply(im, n, w).empty()) // delta o delta audit
            throw std::logic_error("delta o delta != 0");
        images.push_back(std::move(im));
    }
    long rank_out = rank_of(images);
    out.dim_Z = out.dim_space - rank_out;
    // incoming delta: Lambda^{s-1} x g_{t+1} -> Lambda^s x g_t
    long rank_in = 0;
    if (s >= 1) {
        auto up = lambda_basis(g, s - 1, t + 1);
        std::vector<LamRow> imgs;
        for (auto& e : up) {
            LamRow im = delta_apply(e, n, w);
            if (!im.empty()) imgs.push_back(std::move(im));
        }
        rank_in = rank_of(imgs);
    }
    out.dim_B = rank_in;
    out.dim_H = out.dim_Z - out.dim_B;
    if (out.dim_H < 0) throw std::logic_error("negative delta-cohomology dimension");
    return out;
}

std::string verdict_str(Verdict v) {
    switch (v) {
    case Verdict::Involutive: return "involutive";
    case Verdict::FormallyIntegrableOnly: return "formally-integrable-only";
    case Verdict::Incomplete: return "incomplete";
    case Verdict::Degenerate: return "degenerate: unknowns annihilated";
    }
    return "?";
}

std::vector<DiffOp> row_as_ops(const JetRow& row, int m, const Presentation& pres) {
    std::vector<DiffOp> ops(m, DiffOp(pres));
    for (auto& [j, c] : row) ops[j.k].add_term(j.mu, c);
    return ops;
}

namespace {

std::vector<TabularRow> make_tabular(const LinearSystem& S) {
    std::vector<TabularRow> rows;
    int q = S.order();
    for (size_t i = 0; i < S.echelon().rows.size(); ++i) {
        const JetCoord& p = S.echelon().pivots[i];
        TabularRow tr;
        tr.lead = jet_name(p, S.unknowns());
        if (p.mu.order() == q) {
            tr.cls = p.mu.cls();
            for (int v = 1; v <= tr.cls; ++v) tr.mult.push_back(v);
        }
        rows.push_back(std::move(tr));
    }
    return rows;
}

bool surjective_one_step(const LinearSystem& S, LinearSystem* projected = nullptr) {
    int q = S.order();
    LinearSystem P = S.prolong(1).project(q);
    bool ok = P.dim() == S.dim();
    if (projected) *projected = P;
    return ok;
}

} // namespace

InvolutionReport involution_test(const LinearSystem& S, const Budget& budget) {
    InvolutionReport rep;
    int q = S.order(), n = S.n();
    rep.surjective = surjective_one_step(S);
    SymbolSpace g = S.symbol(q);
    auto [cv, frame] = characters(g, budget.delta_attempts, budget.seed);
    rep.chars = cv;
    rep.frame = frame;
    rep.dim_symbol = g.dim();
    rep.dim_symbol_next = g.prolong(1).dim();
    rep.dim_solution_fiber = S.dim();
    rep.janet_equality = rep.dim_symbol_next == cv.weighted_sum();
    rep.tabular = make_tabular(S);

    bool two_acyclic = true;
    int smax = rep.janet_equality ? n : 2;
    for (int r = 0; r <= 1; ++r)
        for (int s = 1; s <= smax; ++s) {
            CohomologyDims cd = delta_cohomology(g, s, r);
            rep.cohomology.push_back(cd);
            if (s <= 2 && cd.dim_H != 0) two_acyclic = false;
            if (rep.janet_equality && cd.dim_H != 0)
                throw std::logic_error("Janet equality certified involution but delta-cohomology "
                                       "does not vanish (non-regular frame slipped through)");
        }

    if (rep.surjective && rep.janet_equality)
        rep.verdict = Verdict::Involutive;
    else if (rep.surjective && two_acyclic)
        rep.verdict = Verdict::FormallyIntegrableOnly;
    else
        rep.verdict = Verdict::Incomplete;
    if (rep.verdict == Verdict::Involutive && has_annihilated_unknown(S))
        rep.verdict = Verdict::Degenerate;
    return rep;
}

namespace {

using ProvTag = JetEliminator::Tag; // map<(tau, nu), RatFun>

struct TaggedRow {
    JetRow row;
    ProvTag tag;
};

TaggedRow derive_tagged(const Presentation& pres, const TaggedRow& tr, int i) {
    TaggedRow out;
    out.row = formal_derivative(pres, tr.row, i);
    for (auto& [key, c] : tr.tag) {
        auto add = [&](const std::pair<int, MultiIndex>& k, const RatFun& v) {
            if (v.is_zero()) return;
            auto it = out.tag.find(k);
            if (it == out.tag.end())
                out.tag.emplace(k, v);
            else {
                it->second = it->second + v;
                if (it->second.is_zero()) out.tag.erase(it);
            }
        };
        add({key.first, key.second.plus(i)}, c);
        add(key, deriv(pres, c, i));
    }
    return out;
}

} // namespace

PPResult pp_complete(const LinearSystem& S, const Budget& budget) {
    const Presentation& pres = S.pres();
    int n = S.n(), m = S.m(), w = pres.nsyms();

    // Working rows with provenance over the input rows.
    std::vector<TaggedRow> cur;
    for (size_t t = 0; t < S.rows().size(); ++t) {
        TaggedRow tr;
        tr.row = S.rows()[t];
        tr.tag[{(int)t, MultiIndex(n)}] = RatFun::one(w);
        cur.push_back(std::move(tr));
    }

    auto as_system = [&](const std::vector<TaggedRow>& rows, int order_floor) {
        LinearSystem sys(S.pres_ptr(), m, S.unknowns());
        for (auto& tr : rows) sys.add_row(tr.row);
        if (sys.order() < order_floor) {
            // keep the declared order by a no-op: prolongation handles ranges
        }
        return sys;
    };

    std::vector<TraceStep> trace;
    int advances = 0;
    int guard = 0;

    while (true) {
        if (++guard > 512) throw std::logic_error("PP completion runaway");
        LinearSystem sys = as_system(cur, 0);
        int q = sys.order();

        // One prolongation of every current row.
        std::vector<TaggedRow> pro = cur;
        for (auto& tr : cur)
            for (int i = 0; i < n; ++i) pro.push_back(derive_tagged(pres, tr, i));

        // Echelon with provenance.
        JetEliminator el;
        for (auto& tr : pro) el.insert(tr.row, tr.tag);

        // Projection to order q: rows with all jets of order <= q.
        std::vector<TaggedRow> projected;
        for (auto& e : el.entries()) {
            if (e.pivot.mu.order() > q) continue;
            projected.push_back({e.row, e.tag});
        }
        LinearSystem proj_sys(S.pres_ptr(), m, S.unknowns());
        for (auto& tr : projected) proj_sys.add_row(tr.row);
        bool new_rows = !projected.empty() && proj_sys.dim_at(q) < sys.dim_at(q);

        if (new_rows) {
            // Adjoin: restart from the projected system.
            TraceStep step;
            step.adjoined = true;
            step.order = q;
            JetEliminator known;
            for (auto& tr : cur) known.insert(tr.row);
            for (auto& tr : projected) {
                JetRow probe = tr.row;
                known.reduce(probe);
                if (!probe.empty()) {
                    // Normalize for the trace.
                    RatFun inv = probe.begin()->second.inverse();
                    JetRow norm;
                    for (auto& [j, c] : probe) norm[j] = c * inv;
                    step.added.push_back(jetrow_str(norm, S.unknowns(), pres));
                    step.added_rows.push_back(norm);
                    known.insert(probe);
                }
            }
            trace.push_back(std::move(step));
            cur = std::move(projected);
            continue;
        }

        // Surjective at this order; test the symbol.
        SymbolSpace g = sys.symbol(q);
        auto [cv, frame] = characters(g, budget.delta_attempts, budget.seed);
        long next_dim = g.prolong(1).dim();
        if (next_dim == cv.weighted_sum()) {
            InvolutionReport rep = involution_test(sys, budget);
            rep.trace = trace;
            // Provenance matrix.
            auto& ech = sys.echelon();
            // Recompute echelon with tags to align provenance with rows.
            JetEliminator final_el;
            for (auto& tr : cur) final_el.insert(tr.row, tr.tag);
            OpMatrix T((int)final_el.entries().size(), (int)S.rows().size(), pres);
            LinearSystem out(S.pres_ptr(), m, S.unknowns());
            int r = 0;
            for (auto& e : final_el.entries()) {
                out.add_row(e.row);
                for (auto& [key, c] : e.tag) T.at(r, key.first).add_term(key.second, c);
                ++r;
            }
            (void)ech;
            rep.dim_solution_fiber = out.dim();
            if (rep.verdict == Verdict::Involutive && has_annihilated_unknown(out))
                rep.verdict = Verdict::Degenerate;
            return {std::move(out), std::move(rep), std::move(T)};
        }

        // Symbol not involutive: advance one order.
        if (++advances > budget.max_prolong)
            throw BudgetError("PP budget exhausted (steps=" + std::to_string(advances) + ")",
                              "pp_complete");
        TraceStep step;
        step.adjoined = false;
        step.order = q + 1;
        trace.push_back(step);
        cur = std::move(pro);
    }
}

CKReport ck_data(const LinearSystem& S, const Budget& budget) {
    InvolutionReport rep = involution_test(S, budget);
    if (rep.verdict != Verdict::Involutive && rep.verdict != Verdict::Degenerate)
        throw std::invalid_argument("system not involutive");
    int n = S.n(), q = S.order();
    CKReport out;
    out.counts.assign(n + 1, 0);
    bool zero_order_pivot = false;
    for (auto& p : S.echelon().pivots)
        if (p.mu.is_zero()) zero_order_pivot = true;
    if (q == 1 && !zero_order_pivot) {
        // First-order full-projection counting via the pivot classes.
        auto& beta = rep.chars.beta;
        out.counts[0] = beta.empty() ? 0 : beta[0];
        for (int i = 1; i < n; ++i) out.counts[i] = beta[i] - beta[i - 1];
        out.counts[n] = S.m() - beta[n - 1];
    } else {
        out.counts[0] = S.dim_at(q - 1);
        for (int i = 1; i <= n; ++i) out.counts[i] = rep.chars.alpha[i - 1];
    }
    out.finite_type = rep.chars.sum_alpha() == 0;
    if (out.finite_type) {
        long total = out.counts[0];
        for (int i = 1; i <= n; ++i)
            if (out.counts[i] != 0) out.finite_type = false;
        if (out.finite_type) out.total_constants = total;
    }
    return out;
}

SpencerFormResult spencer_form(const LinearSystem& S, const Budget& budget) {
    InvolutionReport rep = involution_test(S, budget);
    if (rep.verdict != Verdict::Involutive && rep.verdict != Verdict::Degenerate)
        throw std::invalid_argument("system not involutive");
    const Presentation& pres = S.pres();
    int n = S.n(), w = pres.nsyms();
    int q = S.order();

    std::vector<JetCoord> params = S.parametric_jets();
    auto zindex = [&](const JetCoord& j) {
        for (size_t i = 0; i < params.size(); ++i)
            if (params[i] == j) return (int)i;
        return -1;
    };
    // Sort z-unknowns by (k, order, lex) for readable names.
    std::sort(params.begin(), params.end(), [](const JetCoord& a, const JetCoord& b) {
        if (a.k != b.k) return a.k < b.k;
        if (a.mu.order() != b.mu.order()) return a.mu.order() < b.mu.order();
        return a.mu.exps() < b.mu.exps();
    });

    LinearSystem R1 = S.prolong(1);
    auto& ech = R1.echelon();
    auto solved = [&](const JetCoord& t) -> std::optional<JetRow> {
        for (size_t i = 0; i < ech.pivots.size(); ++i)
            if (ech.pivots[i] == t) return ech.rows[i];
        return std::nullopt;
    };
    std::vector<JetCoord> params1;
    for (int k = 0; k < S.m(); ++k)
        for (auto& mu : multiindices_of_order(n, q + 1)) {
            JetCoord j{k, mu};
            if (!solved(j)) params1.push_back(j);
        }
    // Canonical (base jet, coordinate) writing for parametric (q+1)-jets.
    auto canon = [&](const JetCoord& t) -> std::pair<JetCoord, int> {
        int c = t.mu.cls();
        for (int i = c - 1; i < n; ++i) {
            if (!t.mu.contains(MultiIndex(n).plus(i))) continue;
            JetCoord base{t.k, t.mu.minus(i)};
            if (zindex(base) >= 0) return {base, i};
        }
        throw std::logic_error("no parametric writing for a parametric jet");
    };

    std::vector<std::string> znames;
    for (size_t i = 0; i < params.size(); ++i) znames.push_back("z" + std::to_string(i + 1));
    LinearSystem out(S.pres_ptr(), (int)params.size(), znames);

    // Rewrite an order <= q+1 jet row into z / z-dot coordinates.
    auto emit = [&](const JetCoord& t, const RatFun& coef, JetRow& into) {
        auto add = [&](const JetCoord& zj, const RatFun& c) {
            if (c.is_zero()) return;
            auto it = into.find(zj);
            if (it == into.end())
                into.emplace(zj, c);
            else {
                it->second = it->second + c;
                if (it->second.is_zero()) into.erase(it);
            }
        };
        if (t.mu.order() <= q) {
            int zi = zindex(t);
            if (zi < 0) throw std::logic_error("principal jet leaked into rewriting");
            add({zi, MultiIndex(n)}, coef);
        } else {
            auto [base, i] = canon(t);
            add({zindex(base), MultiIndex(n).plus(i)}, coef);
        }
    };

    for (size_t p = 0; p < params.size(); ++p) {
        for (int i = 0; i < n; ++i) {
            JetCoord target{params[p].k, params[p].mu.plus(i)};
            bool is_param1 = false;
            if (target.mu.order() == q + 1) {
                for (auto& pj : params1)
                    if (pj == target) {
                        is_param1 = true;
                        break;
                    }
            }
            JetRow eq;
            JetCoord lhs{(int)p, MultiIndex(n).plus(i)};
            if (target.mu.order() <= q) {
                auto sv = solved(target);
                eq[lhs] = RatFun::one(w);
                if (sv) {
                    // target + sum c par = 0 -> target = -sum c par
                    for (auto& [j, c] : *sv) {
                        if (j == target) continue;
                        emit(j, c, eq);
                    }
                } else {
                    emit(target, -RatFun::one(w), eq);
                }
            } else if (is_param1) {
                auto [base, bi] = canon(target);
                if (base == params[p] && bi == i) continue; // free derivative slot
                eq[lhs] = RatFun::one(w);
                emit(target, -RatFun::one(w), eq);
            } else {
                auto sv = solved(target);
                if (!sv) throw std::logic_error("missing solved form in Spencer reduction");
                eq[lhs] = RatFun::one(w);
                for (auto& [j, c] : *sv) {
                    if (j == target) continue;
                    emit(j, c, eq);
                }
            }
            if (!eq.empty()) out.add_row(std::move(eq));
        }
    }
    return {std::move(out), std::move(params)};
}

SpencerBundleDims spencer_bundle_dims(const LinearSystem& S, const Budget& budget) {
    InvolutionReport rep = involution_test(S, budget);
    if (rep.verdict != Verdict::Involutive && rep.verdict != Verdict::Degenerate)
        throw std::invalid_argument("system not involutive");
    int n = S.n(), m = S.m(), q = S.order(), w = S.pres().nsyms();
    SpencerBundleDims out;

    // Basis of R_q from the echelon solved form.
    std::vector<JetRow> rbasis;
    {
        auto& ech = S.echelon();
        for (int k = 0; k < m; ++k)
            for (auto& mu : multiindices_up_to(n, q)) {
                JetCoord j{k, mu};
                bool ispivot = false;
                for (auto& p : ech.pivots)
                    if (p == j) {
                        ispivot = true;
                        break;
                    }
                if (ispivot) continue;
                JetRow vec;
                vec[j] = RatFun::one(w);
                for (size_t i = 0; i < ech.rows.size(); ++i) {
                    auto it = ech.rows[i].find(j);
                    if (it != ech.rows[i].end()) vec[ech.pivots[i]] = -it->second;
                }
                rbasis.push_back(std::move(vec));
            }
    }
    long dimR = (long)rbasis.size();
    long dimJ = (long)m * count_up_to(n, q);

    SymbolSpace g = S.symbol(q);
    SymbolSpace g1 = g.prolong(1);

    for (int r = 0; r <= n; ++r) {
        // Janet bundle F_r = Lambda^r x J_q / (Lambda^r x R_q + delta(Lambda^{r-1} x S_{q+1} x E))
        Eliminator<LamKey, LamLess> sum;
        for (auto& I : subsets_of_size(n, r))
            for (auto& b : rbasis) {
                LamRow e;
                for (auto& [j, c] : b) e[{I, j}] = c;
                sum.insert(std::move(e));
            }
        if (r >= 1) {
            for (auto& I : subsets_of_size(n, r - 1))
                for (int k = 0; k < m; ++k)
                    for (auto& mu : multiindices_of_order(n, q + 1)) {
                        LamRow e;
                        e[{I, {k, mu}}] = RatFun::one(w);
                        LamRow im = delta_apply(e, n, w);
                        if (!im.empty()) sum.insert(std::move(im));
                    }
        }
        out.janet.push_back(binom(n, r) * dimJ - sum.rank());

        // Spencer bundle C_r = Lambda^r x R_q / delta(Lambda^{r-1} x g_{q+1})
        long rank_delta = 0;
        if (r >= 1) {
            std::vector<LamRow> imgs;
            for (auto& I : subsets_of_size(n, r - 1))
                for (auto& b : g1.basis()) {
                    LamRow e;
                    for (auto& [j, c] : b) e[{I, j}] = c;
                    LamRow im = delta_apply(e, n, w);
                    if (!im.empty()) imgs.push_back(std::move(im));
                }
            Eliminator<LamKey, LamLess> el;
            for (auto& e : imgs) el.insert(e);
            rank_delta = el.rank();
        }
        out.spencer.push_back(binom(n, r) * dimR - rank_delta);
    }
    return out;
}

} // namespace dsys
