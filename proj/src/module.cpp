#include "dsys/module.hpp"

#include <set>

namespace dsys {

LinearSystem module_system(PresPtr pres, const PresentedModule& M,
                           std::vector<std::string> names) {
    LinearSystem S(std::move(pres), M.m, std::move(names));
    for (int r = 0; r < M.relations.rows(); ++r) S.add_equation_op(M.relations.row(r));
    return S;
}

LinearSystem combined_system(PresPtr pres, const OpMatrix& D) {
    int m = D.cols(), p = D.rows();
    std::vector<std::string> names;
    for (int k = 1; k <= m; ++k) names.push_back("y" + std::to_string(k));
    for (int t = 1; t <= p; ++t) names.push_back("u" + std::to_string(t));
    LinearSystem S(pres, m + p, names);
    int w = pres->nsyms();
    for (int t = 0; t < p; ++t) {
        JetRow row;
        for (int k = 0; k < m; ++k)
            for (auto& [mu, c] : D.at(t, k).terms()) row[{k, mu}] = c;
        JetCoord uj{m + t, MultiIndex(pres->n())};
        row[uj] = -RatFun::one(w);
        S.add_row(std::move(row));
    }
    return S;
}

namespace {

// Elimination order with the first `split` unknowns ranked before the rest.
struct SplitJetLess {
    int split = 0;
    bool operator()(const JetCoord& a, const JetCoord& b) const {
        bool ua = a.k >= split, ub = b.k >= split;
        if (ua != ub) return !ua;
        return JetCoord::cmp(a, b) < 0;
    }
};

} // namespace

namespace {

// Incremental span of the left module generated by u-operator rows,
// truncated at a growing order cap. Membership in the K-span of the
// prolongations certifies module membership (never the converse).
struct GenSpan {
    PresPtr pres;
    int p;
    int cap = 0;
    bool truncated = false;
    JetEliminator el;
    std::vector<std::vector<JetRow>> frontiers; // per generator

    GenSpan(PresPtr pr, int p_) : pres(std::move(pr)), p(p_) {}

    static int row_order(const JetRow& r) {
        int o = -1;
        for (auto& [j, c] : r) o = std::max(o, j.mu.order());
        return o;
    }

    void add_generator(const JetRow& g) {
        el.insert(g);
        frontiers.push_back({g});
        grow_one(frontiers.back());
    }
    void raise_cap(int new_cap) {
        while (cap < new_cap) {
            ++cap;
            for (auto& fr : frontiers) grow_one(fr);
        }
    }
    void grow_one(std::vector<JetRow>& frontier) {
        std::vector<JetRow> next;
        for (auto& r : frontier) {
            if (row_order(r) >= cap) {
                next.push_back(r);
                continue;
            }
            for (int i = 0; i < pres->n(); ++i) {
                JetRow d;
                try {
                    d = formal_derivative(*pres, r, i);
                } catch (const PresentationError&) {
                    truncated = true; // jet family exhausted in this direction
                    continue;
                }
                if (d.empty()) continue;
                el.insert(d);
                next.push_back(std::move(d));
            }
        }
        frontier = std::move(next);
    }
    bool member(const JetRow& r) {
        JetRow probe = r;
        el.reduce(probe);
        return probe.empty();
    }
};

} // namespace

OpMatrix syzygies(PresPtr pres, const OpMatrix& D, const Budget& budget) {
    int m = D.cols(), p = D.rows();
    if (p == 0) return OpMatrix(0, 0, *pres);
    bool has_zero_row = false;
    for (int r = 0; r < p; ++r) {
        bool z = true;
        for (int c = 0; c < m; ++c)
            if (!D.at(r, c).is_zero()) z = false;
        if (z) has_zero_row = true;
    }
    // A single nonzero row over a domain admits no left syzygy.
    if (p == 1 && !has_zero_row) return OpMatrix(0, 1, *pres);

    // Escalating kernel search on the combined system D y = u: rows with
    // u-jets only are exactly the syzygies truncated at the working order.
    LinearSystem comb = combined_system(pres, D);
    Eliminator<JetCoord, SplitJetLess> el(SplitJetLess{m});
    std::vector<std::pair<JetRow, int>> frontier;
    for (auto& row : comb.rows()) {
        Eliminator<JetCoord, SplitJetLess>::Row r;
        for (auto& [j, c] : row) r[j] = c;
        el.insert(r);
        frontier.push_back({row, 0});
    }
    GenSpan span(pres, p);
    std::vector<JetRow> gen_rows;
    std::set<std::pair<int, std::vector<int>>> seen_pivots;

    auto harvest = [&]() {
        // Pure u-rows with pivots not processed before, lowest order first.
        // Rows behind already-processed pivots stay in the span of the
        // generators under back-substitution.
        std::vector<JetRow> cands;
        for (auto& e : el.entries()) {
            if (e.pivot.k < m) continue;
            if (!seen_pivots.insert({e.pivot.k, e.pivot.mu.exps()}).second) continue;
            JetRow u;
            for (auto& [j, c] : e.row) u[{j.k - m, j.mu}] = c;
            cands.push_back(std::move(u));
        }
        std::stable_sort(cands.begin(), cands.end(), [](const JetRow& a, const JetRow& b) {
            int oa = GenSpan::row_order(a), ob = GenSpan::row_order(b);
            if (oa != ob) return oa < ob;
            return a.size() < b.size();
        });
        bool found = false;
        for (auto& c : cands) {
            if (span.member(c)) continue;
            span.add_generator(c);
            gen_rows.push_back(c);
            found = true;
            if (getenv("DSYS_DEBUG"))
                fprintf(stderr, "[syz] gen found: order %d size %zu (total %zu)\n",
                        GenSpan::row_order(c), c.size(), gen_rows.size());
        }
        return found;
    };

    // Generating syzygies can appear after long order gaps, so the search
    // runs at least to a floor tied to the input orders, then continues
    // while finds are recent, capped by the order budget. Jet directions
    // exhausting the presented field truncate the window there.
    int floor_level = pres->n() - 1;
    for (int r = 0; r < p; ++r) {
        int o = 0;
        for (int c = 0; c < m; ++c) o = std::max(o, D.at(r, c).order());
        floor_level += std::max(0, o);
    }
    floor_level = std::max(3, std::min(floor_level, budget.max_order));

    bool truncated = false;
    int last_find = 0;
    span.raise_cap(1);
    if (harvest()) last_find = 0;
    for (int level = 1; level <= budget.max_order && !truncated; ++level) {
        if (level > floor_level && level - last_find > 2) break;
        std::vector<std::pair<JetRow, int>> next;
        for (auto& [row, start] : frontier)
            for (int i = start; i < pres->n(); ++i) {
                JetRow d;
                try {
                    d = formal_derivative(*pres, row, i);
                } catch (const PresentationError&) {
                    // The field ran out of declared jets: the window ends here.
                    truncated = true;
                    continue;
                }
                if (d.empty()) continue;
                Eliminator<JetCoord, SplitJetLess>::Row r;
                for (auto& [j, c] : d) r[j] = c;
                el.insert(r);
                next.push_back({std::move(d), i});
            }
        frontier = std::move(next);
        if (truncated) break;
        span.raise_cap(level + 1);
        if (span.truncated) break;
        if (harvest()) last_find = level;
        if (getenv("DSYS_DEBUG")) {
            size_t maxterms = 0, tot = 0, cnt = 0;
            for (auto& e : el.entries())
                for (auto& [k, v] : e.row) {
                    size_t t = v.num().terms().size() + v.den().terms().size();
                    maxterms = std::max(maxterms, t);
                    tot += t;
                    ++cnt;
                }
            fprintf(stderr, "[syz] level %d done: el rank %d, gens %zu, maxterms %zu, avg %.1f\n",
                    level, el.rank(), gen_rows.size(), maxterms, cnt ? (double)tot / cnt : 0.0);
        }
    }
    if (gen_rows.empty() && truncated)
        throw BudgetError("syzygy search truncated by the presentation bound "
                          "before finding a generator",
                          "syzygies");

    if (gen_rows.empty()) {
        // Certify emptiness: rk(ker) = p - m + rk(M).
        long rk = differential_rank(pres, PresentedModule(m, D), budget);
        if (p - m + rk > 0)
            throw BudgetError("syzygy budget exhausted (kernel rank " +
                                  std::to_string(p - m + rk) + " but no generator found)",
                              "syzygies");
        return OpMatrix(0, p, *pres);
    }

    std::vector<std::vector<DiffOp>> cc;
    for (auto& u : gen_rows) cc.push_back(row_as_ops(u, p, *pres));
    OpMatrix C = OpMatrix::from_rows(cc, p, *pres);
    C = minimize_rows(pres, C, budget);
    if (!compose(*pres, C, D).is_zero())
        throw std::logic_error("syzygy rows do not annihilate the operator");
    return C;
}

namespace {

std::vector<DiffOp> jetrow_to_ops(const JetRow& row, int m, const Presentation& pres) {
    return row_as_ops(row, m, pres);
}

JetRow ops_to_jetrow(const std::vector<DiffOp>& ops) {
    JetRow row;
    for (int k = 0; k < (int)ops.size(); ++k)
        for (auto& [mu, c] : ops[k].terms()) row[{k, mu}] = c;
    return row;
}

int oprow_order(const std::vector<DiffOp>& ops) {
    int o = -1;
    for (auto& op : ops) o = std::max(o, op.order());
    return o;
}

bool oprow_zero(const std::vector<DiffOp>& ops) {
    for (auto& op : ops)
        if (!op.is_zero()) return false;
    return true;
}

} // namespace

ReduceResult reduce(PresPtr pres, const std::vector<DiffOp>& row, const PresentedModule& M,
                    const Budget& budget) {
    if ((int)row.size() != M.m) throw std::invalid_argument("reduce width mismatch");
    ReduceResult out;
    if (oprow_zero(row)) {
        out.member = true;
        out.normal_form.assign(M.m, DiffOp(*pres));
        return out;
    }
    if (M.relations.rows() == 0) {
        out.member = false;
        out.normal_form = row;
        return out;
    }
    int target_order = oprow_order(row);
    JetRow target = ops_to_jetrow(row);

    std::optional<JetRow> prev;
    for (int slack = 0; slack <= budget.membership_slack; ++slack) {
        JetEliminator el;
        for (int r = 0; r < M.relations.rows(); ++r) {
            auto ops = M.relations.row(r);
            int ro = oprow_order(ops);
            int lift = std::max(0, target_order - ro) + slack;
            JetRow base = ops_to_jetrow(ops);
            // all formal derivatives up to order `lift`
            std::vector<std::pair<JetRow, int>> frontier{{base, 0}};
            el.insert(base);
            for (int step = 0; step < lift; ++step) {
                std::vector<std::pair<JetRow, int>> next;
                for (auto& [rr, start] : frontier)
                    for (int i = start; i < pres->n(); ++i) {
                        JetRow d;
                        try {
                            d = formal_derivative(*pres, rr, i);
                        } catch (const PresentationError&) {
                            continue; // span truncated at the field bound
                        }
                        if (d.empty()) continue;
                        el.insert(d);
                        next.push_back({std::move(d), i});
                    }
                frontier = std::move(next);
            }
        }
        JetRow nf = target;
        el.reduce(nf);
        if (nf.empty()) {
            out.member = true;
            out.normal_form.assign(M.m, DiffOp(*pres));
            out.slack_used = slack;
            return out;
        }
        if (prev && *prev == nf) {
            out.member = false;
            out.normal_form = jetrow_to_ops(nf, M.m, *pres);
            out.slack_used = slack;
            return out;
        }
        prev = std::move(nf);
    }
    throw BudgetError("membership budget exhausted (inconclusive)", "reduce");
}

OpMatrix minimize_rows(PresPtr pres, const OpMatrix& rows, const Budget& budget,
                       const OpMatrix* modulo) {
    // Sort candidates by (order, term count) for deterministic greedy keeps.
    std::vector<std::vector<DiffOp>> cand;
    for (int r = 0; r < rows.rows(); ++r)
        if (!oprow_zero(rows.row(r))) cand.push_back(rows.row(r));
    std::stable_sort(cand.begin(), cand.end(),
                     [](const std::vector<DiffOp>& a, const std::vector<DiffOp>& b) {
                         int oa = oprow_order(a), ob = oprow_order(b);
                         if (oa != ob) return oa < ob;
                         size_t ta = 0, tb = 0;
                         for (auto& op : a) ta += op.terms().size();
                         for (auto& op : b) tb += op.terms().size();
                         return ta < tb;
                     });
    // Forward pass: drop a candidate iff it already reduces to zero modulo
    // the rows kept before it (plus the ambient relations, when given).
    std::vector<std::vector<DiffOp>> kept;
    for (auto& c : cand) {
        std::vector<std::vector<DiffOp>> others = kept;
        if (modulo)
            for (int r = 0; r < modulo->rows(); ++r) others.push_back(modulo->row(r));
        if (!others.empty()) {
            PresentedModule M(rows.cols(), OpMatrix::from_rows(others, rows.cols(), *pres));
            try {
                if (reduce(pres, c, M, budget).member) continue;
            } catch (const BudgetError&) {
                // inconclusive: keep the row
            }
        }
        kept.push_back(c);
    }
    return OpMatrix::from_rows(kept, rows.cols(), *pres);
}

ResolutionReport free_resolution(PresPtr pres, const PresentedModule& M, int length,
                                 const Budget& budget) {
    ResolutionReport rep;
    rep.ranks.push_back(M.m);
    if (M.relations.rows() > 0) {
        rep.maps.push_back(M.relations);
        rep.ranks.push_back(M.relations.rows());
        for (int i = 1; i < length; ++i) {
            OpMatrix next = syzygies(pres, rep.maps.back(), budget);
            if (next.rows() == 0) break;
            if (!compose(*pres, next, rep.maps.back()).is_zero()) rep.composes_zero = false;
            rep.maps.push_back(next);
            rep.ranks.push_back(next.rows());
        }
    }
    long chi = 0;
    for (size_t i = 0; i < rep.ranks.size(); ++i)
        chi += (i % 2 == 0 ? 1 : -1) * rep.ranks[i];
    rep.euler_characteristic = chi;
    return rep;
}

SubmoduleSum submodule_sum(PresPtr pres, const OpMatrix& gensL, const OpMatrix& gensM,
                           const PresentedModule& N, const Budget& budget) {
    if (gensL.rows() > 0 && gensL.cols() != N.m)
        throw std::invalid_argument("submodule generator width mismatch");
    if (gensM.rows() > 0 && gensM.cols() != N.m)
        throw std::invalid_argument("submodule generator width mismatch");
    SubmoduleSum out;
    OpMatrix stacked = N.relations;
    if (gensL.rows() > 0) stacked = stacked.vstack(gensL);
    if (gensM.rows() > 0) stacked = stacked.vstack(gensM);
    out.quotient = PresentedModule(N.m, stacked);

    // Presentation of L+M on the generator stack via syzygies.
    int gl = gensL.rows(), gm = gensM.rows();
    OpMatrix gens(0, N.m, *pres);
    if (gl > 0) gens = gensL;
    if (gm > 0) gens = gl > 0 ? gens.vstack(gensM) : gensM;
    OpMatrix all = gens;
    if (N.relations.rows() > 0) all = all.vstack(N.relations);
    OpMatrix syz = syzygies(pres, all, budget);
    std::vector<std::vector<DiffOp>> rel;
    for (int r = 0; r < syz.rows(); ++r) {
        std::vector<DiffOp> sub;
        bool nonzero = false;
        for (int c = 0; c < gl + gm; ++c) {
            sub.push_back(syz.at(r, c));
            if (!syz.at(r, c).is_zero()) nonzero = true;
        }
        if (nonzero) rel.push_back(std::move(sub));
    }
    OpMatrix relm = OpMatrix::from_rows(rel, gl + gm, *pres);
    relm = minimize_rows(pres, relm, budget);
    out.sum = PresentedModule(gl + gm, relm);
    return out;
}

OpMatrix submodule_intersection(PresPtr pres, const OpMatrix& gensL, const OpMatrix& gensM,
                                const PresentedModule& N, const Budget& budget) {
    int gl = gensL.rows(), gm = gensM.rows();
    if (gl == 0 || gm == 0) return OpMatrix(0, N.m, *pres);
    OpMatrix all = gensL.vstack(gensM);
    if (N.relations.rows() > 0) all = all.vstack(N.relations);
    OpMatrix syz = syzygies(pres, all, budget);
    std::vector<std::vector<DiffOp>> gens;
    for (int r = 0; r < syz.rows(); ++r) {
        // Intersection element: (L-block of the syzygy) applied to gensL.
        std::vector<DiffOp> elt(N.m, DiffOp(*pres));
        bool nonzero = false;
        for (int i = 0; i < gl; ++i) {
            if (syz.at(r, i).is_zero()) continue;
            for (int c = 0; c < N.m; ++c) {
                if (gensL.at(i, c).is_zero()) continue;
                elt[c] = elt[c] + compose(*pres, syz.at(r, i), gensL.at(i, c));
            }
        }
        for (auto& op : elt)
            if (!op.is_zero()) nonzero = true;
        if (nonzero) gens.push_back(std::move(elt));
    }
    OpMatrix G = OpMatrix::from_rows(gens, N.m, *pres);
    return minimize_rows(pres, G, budget, &N.relations);
}

long differential_rank(PresPtr pres, const PresentedModule& M, const Budget& budget) {
    if (M.relations.rows() == 0) return M.m;
    LinearSystem S = module_system(pres, M);
    PPResult pp = pp_complete(S, budget);
    return pp.report.chars.alpha.back();
}

std::pair<DiffOp, DiffOp> ore_pair(PresPtr pres, const DiffOp& P,
                                   const DiffOp& U, const Budget& budget) {
    if (U.is_zero()) throw std::invalid_argument("ore_pair requires U != 0");
    if (P.is_zero()) {
        // 0 = Q U with Q = 0 is degenerate; use V = U, Q = P o ... V P = 0 = Q U.
        return {DiffOp::constant(*pres, Rat(1)), DiffOp(*pres)};
    }
    std::vector<std::vector<DiffOp>> rows{{P}, {U}};
    OpMatrix D = OpMatrix::from_rows(rows, 1, *pres);
    OpMatrix syz = syzygies(pres, D, budget);
    std::optional<std::pair<DiffOp, DiffOp>> best;
    for (int r = 0; r < syz.rows(); ++r) {
        DiffOp V = syz.at(r, 0), Q = -syz.at(r, 1);
        if (V.is_zero()) continue;
        if (!best) {
            best = {V, Q};
            continue;
        }
        const DiffOp& bv = best->first;
        if (V.order() < bv.order() ||
            (V.order() == bv.order() &&
             MultiIndex::cmp(V.terms().begin()->first, bv.terms().begin()->first) < 0))
            best = {V, Q};
    }
    if (!best) throw BudgetError("syzygy budget exhausted (no Ore pair found)", "ore_pair");
    // Exactness audit: V P = Q U.
    DiffOp lhs = compose(*pres, best->first, P);
    DiffOp rhs = compose(*pres, best->second, U);
    if (!(lhs == rhs)) throw std::logic_error("ore pair identity failed");
    return *best;
}

namespace {

struct AnsatzKey {
    int j; // column of A (row index of the left inverse entry)
    MultiIndex mu;
    bool operator<(const AnsatzKey& o) const {
        if (j != o.j) return j < o.j;
        return MultiIndex::cmp(mu, o.mu) < 0;
    }
};

} // namespace

std::optional<OpMatrix> left_inverse(PresPtr pres, const OpMatrix& A,
                                     int max_order) {
    int p = A.rows(), m = A.cols();
    if (p < m) return std::nullopt;
    int w = pres->nsyms();
    auto mus = multiindices_up_to(pres->n(), max_order);

    // Expansions d_mu o A_{j,k} as operators, shared across target rows.
    std::map<std::pair<int, int>, std::map<MultiIndex, DiffOp, MultiIndexLess>> expand;
    for (int j = 0; j < p; ++j)
        for (int k = 0; k < m; ++k)
            for (auto& mu : mus)
                expand[{j, k}].emplace(mu, compose(*pres, DiffOp::d(*pres, mu), A.at(j, k)));

    OpMatrix L(m, p, *pres);
    for (int i = 0; i < m; ++i) {
        // Equations indexed by (k, kappa): sum over unknowns (j,mu).
        struct ColKey {
            bool rhs;
            AnsatzKey u;
            bool operator<(const ColKey& o) const {
                if (rhs != o.rhs) return !rhs; // unknowns first, rhs last
                return u < o.u;
            }
        };
        struct ColLess {
            bool operator()(const ColKey& a, const ColKey& b) const { return a < b; }
        };
        std::map<std::pair<int, MultiIndex>, std::map<ColKey, RatFun, ColLess>,
                 std::function<bool(const std::pair<int, MultiIndex>&,
                                    const std::pair<int, MultiIndex>&)>>
            eqs([](const std::pair<int, MultiIndex>& a, const std::pair<int, MultiIndex>& b) {
                if (a.first != b.first) return a.first < b.first;
                return MultiIndex::cmp(a.second, b.second) < 0;
            });
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < m; ++k)
                for (auto& mu : mus) {
                    const DiffOp& op = expand[{j, k}].at(mu);
                    for (auto& [kappa, c] : op.terms())
                        eqs[{k, kappa}][{false, {j, mu}}] = c;
                }
        // RHS: identity row i.
        for (int k = 0; k < m; ++k) {
            auto key = std::make_pair(k, MultiIndex(pres->n()));
            Rat v = (k == i) ? Rat(1) : Rat(0);
            if (v != 0) eqs[key][{true, {}}] = -RatFun::constant(v, w);
        }
        Eliminator<ColKey, ColLess> el;
        for (auto& [ek, row] : eqs) {
            Eliminator<ColKey, ColLess>::Row r;
            for (auto& [ck, c] : row) r[ck] = c;
            el.insert(std::move(r));
        }
        // Inconsistent iff some pivot is the rhs column.
        for (auto& e : el.entries())
            if (e.pivot.rhs) return std::nullopt;
        // Particular solution: free unknowns zero; pivots read off the rhs.
        for (auto& e : el.entries()) {
            auto it = e.row.find(ColKey{true, {}});
            if (it == e.row.end()) continue;
            RatFun val = -it->second;
            if (!val.is_zero()) L.at(i, e.pivot.u.j).add_term(e.pivot.u.mu, val);
        }
    }
    // Verification.
    OpMatrix prod = compose(*pres, L, A);
    if (!(prod == OpMatrix::identity(*pres, m))) return std::nullopt;
    return L;
}

} // namespace dsys
