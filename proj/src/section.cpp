#include "dsys/section.hpp"

namespace dsys {

RatFun Section::value(const JetCoord& j) const {
    auto it = vals_.find(j);
    if (it == vals_.end()) return RatFun::zero(pres_->nsyms());
    return it->second;
}

void Section::set(const JetCoord& j, const RatFun& v) {
    if (j.mu.order() > q_) throw std::invalid_argument("section value beyond order bound");
    if (v.is_zero())
        vals_.erase(j);
    else
        vals_[j] = v;
}

Section Section::truncate(int q) const {
    Section out(pres_, m_, q);
    for (auto& [j, v] : vals_)
        if (j.mu.order() <= q) out.vals_[j] = v;
    return out;
}

Section Section::operator+(const Section& o) const {
    Section out(pres_, m_, std::min(q_, o.q_));
    for (auto& [j, v] : vals_)
        if (j.mu.order() <= out.q_) out.vals_[j] = v;
    for (auto& [j, v] : o.vals_) {
        if (j.mu.order() > out.q_) continue;
        auto it = out.vals_.find(j);
        if (it == out.vals_.end())
            out.vals_[j] = v;
        else {
            it->second = it->second + v;
            if (it->second.is_zero()) out.vals_.erase(it);
        }
    }
    return out;
}

Section Section::operator-(const Section& o) const { return *this + o.scale(-RatFun::one(pres_->nsyms())); }

Section Section::scale(const RatFun& c) const {
    Section out(pres_, m_, q_);
    if (c.is_zero()) return out;
    for (auto& [j, v] : vals_) out.vals_[j] = v * c;
    return out;
}

bool Section::operator==(const Section& o) const {
    return m_ == o.m_ && q_ == o.q_ && vals_ == o.vals_;
}

std::string Section::str(const std::vector<std::string>& unknowns) const {
    std::string s = "{";
    bool first = true;
    for (auto& [j, v] : vals_) {
        if (!first) s += ", ";
        first = false;
        s += jet_name(j, unknowns) + ": " + v.str(pres_->names());
    }
    return s + "}";
}

Section spencer_apply(const Section& f, int i) {
    if (f.order() < 1) throw std::invalid_argument("section order bound too small");
    Section out(f.pres_ptr(), f.m(), f.order() - 1);
    const Presentation& pres = f.pres();
    for (int k = 0; k < f.m(); ++k)
        for (auto& mu : multiindices_up_to(pres.n(), f.order() - 1)) {
            JetCoord j{k, mu};
            RatFun v = deriv(pres, f.value(j), i) - f.value({k, mu.plus(i)});
            if (!v.is_zero()) out.set(j, v);
        }
    return out;
}

bool is_section(const LinearSystem& S, const Section& f) {
    if (f.order() < S.order()) throw std::invalid_argument("section shorter than system order");
    LinearSystem P = S.order() < f.order() ? S.prolong(f.order() - S.order()) : S;
    for (auto& row : P.rows()) {
        RatFun acc = RatFun::zero(S.pres().nsyms());
        for (auto& [j, c] : row) acc = acc + c * f.value(j);
        if (!acc.is_zero()) return false;
    }
    return true;
}

std::vector<Section> section_basis(const LinearSystem& S, int Q, const Budget& budget) {
    InvolutionReport rep = involution_test(S, budget);
    if (rep.verdict != Verdict::Involutive && rep.verdict != Verdict::Degenerate)
        throw std::invalid_argument("system not involutive");
    if (Q < S.order()) throw std::invalid_argument("truncation too small");
    LinearSystem P = Q > S.order() ? S.prolong(Q - S.order()) : S;
    auto& ech = P.echelon();
    int w = S.pres().nsyms();
    std::vector<Section> out;
    for (auto& pj : P.parametric_jets()) {
        Section f(S.pres_ptr(), S.m(), Q);
        f.set(pj, RatFun::one(w));
        for (size_t i = 0; i < ech.rows.size(); ++i) {
            auto it = ech.rows[i].find(pj);
            if (it != ech.rows[i].end()) f.set(ech.pivots[i], -it->second);
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::string modular_equation(const Section& f, const std::vector<std::string>& unknowns) {
    if (f.is_zero()) return "E = 0";
    std::string s = "E = ";
    bool first = true;
    bool multi = f.m() > 1;
    for (auto& [j, v] : f.values()) {
        std::string cs = v.str(f.pres().names());
        bool neg = cs[0] == '-' && v.num().terms().size() == 1;
        std::string body = neg ? cs.substr(1) : cs;
        if (body.find_first_of("+-") != std::string::npos && body.front() != '(')
            body = "(" + body + ")";
        std::string slot = "a^{";
        if (multi) slot += unknowns[j.k] + ";";
        slot += j.mu.is_zero() ? "0" : j.mu.digits();
        slot += "}";
        std::string term = (body == "1") ? slot : body + "*" + slot;
        if (first)
            s += (neg ? "-" : "") + term;
        else
            s += (neg ? " - " : " + ") + term;
        first = false;
    }
    return s + " = 0";
}

namespace {

// Span test: do the derivative words of gens (depth <= depth, truncated to
// order q) cover every basis section truncated to order q?
struct SpanChecker {
    const Presentation& pres;
    int m, q, depth;

    using Key = JetCoord;
    Eliminator<JetCoord, JetLess> el;

    explicit SpanChecker(const Presentation& p, int m_, int q_, int d)
        : pres(p), m(m_), q(q_), depth(d) {}

    static JetRow as_row(const Section& f, int q) {
        JetRow r;
        for (auto& [j, v] : f.values())
            if (j.mu.order() <= q) r[j] = v;
        return r;
    }

    void add_generator(const Section& g) {
        // Canonical derivative words up to depth (Spencer derivatives commute).
        std::vector<std::pair<MultiIndex, Section>> frontier{{MultiIndex(pres.n()), g}};
        insert(g);
        for (int d = 0; d < depth; ++d) {
            std::vector<std::pair<MultiIndex, Section>> next;
            for (auto& [nu, f] : frontier) {
                if (f.order() < 1) continue;
                int hi = nu.is_zero() ? pres.n() : nu.cls();
                for (int i = 0; i < hi; ++i) {
                    Section df = spencer_apply(f, i);
                    MultiIndex dnu = nu.plus(i);
                    if (!df.is_zero()) insert(df);
                    next.push_back({dnu, std::move(df)});
                }
            }
            frontier = std::move(next);
        }
    }
    void insert(const Section& f) { el.insert(as_row(f, q)); }
    bool covers(const std::vector<Section>& basis) {
        for (auto& b : basis) {
            JetRow r = as_row(b, q);
            el.reduce(r);
            if (!r.empty()) return false;
        }
        return true;
    }
};

} // namespace

GeneratorReport generating_sections(const LinearSystem& S, int Q, const Budget& budget) {
    GeneratorReport rep;
    int q = S.order();
    if (Q < q) throw std::invalid_argument("truncation too small");
    int depth = Q - q;
    rep.basis = section_basis(S, Q, budget);
    const Presentation& pres = S.pres();

    // Scan in elimination order of the dual parametric jet: highest first.
    std::vector<size_t> scan(rep.basis.size());
    for (size_t i = 0; i < scan.size(); ++i) scan[i] = i;
    // section_basis returns duals in parametric-jet order already.

    auto try_gens = [&](const std::vector<Section>& gens) {
        SpanChecker chk(pres, S.m(), q, depth);
        for (auto& g : gens) chk.add_generator(g);
        return chk.covers(rep.basis);
    };

    std::vector<Section> chosen;
    // Singletons, highest dual first.
    for (size_t i : scan) {
        if (try_gens({rep.basis[i]})) {
            chosen = {rep.basis[i]};
            break;
        }
    }
    // Pairwise combinations over duals in ascending jet order (order, then
    // unknown, then lex), relative sign - tried before +.
    if (chosen.empty() && rep.basis.size() >= 2 && rep.basis.size() <= 16) {
        auto params = (Q > q ? S.prolong(Q - q) : S).parametric_jets();
        std::vector<size_t> asc = scan;
        std::sort(asc.begin(), asc.end(), [&](size_t a, size_t b) {
            const JetCoord& ja = params[a];
            const JetCoord& jb = params[b];
            if (ja.mu.order() != jb.mu.order()) return ja.mu.order() < jb.mu.order();
            if (ja.k != jb.k) return ja.k < jb.k;
            return ja.mu.exps() < jb.mu.exps();
        });
        for (size_t a = 0; a < asc.size() && chosen.empty(); ++a)
            for (size_t b = a + 1; b < asc.size() && chosen.empty(); ++b)
                for (int sign : {-1, 1}) {
                    Section h = sign < 0 ? rep.basis[asc[a]] - rep.basis[asc[b]]
                                         : rep.basis[asc[a]] + rep.basis[asc[b]];
                    if (try_gens({h})) {
                        chosen = {h};
                        break;
                    }
                }
    }
    // Greedy fallback: add duals (highest first) until covered.
    if (chosen.empty()) {
        SpanChecker chk(pres, S.m(), q, depth);
        for (size_t i : scan) {
            JetRow r = SpanChecker::as_row(rep.basis[i], q);
            chk.el.reduce(r);
            if (r.empty()) continue;
            chk.add_generator(rep.basis[i]);
            chosen.push_back(rep.basis[i]);
            if (chk.covers(rep.basis)) break;
        }
    }

    // Normalize sign on the earliest nonzero slot.
    for (auto& g : chosen) {
        if (g.is_zero()) continue;
        RatFun lead = g.values().begin()->second;
        g = g.scale(lead.inverse());
    }
    rep.generators = chosen;
    for (auto& g : rep.generators)
        rep.modular_equations.push_back(modular_equation(g, S.unknowns()));

    // Derivation words expressing every basis section from the generators.
    struct WordKey {
        int g;
        MultiIndex nu;
    };
    std::vector<std::pair<WordKey, Section>> words;
    for (int gi = 0; gi < (int)rep.generators.size(); ++gi) {
        std::vector<std::pair<MultiIndex, Section>> frontier{
            {MultiIndex(pres.n()), rep.generators[gi]}};
        words.push_back({{gi, MultiIndex(pres.n())}, rep.generators[gi]});
        for (int d = 0; d < depth; ++d) {
            std::vector<std::pair<MultiIndex, Section>> next;
            for (auto& [nu, f] : frontier) {
                if (f.order() < 1) continue;
                int hi = nu.is_zero() ? pres.n() : nu.cls(); // canonical word paths
                for (int i = 0; i < hi; ++i) {
                    Section df = spencer_apply(f, i);
                    MultiIndex dnu = nu.plus(i);
                    words.push_back({{gi, dnu}, df});
                    next.push_back({dnu, std::move(df)});
                }
            }
            frontier = std::move(next);
        }
    }
    // Solve basis = sum c * word over K.
    {
        struct ColKey {
            bool rhs;
            int idx;
            bool operator<(const ColKey& o) const {
                if (rhs != o.rhs) return !rhs;
                return idx < o.idx;
            }
        };
        struct ColLess {
            bool operator()(const ColKey& a, const ColKey& b) const { return a < b; }
        };
        int w = pres.nsyms();
        for (auto& b : rep.basis) {
            // Equations per jet slot (k,mu), |mu| <= q.
            Eliminator<ColKey, ColLess> el;
            std::map<JetCoord, std::map<ColKey, RatFun, ColLess>, JetLess> eqs;
            for (int wi = 0; wi < (int)words.size(); ++wi) {
                for (auto& [j, v] : words[wi].second.values())
                    if (j.mu.order() <= q) eqs[j][{false, wi}] = v;
            }
            for (auto& [j, v] : b.values())
                if (j.mu.order() <= q) {
                    auto& row = eqs[j];
                    row[{true, 0}] = -v;
                }
            for (auto& [j, row] : eqs) {
                Eliminator<ColKey, ColLess>::Row r;
                for (auto& [ck, c] : row) r[ck] = c;
                el.insert(std::move(r));
            }
            std::vector<DerivationWord> expr;
            bool consistent = true;
            for (auto& e : el.entries())
                if (e.pivot.rhs) consistent = false;
            if (consistent) {
                for (auto& e : el.entries()) {
                    auto it = e.row.find(ColKey{true, 0});
                    if (it == e.row.end()) continue;
                    RatFun val = -it->second;
                    if (val.is_zero()) continue;
                    DerivationWord dw;
                    dw.generator = words[e.pivot.idx].first.g;
                    dw.nu = words[e.pivot.idx].first.nu;
                    dw.coefficient = val;
                    expr.push_back(std::move(dw));
                }
            }
            rep.words.push_back(std::move(expr));
        }
    }

    // Finite type iff the symbol at Q vanishes; otherwise the certificate is
    // truncated.
    rep.truncated_certificate = S.symbol(std::max(Q, q)).dim() != 0;
    return rep;
}

SolutionDim solution_dim(const LinearSystem& S, const Budget& budget) {
    PPResult pp = pp_complete(S, budget);
    SolutionDim out;
    out.stable_order = pp.system.order();
    CharacterVector cv = pp.report.chars;
    if (cv.sum_alpha() == 0 && pp.system.symbol(pp.system.order()).dim() == 0) {
        out.finite = true;
        out.dim = pp.system.dim();
    } else {
        out.finite = false;
        out.chars = cv;
    }
    return out;
}

} // namespace dsys
