#include "dsys/poly.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>

namespace dsys {

namespace {
struct MonGt {
    bool operator()(const Mon& a, const Mon& b) const { return Mon::cmp(a, b) > 0; }
};
} // namespace

Poly Poly::from_terms(std::vector<Term> ts, int width) {
    std::map<Mon, Rat, MonGt> acc;
    for (auto& t : ts) {
        if (t.coef == 0) continue;
        auto [it, fresh] = acc.emplace(t.mon, t.coef);
        if (!fresh) {
            it->second += t.coef;
            if (it->second == 0) acc.erase(it);
        }
    }
    Poly p;
    p.width_ = width;
    p.terms_.reserve(acc.size());
    for (auto& [m, c] : acc) p.terms_.push_back({m, c});
    return p;
}

bool Poly::eq(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].mon == o.terms_[i].mon) || terms_[i].coef != o.terms_[i].coef)
            return false;
    return true;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.width_ = width_;
    size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        int c = Mon::cmp(terms_[i].mon, o.terms_[j].mon);
        if (c > 0)
            r.terms_.push_back(terms_[i++]);
        else if (c < 0)
            r.terms_.push_back(o.terms_[j++]);
        else {
            Rat s = terms_[i].coef + o.terms_[j].coef;
            if (s != 0) r.terms_.push_back({terms_[i].mon, s});
            ++i, ++j;
        }
    }
    while (i < terms_.size()) r.terms_.push_back(terms_[i++]);
    while (j < o.terms_.size()) r.terms_.push_back(o.terms_[j++]);
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::mul_rat(const Rat& c) const {
    if (c == 0) return Poly::zero(width_);
    Poly r = *this;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    std::map<Mon, Rat, MonGt> acc;
    for (auto& a : terms_)
        for (auto& b : o.terms_) {
            Mon m = a.mon * b.mon;
            Rat c = a.coef * b.coef;
            auto [it, fresh] = acc.emplace(std::move(m), c);
            if (!fresh) {
                it->second += c;
                if (it->second == 0) acc.erase(it);
            }
        }
    Poly r;
    r.width_ = width_;
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc) r.terms_.push_back({m, c});
    return r;
}

Poly Poly::divexact(const Poly& d) const {
    if (d.is_zero()) throw std::logic_error("poly division by zero");
    Poly rem = *this;
    std::vector<Term> q;
    while (!rem.is_zero()) {
        const Term& lr = rem.lead();
        const Term& ld = d.lead();
        if (!ld.mon.divides(lr.mon)) throw std::logic_error("inexact poly division");
        Term t{lr.mon / ld.mon, lr.coef / ld.coef};
        q.push_back(t);
        Poly sub;
        sub.width_ = width_;
        sub.terms_.push_back(t);
        rem = rem - sub * d;
    }
    return Poly::from_terms(std::move(q), width_);
}

int Poly::degree_in(int sym) const {
    int d = -1;
    for (auto& t : terms_) d = std::max(d, t.mon.e[sym]);
    return terms_.empty() ? -1 : d;
}

Poly Poly::coeff_in(int sym, int k) const {
    std::vector<Term> ts;
    for (auto& t : terms_)
        if (t.mon.e[sym] == k) {
            Term u = t;
            u.mon.e[sym] = 0;
            ts.push_back(u);
        }
    return Poly::from_terms(std::move(ts), width_);
}

Rat Poly::content() const {
    if (terms_.empty()) return Rat(0);
    mpz_class g(0), l(1);
    for (auto& t : terms_) {
        mpz_class num = t.coef.get_num();
        mpz_class den = t.coef.get_den();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
    }
    Rat c(g, l);
    c.canonicalize();
    if (terms_[0].coef < 0) c = -c;
    return c;
}

Poly Poly::primitive_part() const {
    if (is_zero()) return *this;
    Rat c = content();
    Poly r = *this;
    for (auto& t : r.terms_) t.coef /= c;
    return r;
}

std::optional<Poly> try_divexact(const Poly& a, const Poly& d) {
    if (d.is_zero()) return std::nullopt;
    Poly rem = a;
    std::vector<Term> q;
    while (!rem.is_zero()) {
        const Term& lr = rem.lead();
        const Term& ld = d.lead();
        if (!ld.mon.divides(lr.mon)) return std::nullopt;
        Term t{lr.mon / ld.mon, lr.coef / ld.coef};
        q.push_back(t);
        Poly sub = Poly::from_terms({t}, a.width());
        rem = rem - sub * d;
    }
    return Poly::from_terms(std::move(q), a.width());
}

namespace {

// Pseudo-division of a by b with respect to symbol v: repeatedly kills the
// leading v-power of the remainder, multiplying through by lc_v(b).
Poly pseudo_rem(const Poly& a, const Poly& b, int v) {
    int db = b.degree_in(v);
    Poly lcb = b.coeff_in(v, db);
    int width = a.width();
    Poly r = a;
    while (!r.is_zero()) {
        int dr = r.degree_in(v);
        if (dr < db) break;
        Poly lcr = r.coeff_in(v, dr);
        Poly shift = Poly::symbol(v, width);
        Poly vpow = Poly::one(width);
        for (int k = 0; k < dr - db; ++k) vpow = vpow * shift;
        r = r * lcb - b * vpow * lcr;
    }
    return r;
}

Poly gcd_rec(Poly a, Poly b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() || b.is_constant()) return Poly::one(a.width());
    if (try_divexact(a, b)) return b.primitive_part();
    if (try_divexact(b, a)) return a.primitive_part();
    // Main variable: minimal joint degree collapses the remainder chain
    // fastest (degree-one variables finish in a single pseudo-division).
    int v = -1;
    long best = -1;
    for (int s = 0; s < a.width(); ++s) {
        int da = a.degree_in(s), db = b.degree_in(s);
        if (da <= 0 || db <= 0) continue;
        long score = (long)std::min(da, db) * 1000 + std::max(da, db);
        if (v < 0 || score < best) {
            v = s;
            best = score;
        }
    }
    if (v < 0) return gcd(a, b); // disjoint supports: handled by the wrapper
    // Contents with respect to v (gcd of the v-coefficients, early exit at 1).
    auto cont_v = [&](const Poly& p) {
        Poly c = Poly::zero(p.width());
        for (int k = 0; k <= p.degree_in(v); ++k) {
            Poly ck = p.coeff_in(v, k);
            if (ck.is_zero()) continue;
            c = c.is_zero() ? ck.primitive_part() : gcd(c, ck);
            if (c.is_constant()) return Poly::one(p.width());
        }
        return c;
    };
    Poly ca = cont_v(a), cb = cont_v(b);
    Poly cg = gcd(ca, cb);
    a = a.divexact(ca);
    b = b.divexact(cb);
    if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
    while (!b.is_zero() && b.degree_in(v) > 0) {
        Poly r = pseudo_rem(a, b, v);
        a = b;
        if (r.is_zero()) {
            b = r;
            break;
        }
        if (r.is_constant()) return cg;
        b = r.divexact(cont_v(r)).primitive_part();
    }
    if (!b.is_zero()) return cg; // coprime in v
    return cg * a.primitive_part();
}

// Integer-point evaluation heuristic: evaluate one variable at a large
// integer, recurse, reconstruct base-xi with balanced digits, verify by
// exact division. Falls back to the primitive PRS on repeated failure.

mpz_class max_coeff_abs(const Poly& p) {
    mpz_class m(0);
    for (auto& t : p.terms()) {
        mpz_class a = abs(t.coef.get_num());
        if (a > m) m = a;
    }
    return m;
}

Poly eval_at(const Poly& p, int v, const mpz_class& xi) {
    std::vector<Term> ts;
    for (auto& t : p.terms()) {
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), xi.get_mpz_t(), t.mon.e[v]);
        Term u = t;
        u.mon.e[v] = 0;
        u.coef *= Rat(pw);
        ts.push_back(u);
    }
    return Poly::from_terms(std::move(ts), p.width());
}

// g with integer coefficients -> digits base xi in variable v (balanced).
std::optional<Poly> reconstruct(Poly g, int v, const mpz_class& xi) {
    std::vector<Term> ts;
    const int w = g.width();
    int power = 0;
    mpz_class half = xi / 2;
    while (!g.is_zero()) {
        if (power > 2000) return std::nullopt;
        std::vector<Term> digit_terms;
        std::vector<Term> rest;
        for (auto& t : g.terms()) {
            if (t.coef.get_den() != 1) return std::nullopt;
            mpz_class c = t.coef.get_num();
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
            if (r > half) r -= xi;
            if (r != 0) {
                Term d = t;
                d.mon.e[v] = power;
                d.coef = Rat(r);
                digit_terms.push_back(d);
            }
            mpz_class q = (c - r) / xi;
            if (q != 0) rest.push_back({t.mon, Rat(q)});
        }
        ts.insert(ts.end(), digit_terms.begin(), digit_terms.end());
        g = Poly::from_terms(std::move(rest), w);
        ++power;
    }
    return Poly::from_terms(std::move(ts), w);
}

// gcd of all integer coefficients of an integer-coefficient poly.
mpz_class int_content(const Poly& p) {
    mpz_class g(0);
    for (auto& t : p.terms()) {
        if (t.coef.get_den() != 1) throw std::logic_error("non-integer coefficient in gcd_heu");
        mpz_class num = t.coef.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
    }
    return g;
}

std::optional<Poly> gcd_heu(const Poly& a, const Poly& b, int depth) {
    if (depth > 32) return std::nullopt;
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() || b.is_constant()) {
        mpz_class g;
        mpz_class ca = int_content(a), cb = int_content(b);
        mpz_gcd(g.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
        return Poly(Rat(g), a.width());
    }
    int v = -1;
    for (int s = a.width() - 1; s >= 0 && v < 0; --s)
        if (a.degree_in(s) > 0 || b.degree_in(s) > 0) v = s;
    if (a.degree_in(v) == 0 || b.degree_in(v) == 0) {
        // v missing from one side: gcd independent of v; recurse on the
        // v-coefficients of the side containing v.
        const Poly& with = a.degree_in(v) > 0 ? a : b;
        const Poly& without = a.degree_in(v) > 0 ? b : a;
        Poly acc = Poly::zero(a.width());
        for (int k = 0; k <= with.degree_in(v); ++k) {
            Poly ck = with.coeff_in(v, k);
            if (ck.is_zero()) continue;
            auto g = gcd_heu(acc, ck, depth + 1);
            if (!g) return std::nullopt;
            acc = *g;
            if (acc.is_constant()) break;
        }
        auto g = gcd_heu(acc, without, depth + 1);
        return g;
    }
    mpz_class na = max_coeff_abs(a), nb = max_coeff_abs(b);
    mpz_class xi = 2 * (na < nb ? na : nb) + 2;
    if (xi < 4) xi = 4;
    int degv = std::max(a.degree_in(v), b.degree_in(v));
    for (int tries = 0; tries < 6; ++tries) {
        if (mpz_sizeinbase(xi.get_mpz_t(), 2) * (size_t)(degv + 1) > 20000)
            return std::nullopt; // integer tower too tall; remainder sequence instead
        Poly ea = eval_at(a, v, xi), eb = eval_at(b, v, xi);
        auto g0 = gcd_heu(ea, eb, depth + 1);
        if (g0) {
            auto h = reconstruct(*g0, v, xi);
            // Divisibility over Z[x]: quotients must have integer coefficients.
            auto divz = [](const Poly& p, const Poly& d) {
                auto q = try_divexact(p, d);
                if (!q) return false;
                for (auto& t : q->terms())
                    if (t.coef.get_den() != 1) return false;
                return true;
            };
            if (h && !h->is_zero() && divz(a, *h) && divz(b, *h)) return *h;
        }
        xi = xi * 73794 / 27011; // irrational-ish growth avoids repeats
    }
    return std::nullopt;
}

} // namespace

long g_gcd_calls = 0;
double g_gcd_secs = 0;
long g_gcd_hard = 0;

namespace {
struct GcdTimer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    ~GcdTimer() {
        g_gcd_secs += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ++g_gcd_calls;
    }
};
} // namespace

Poly gcd(const Poly& a, const Poly& b) {
    GcdTimer timer_;
    if (getenv("DSYS_GCD_TRACE")) {
        static thread_local int depth_guard = 0;
        if (depth_guard == 0) {
            ++depth_guard;
            auto t0 = std::chrono::steady_clock::now();
            Poly r = gcd(a, b);
            double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (dt > 0.05) {
                int va = 0, vb = 0;
                for (int sdx = 0; sdx < a.width(); ++sdx) {
                    if (a.degree_in(sdx) > 0) ++va;
                    if (b.degree_in(sdx) > 0) ++vb;
                }
                fprintf(stderr, "[gcd] %.2fs terms %zu/%zu deg %d/%d vars %d/%d gterms %zu\n", dt,
                        a.terms().size(), b.terms().size(), a.total_degree(), b.total_degree(),
                        va, vb, r.terms().size());
            }
            --depth_guard;
            return r;
        }
    }
    Poly pa = a.primitive_part(), pb = b.primitive_part();
    if (pa.is_zero()) return pb;
    if (pb.is_zero()) return pa;
    if (pa.is_constant() || pb.is_constant()) return Poly::one(a.width());
    if (pa == pb) return pa;
    // Common monomial factor first.
    int w = a.width();
    Mon ma = pa.terms()[0].mon, mb = pb.terms()[0].mon;
    for (auto& t : pa.terms())
        for (int s = 0; s < w; ++s) ma.e[s] = std::min(ma.e[s], t.mon.e[s]);
    for (auto& t : pb.terms())
        for (int s = 0; s < w; ++s) mb.e[s] = std::min(mb.e[s], t.mon.e[s]);
    Mon common(w);
    bool strip = false;
    for (int s = 0; s < w; ++s) {
        common.e[s] = std::min(ma.e[s], mb.e[s]);
        if (ma.e[s] || mb.e[s]) strip = true;
    }
    if (strip) {
        Poly monp = Poly::from_terms({{ma, Rat(1)}}, w);
        pa = pa.divexact(monp);
        monp = Poly::from_terms({{mb, Rat(1)}}, w);
        pb = pb.divexact(monp);
        if (pa.is_constant() || pb.is_constant())
            return Poly::from_terms({{common, Rat(1)}}, w);
    }
    // Disjoint variable supports leave only the monomial part.
    bool disjoint = true;
    for (int s = 0; s < w && disjoint; ++s)
        if (pa.degree_in(s) > 0 && pb.degree_in(s) > 0) disjoint = false;
    if (disjoint) return Poly::from_terms({{common, Rat(1)}}, w);
    auto wrap = [&](Poly g) {
        if (!strip || common.is_one()) return g;
        return g * Poly::from_terms({{common, Rat(1)}}, w);
    };
    if (try_divexact(pa, pb)) return wrap(pb);
    if (try_divexact(pb, pa)) return wrap(pa);
    ++g_gcd_hard;
    // The evaluation heuristic shines on few variables; its integer towers
    // explode past that, where the remainder sequence takes over.
    int shared = 0;
    for (int s = 0; s < w; ++s)
        if (pa.degree_in(s) > 0 && pb.degree_in(s) > 0) ++shared;
    std::optional<Poly> h;
    if (shared <= 4) h = gcd_heu(pa, pb, 0);
    Poly g = h ? *h : gcd_rec(pa, pb);
    if (g.is_zero()) return g;
    return wrap(g.primitive_part());
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& t : terms_) {
        Rat c = t.coef;
        if (first) {
            if (c < 0) s += "-", c = -c;
        } else {
            s += c < 0 ? " - " : " + ";
            if (c < 0) c = -c;
        }
        first = false;
        std::string mon;
        for (int i = 0; i < t.mon.width(); ++i) {
            if (!t.mon.e[i]) continue;
            if (!mon.empty()) mon += "*";
            mon += names[i];
            if (t.mon.e[i] > 1) mon += "^" + std::to_string(t.mon.e[i]);
        }
        if (mon.empty())
            s += rat_pretty(c);
        else if (c == 1)
            s += mon;
        else
            s += rat_pretty(c) + "*" + mon;
    }
    return s;
}

} // namespace dsys
