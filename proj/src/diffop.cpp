#include "dsys/diffop.hpp"

namespace dsys {

DiffOp DiffOp::constant(const Presentation& pres, const RatFun& c) {
    DiffOp p(pres);
    p.add_term(MultiIndex(pres.n()), c);
    return p;
}

DiffOp DiffOp::constant(const Presentation& pres, const Rat& c) {
    return constant(pres, RatFun::constant(c, pres.nsyms()));
}

DiffOp DiffOp::d(const Presentation& pres, int i) {
    DiffOp p(pres);
    p.add_term(MultiIndex(pres.n()).plus(i), RatFun::one(pres.nsyms()));
    return p;
}

DiffOp DiffOp::d(const Presentation& pres, const MultiIndex& mu) {
    DiffOp p(pres);
    p.add_term(mu, RatFun::one(pres.nsyms()));
    return p;
}

DiffOp DiffOp::monomial(const Presentation& pres, const RatFun& c, const MultiIndex& mu) {
    DiffOp p(pres);
    p.add_term(mu, c);
    return p;
}

int DiffOp::order() const {
    int o = -1;
    for (auto& [mu, c] : terms_) o = std::max(o, mu.order());
    return o;
}

RatFun DiffOp::coeff(const MultiIndex& mu) const {
    auto it = terms_.find(mu);
    if (it == terms_.end()) return RatFun::zero(width_);
    return it->second;
}

void DiffOp::add_term(const MultiIndex& mu, const RatFun& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(mu, c);
    if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    DiffOp r = *this;
    for (auto& [mu, c] : o.terms_) r.add_term(mu, c);
    return r;
}

DiffOp DiffOp::operator-() const {
    DiffOp r = *this;
    for (auto& [mu, c] : r.terms_) c = -c;
    return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const { return *this + (-o); }

DiffOp DiffOp::scale(const RatFun& c) const {
    DiffOp r(n_, width_);
    if (c.is_zero()) return r;
    for (auto& [mu, a] : terms_) r.add_term(mu, a * c);
    return r;
}

namespace {

RatFun deriv_pow(const Presentation& pres, RatFun c, const MultiIndex& sigma) {
    for (int i = 0; i < sigma.size(); ++i)
        for (int k = 0; k < sigma[i]; ++k) {
            if (c.is_zero()) return c;
            c = deriv(pres, c, i);
        }
    return c;
}

// All sigma <= mu slotwise.
std::vector<MultiIndex> subindices(const MultiIndex& mu) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(mu.size(), 0);
    size_t total = 1;
    for (int i = 0; i < mu.size(); ++i) total *= (mu[i] + 1);
    out.reserve(total);
    for (size_t t = 0; t < total; ++t) {
        size_t v = t;
        for (int i = 0; i < mu.size(); ++i) {
            cur[i] = (int)(v % (mu[i] + 1));
            v /= (mu[i] + 1);
        }
        out.emplace_back(cur);
    }
    return out;
}

Rat binom_mi(const MultiIndex& mu, const MultiIndex& sigma) {
    Rat r(1);
    for (int i = 0; i < mu.size(); ++i) r *= binom(mu[i], sigma[i]);
    return r;
}

} // namespace

DiffOp compose(const Presentation& pres, const DiffOp& P, const DiffOp& Q) {
    if (P.n() != Q.n()) throw std::invalid_argument("operator arity mismatch");
    int w = pres.nsyms();
    DiffOp r(P.n(), w);
    for (auto& [mu, a] : P.terms()) {
        auto sigmas = subindices(mu);
        for (auto& [nu, b] : Q.terms()) {
            for (auto& sigma : sigmas) {
                RatFun db = deriv_pow(pres, b, sigma);
                if (db.is_zero()) continue;
                RatFun coef = a * db * RatFun::constant(binom_mi(mu, sigma), w);
                r.add_term(mu.minus(sigma).plus(nu), coef);
            }
        }
    }
    return r;
}

DiffOp adjoint(const Presentation& pres, const DiffOp& P) {
    int w = pres.nsyms();
    DiffOp r(P.n(), w);
    for (auto& [mu, a] : P.terms()) {
        Rat sign = (mu.order() % 2 == 0) ? Rat(1) : Rat(-1);
        for (auto& sigma : subindices(mu)) {
            RatFun da = deriv_pow(pres, a, sigma);
            if (da.is_zero()) continue;
            RatFun coef = da * RatFun::constant(sign * binom_mi(mu, sigma), w);
            r.add_term(mu.minus(sigma), coef);
        }
    }
    return r;
}

std::string DiffOp::str(const Presentation& pres) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [mu, c] : terms_) {
        std::string cs = c.str(pres.names());
        bool neg = !cs.empty() && cs[0] == '-' && c.num().terms().size() == 1;
        std::string body = neg ? cs.substr(1) : cs;
        std::string dpart = mu.is_zero() ? "" : "d" + mu.digits();
        std::string term;
        if (dpart.empty())
            term = body;
        else if (body == "1")
            term = dpart;
        else {
            if (body.find_first_of("+-") != std::string::npos && body.front() != '(')
                body = "(" + body + ")";
            term = body + "*" + dpart;
        }
        if (first)
            s += (neg ? "-" : "") + term;
        else
            s += (neg ? " - " : " + ") + term;
        first = false;
    }
    return s;
}

OpMatrix OpMatrix::identity(const Presentation& pres, int m) {
    OpMatrix I(m, m, pres);
    for (int i = 0; i < m; ++i) I.at(i, i) = DiffOp::constant(pres, Rat(1));
    return I;
}

bool OpMatrix::is_zero() const {
    for (auto& op : e_)
        if (!op.is_zero()) return false;
    return true;
}

int OpMatrix::order() const {
    int o = -1;
    for (auto& op : e_) o = std::max(o, op.order());
    return o;
}

std::vector<DiffOp> OpMatrix::row(int r) const {
    std::vector<DiffOp> out;
    for (int c = 0; c < cols_; ++c) out.push_back(at(r, c));
    return out;
}

void OpMatrix::set_row(int r, const std::vector<DiffOp>& ops) {
    if ((int)ops.size() != cols_) throw std::invalid_argument("row width mismatch");
    for (int c = 0; c < cols_; ++c) at(r, c) = ops[c];
}

OpMatrix OpMatrix::from_rows(const std::vector<std::vector<DiffOp>>& rows, int cols,
                             const Presentation& pres) {
    OpMatrix m((int)rows.size(), cols, pres);
    for (int r = 0; r < (int)rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
}

OpMatrix OpMatrix::vstack(const OpMatrix& below) const {
    if (below.cols_ != cols_) throw std::invalid_argument("vstack width mismatch");
    OpMatrix m = *this;
    m.rows_ += below.rows_;
    m.e_.insert(m.e_.end(), below.e_.begin(), below.e_.end());
    return m;
}

std::string OpMatrix::str(const Presentation& pres) const {
    std::string s;
    for (int r = 0; r < rows_; ++r) {
        s += "[";
        for (int c = 0; c < cols_; ++c) {
            if (c) s += ", ";
            s += at(r, c).str(pres);
        }
        s += "]\n";
    }
    return s;
}

OpMatrix compose(const Presentation& pres, const OpMatrix& A, const OpMatrix& B) {
    if (A.cols() != B.rows()) throw std::invalid_argument("operator matrix dimension mismatch");
    OpMatrix r(A.rows(), B.cols(), A.n(), pres.nsyms());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j) {
            DiffOp acc(A.n(), pres.nsyms());
            for (int k = 0; k < A.cols(); ++k) {
                if (A.at(i, k).is_zero() || B.at(k, j).is_zero()) continue;
                acc = acc + compose(pres, A.at(i, k), B.at(k, j));
            }
            r.at(i, j) = acc;
        }
    return r;
}

OpMatrix adjoint(const Presentation& pres, const OpMatrix& A) {
    OpMatrix r(A.cols(), A.rows(), A.n(), pres.nsyms());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) r.at(j, i) = adjoint(pres, A.at(i, j));
    return r;
}

} // namespace dsys
