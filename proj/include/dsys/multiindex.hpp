#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dsys {

// Multi-index mu = (mu_1..mu_n) of formal derivatives.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(int n) : e_(n, 0) {}
    explicit MultiIndex(std::vector<int> e) : e_(std::move(e)) {
        for (int v : e_)
            if (v < 0) throw std::invalid_argument("negative multi-index entry");
    }

    int size() const { return (int)e_.size(); }
    int operator[](int i) const { return e_[i]; }
    const std::vector<int>& exps() const { return e_; }

    int order() const {
        int s = 0;
        for (int v : e_) s += v;
        return s;
    }

    // Least i (1-based) with mu_i != 0; size()+1 for mu = 0.
    int cls() const {
        for (int i = 0; i < (int)e_.size(); ++i)
            if (e_[i] != 0) return i + 1;
        return (int)e_.size() + 1;
    }

    bool is_zero() const { return order() == 0; }

    MultiIndex plus(int i) const { // mu + 1_i, i is 0-based
        MultiIndex r = *this;
        r.e_[i] += 1;
        return r;
    }
    MultiIndex minus(int i) const {
        MultiIndex r = *this;
        if (r.e_[i] == 0) throw std::logic_error("multi-index underflow");
        r.e_[i] -= 1;
        return r;
    }
    MultiIndex plus(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (int i = 0; i < size(); ++i) r.e_[i] += o.e_[i];
        return r;
    }
    bool contains(const MultiIndex& o) const { // o <= *this slotwise
        for (int i = 0; i < size(); ++i)
            if (e_[i] < o.e_[i]) return false;
        return true;
    }
    MultiIndex minus(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (int i = 0; i < size(); ++i) {
            r.e_[i] -= o.e_[i];
            if (r.e_[i] < 0) throw std::logic_error("multi-index underflow");
        }
        return r;
    }

    bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
    bool operator!=(const MultiIndex& o) const { return e_ != o.e_; }

    // Total order: |mu| descending, then lexicographic ascending.
    static int cmp(const MultiIndex& a, const MultiIndex& b) {
        int oa = a.order(), ob = b.order();
        if (oa != ob) return oa > ob ? -1 : 1;
        if (a.e_ < b.e_) return -1;
        if (b.e_ < a.e_) return 1;
        return 0;
    }
    bool operator<(const MultiIndex& o) const { return cmp(*this, o) < 0; }

    // "y_{123}" style digit string; empty for mu = 0.
    std::string digits() const {
        std::string s;
        for (int i = 0; i < size(); ++i)
            for (int k = 0; k < e_[i]; ++k) s += std::to_string(i + 1);
        return s;
    }
    std::string tuple_str() const {
        std::string s = "[";
        for (int i = 0; i < size(); ++i) {
            if (i) s += ",";
            s += std::to_string(e_[i]);
        }
        return s + "]";
    }

private:
    std::vector<int> e_;
};

struct MultiIndexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const { return a < b; }
};

// All mu with |mu| == ord in n variables, in ascending lexicographic order.
std::vector<MultiIndex> multiindices_of_order(int n, int ord);
// All mu with |mu| <= ord, grouped by order descending then lex ascending.
std::vector<MultiIndex> multiindices_up_to(int n, int ord);

long binom(long n, long k);
// Number of multi-indices of order q in n variables: C(q+n-1, n-1).
long count_of_order(int n, int q);
// Number of multi-indices of order <= q in n variables: C(q+n, n).
long count_up_to(int n, int q);
// Number of multi-indices of order q and class c (1-based).
long count_of_class(int n, int q, int c);

} // namespace dsys
