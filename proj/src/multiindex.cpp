#include "dsys/multiindex.hpp"

#include <algorithm>

namespace dsys {

static void rec_order(int n, int ord, int pos, std::vector<int>& cur,
                      std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
        cur[pos] = ord;
        out.emplace_back(cur);
        return;
    }
    for (int v = 0; v <= ord; ++v) {
        cur[pos] = v;
        rec_order(n, ord - v, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

std::vector<MultiIndex> multiindices_of_order(int n, int ord) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(n, 0);
    rec_order(n, ord, 0, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MultiIndex> multiindices_up_to(int n, int ord) {
    std::vector<MultiIndex> out;
    for (int q = ord; q >= 0; --q) {
        auto level = multiindices_of_order(n, q);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

long binom(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long count_of_order(int n, int q) { return binom(q + n - 1, n - 1); }
long count_up_to(int n, int q) { return q < 0 ? 0 : binom(q + n, n); }

long count_of_class(int n, int q, int c) {
    if (q <= 0 || c < 1 || c > n) return q == 0 ? 0 : 0;
    // mu_1=..=mu_{c-1}=0, mu_c >= 1: distribute q-1 over slots c..n.
    return count_of_order(n - c + 1, q - 1);
}

} // namespace dsys
