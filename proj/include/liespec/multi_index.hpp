#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "liespec/errors.hpp"

namespace liespec {

/// Strictly increasing tuple (i_1 < ... < i_p) of 1-based indices in [1..n];
/// the basis label of x_{i_1} ^ ... ^ x_{i_p}.
using MultiIndex = std::vector<std::size_t>;

/// Binomial coefficient with overflow guard (desk scale: n stays small).
inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        if (r > UINT64_MAX / num) throw Error("binomial: overflow");
        r = r * num / i;
    }
    return r;
}

/// Combinatorial-number-system rank of a multi-index among all p-subsets of
/// [1..n], counted from 0 in colexicographic order.
inline std::size_t mi_rank(const MultiIndex& mi) {
    std::size_t r = 0;
    for (std::size_t t = 0; t < mi.size(); ++t)
        r += static_cast<std::size_t>(binomial(mi[t] - 1, t + 1));
    return r;
}

/// Inverse of mi_rank for p-subsets of [1..n].
inline MultiIndex mi_unrank(std::size_t rank, std::size_t n, std::size_t p) {
    MultiIndex mi(p);
    std::size_t r = rank;
    for (std::size_t t = p; t >= 1; --t) {
        // largest c <= n-1 with C(c, t) <= r
        std::size_t c = t - 1;
        while (c + 1 < n && binomial(c + 1, t) <= r) ++c;
        mi[t - 1] = c + 1;
        r -= static_cast<std::size_t>(binomial(c, t));
    }
    return mi;
}

/// All p-subsets of [1..n] in rank order.
inline std::vector<MultiIndex> all_multi_indices(std::size_t n, std::size_t p) {
    std::size_t count = static_cast<std::size_t>(binomial(n, p));
    std::vector<MultiIndex> out;
    out.reserve(count);
    for (std::size_t r = 0; r < count; ++r) out.push_back(mi_unrank(r, n, p));
    return out;
}

/// Result of inserting e_j in front of a sorted wedge: e_j ^ e_M = sign *
/// e_sorted, or zero when j already occurs.
struct WedgeInsert {
    bool zero = true;
    int sign = 0;
    MultiIndex index;
};

inline WedgeInsert wedge_insert(std::size_t j, const MultiIndex& mi) {
    WedgeInsert out;
    std::size_t smaller = 0;
    for (std::size_t v : mi) {
        if (v == j) return out;  // repeated generator
        if (v < j) ++smaller;
    }
    out.zero = false;
    out.sign = (smaller % 2 == 0) ? +1 : -1;
    out.index = mi;
    out.index.insert(out.index.begin() + static_cast<std::ptrdiff_t>(smaller), j);
    return out;
}

/// Removes the k-th entry (0-based position) of a multi-index.
inline MultiIndex mi_erase(const MultiIndex& mi, std::size_t k) {
    MultiIndex out = mi;
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

}  // namespace liespec
