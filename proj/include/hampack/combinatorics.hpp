#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "hampack/errors.hpp"

namespace hampack {

/// Exact binomial coefficient; throws InvalidInput on uint64 overflow.
inline std::uint64_t binom_u64(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        // r * num / i is integral at every step; guard the multiply.
        if (r > std::numeric_limits<std::uint64_t>::max() / num)
            throw InvalidInput("binom_u64 overflow");
        r = r * num / static_cast<std::uint64_t>(i);
    }
    return r;
}

/// Binomial coefficient as double, for formula evaluation at any scale.
inline double binom_d(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (std::int64_t i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

inline double factorial_d(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

/// Pascal table C(i, j) for 0 <= i <= n, 0 <= j <= k, used for combinatorial
/// (colex) ranking of k-subsets.
class BinomTable {
public:
    BinomTable() = default;
    BinomTable(int n, int k) : n_(n), k_(k), c_(static_cast<std::size_t>(n + 1) * (k + 1), 0) {
        for (int i = 0; i <= n; ++i) {
            at(i, 0) = 1;
            for (int j = 1; j <= std::min(i, k); ++j) {
                std::uint64_t a = at(i - 1, j - 1);
                std::uint64_t b = at(i - 1, j);
                if (a > std::numeric_limits<std::uint64_t>::max() - b)
                    throw InvalidInput("BinomTable overflow");
                at(i, j) = a + b;
            }
        }
    }

    std::uint64_t operator()(int i, int j) const {
        if (j < 0 || j > k_ || i < 0 || j > i) return 0;
        return c_[static_cast<std::size_t>(i) * (k_ + 1) + j];
    }

    int n() const { return n_; }
    int k() const { return k_; }

    /// Colex rank of an ascending 1-based k-subset: sum of C(v_j - 1, j).
    template <class It>
    std::uint64_t rank(It first, It last) const {
        std::uint64_t r = 0;
        int j = 1;
        for (It it = first; it != last; ++it, ++j) r += (*this)(static_cast<int>(*it) - 1, j);
        return r;
    }

    /// Inverse of rank(); writes the ascending subset into out (size k).
    void unrank(std::uint64_t r, int k, std::int32_t* out) const {
        for (int j = k; j >= 1; --j) {
            // Largest v with C(v - 1, j) <= r.
            int lo = j, hi = n_;
            while (lo < hi) {
                int mid = (lo + hi + 1) / 2;
                if ((*this)(mid - 1, j) <= r) lo = mid; else hi = mid - 1;
            }
            out[j - 1] = lo;
            r -= (*this)(lo - 1, j);
        }
    }

private:
    std::uint64_t& at(int i, int j) { return c_[static_cast<std::size_t>(i) * (k_ + 1) + j]; }

    int n_ = 0;
    int k_ = 0;
    std::vector<std::uint64_t> c_;
};

/// Calls fn(v) for every ascending k-subset v of {1..n}.
template <class Fn>
void for_each_combination(int n, int k, Fn&& fn) {
    if (k < 0 || k > n) return;
    std::vector<std::int32_t> v(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
        fn(const_cast<const std::vector<std::int32_t>&>(v));
        int i = k - 1;
        while (i >= 0 && v[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++v[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j - 1)] + 1;
    }
}

} // namespace hampack
