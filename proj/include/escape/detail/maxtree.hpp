#pragma once

#include <cstdint>
#include <vector>

namespace escape::detail {

// Segment tree over a fixed index range with range add and global
// (max, leftmost argmax) query. Used by the density sweeps.
class MaxTree {
public:
    explicit MaxTree(std::size_t n) : n_(n) {
        if (n_ == 0)
            n_ = 1;
        max_.assign(4 * n_, 0);
        arg_.assign(4 * n_, 0);
        lazy_.assign(4 * n_, 0);
        build(1, 0, n_ - 1);
    }

    // Add delta on [lo, hi]; no-op when the range is empty (lo > hi).
    void add(std::int64_t lo, std::int64_t hi, std::int64_t delta) {
        if (lo > hi)
            return;
        add(1, 0, n_ - 1, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi), delta);
    }

    std::int64_t max() const { return max_[1]; }
    std::size_t argmax() const { return arg_[1]; }

private:
    void build(std::size_t node, std::size_t lo, std::size_t hi) {
        arg_[node] = lo;
        if (lo == hi)
            return;
        std::size_t mid = lo + (hi - lo) / 2;
        build(2 * node, lo, mid);
        build(2 * node + 1, mid + 1, hi);
    }

    void add(std::size_t node, std::size_t lo, std::size_t hi, std::size_t qlo, std::size_t qhi,
             std::int64_t delta) {
        if (qhi < lo || hi < qlo)
            return;
        if (qlo <= lo && hi <= qhi) {
            max_[node] += delta;
            lazy_[node] += delta;
            return;
        }
        std::size_t mid = lo + (hi - lo) / 2;
        add(2 * node, lo, mid, qlo, qhi, delta);
        add(2 * node + 1, mid + 1, hi, qlo, qhi, delta);
        pull(node);
    }

    void pull(std::size_t node) {
        const std::size_t l = 2 * node, r = 2 * node + 1;
        if (max_[l] >= max_[r]) {
            max_[node] = max_[l] + lazy_[node];
            arg_[node] = arg_[l];
        } else {
            max_[node] = max_[r] + lazy_[node];
            arg_[node] = arg_[r];
        }
    }

    std::size_t n_;
    std::vector<std::int64_t> max_;
    std::vector<std::size_t> arg_;
    std::vector<std::int64_t> lazy_;
};

}  // namespace escape::detail
