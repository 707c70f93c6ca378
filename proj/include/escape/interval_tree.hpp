#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "escape/geometry.hpp"

namespace escape {

// Static interval tree over a fixed interval set with activation flags.
// Intervals are closed [lo, hi]; queries report active intervals whose
// overlap with the probe has positive length (or any closed overlap).
// Layout: leaves sorted by (lo, hi, idx) under a segment tree augmented with
// the max hi among active leaves, so a query visits O(log n) nodes per hit.
class IntervalTree {
public:
    explicit IntervalTree(const std::vector<std::pair<Coord, Coord>>& intervals) {
        n_ = intervals.size();
        order_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            order_[i] = i;
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            if (intervals[a].first != intervals[b].first)
                return intervals[a].first < intervals[b].first;
            if (intervals[a].second != intervals[b].second)
                return intervals[a].second < intervals[b].second;
            return a < b;
        });
        pos_.resize(n_);
        lo_.resize(n_);
        hi_.resize(n_);
        for (std::size_t slot = 0; slot < n_; ++slot) {
            pos_[order_[slot]] = slot;
            lo_[slot] = intervals[order_[slot]].first;
            hi_[slot] = intervals[order_[slot]].second;
        }
        size_ = 1;
        while (size_ < std::max<std::size_t>(n_, 1))
            size_ *= 2;
        max_hi_.assign(2 * size_, kNegInf);
        active_.assign(n_, false);
    }

    void activate(std::size_t idx) { set(idx, true); }
    void deactivate(std::size_t idx) { set(idx, false); }

    // Active intervals with positive-length overlap with [qlo, qhi].
    void collect_positive(Coord qlo, Coord qhi, std::vector<std::uint32_t>& out) const {
        collect(1, 0, size_, qlo, qhi, /*closed=*/false, out);
    }
    // Active intervals with nonempty closed intersection with [qlo, qhi].
    void collect_closed(Coord qlo, Coord qhi, std::vector<std::uint32_t>& out) const {
        collect(1, 0, size_, qlo, qhi, /*closed=*/true, out);
    }

private:
    static constexpr Coord kNegInf = std::numeric_limits<Coord>::min();

    void set(std::size_t idx, bool on) {
        active_[idx] = on;
        std::size_t node = size_ + pos_[idx];
        max_hi_[node] = on ? hi_[pos_[idx]] : kNegInf;
        for (node /= 2; node >= 1; node /= 2)
            max_hi_[node] = std::max(max_hi_[2 * node], max_hi_[2 * node + 1]);
    }

    void collect(std::size_t node, std::size_t lo, std::size_t hi, Coord qlo, Coord qhi,
                 bool closed, std::vector<std::uint32_t>& out) const {
        // Interval hit needs iv.hi > qlo (>= when closed); the subtree max
        // prunes that. The slot range prunes on iv.lo < qhi (<= when closed).
        if (closed ? (max_hi_[node] < qlo) : (max_hi_[node] <= qlo))
            return;
        if (lo >= n_)
            return;
        if (closed ? (lo_[std::min(lo, n_ - 1)] > qhi) : (lo_[std::min(lo, n_ - 1)] >= qhi))
            return;
        if (node >= size_) {
            const std::size_t slot = node - size_;
            if (slot < n_ && active_[order_[slot]])
                out.push_back(static_cast<std::uint32_t>(order_[slot]));
            return;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        collect(2 * node, lo, mid, qlo, qhi, closed, out);
        collect(2 * node + 1, mid, hi, qlo, qhi, closed, out);
    }

    std::size_t n_ = 0;
    std::size_t size_ = 1;
    std::vector<std::size_t> order_;  // slot -> original index
    std::vector<std::size_t> pos_;    // original index -> slot
    std::vector<Coord> lo_, hi_;      // by slot
    std::vector<Coord> max_hi_;       // segment tree over slots (active only)
    std::vector<bool> active_;        // by original index
};

}  // namespace escape
