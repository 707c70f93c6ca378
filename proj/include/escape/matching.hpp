#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "escape/geometry.hpp"

namespace escape {

struct Projection {
    Point point;
    Direction dir;
};

// The four perpendicular projections of p onto the boundary edges, in
// canonical direction order. A point on a boundary edge projects to itself
// in that direction (still listed).
std::array<Projection, 4> projections(Point p, const Boundary& b);

struct BipartiteGraph {
    std::size_t n_left = 0;
    std::size_t n_right = 0;
    std::vector<std::vector<std::uint32_t>> adj;  // per left vertex, canonical order
};

// Hopcroft-Karp, O(sqrt(V) * E). Returns the matched right vertex per left
// vertex, or -1. Deterministic given the adjacency order.
std::vector<std::int32_t> max_matching(const BipartiteGraph& g);

struct MatchEntry {
    std::uint32_t point = 0;  // index into the instance point list
    Point projection;
    std::uint32_t copy = 0;
    Direction dir = Direction::Left;
};

struct MatchingResult {
    std::int64_t k_b = 0;
    std::vector<MatchEntry> matching;
    EscapeAssignment assignment;
};

// Ascending scan over k_b: the smallest copy count for which every point can
// be matched to a (projection, copy) slot. binary_search exploits that
// feasibility is monotone in k_b and must return the same minimum.
MatchingResult solve_sep(const SepInstance& inst, bool binary_search = false);

}  // namespace escape
