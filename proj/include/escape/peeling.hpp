#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "escape/geometry.hpp"

namespace escape {

// Blocking relation for one direction: edge (i -> j) means rectangle i lies
// strictly between j and the boundary edge j would escape through, with
// positive-length overlap of their projections perpendicular to direction.
struct EscapeDag {
    Direction direction = Direction::Left;
    std::size_t node_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // sorted (blocker, blocked)
};

struct PeelingResult {
    std::vector<std::vector<std::uint32_t>> levels;  // L_1.., each sorted ascending
    EscapeAssignment assignment;
    std::int64_t rho = 0;  // = levels.size()
};

// Sweep + interval tree construction; O((n + E) log n) where E is the edge
// count of the full blocking relation. Rejects non-disjoint instances.
EscapeDag build_escape_dag(const RepInstance& inst, Direction d);

// Validation artifact: Kahn order, or nullopt on a cycle.
std::optional<std::vector<std::uint32_t>> topological_order(const EscapeDag& dag);

// Barrier peeling: each round removes every rectangle that is blocker-free in
// some direction (state as of the round start); such a rectangle is assigned
// the earliest free direction in canonical order. rho = number of rounds.
PeelingResult peel(const RepInstance& inst);

// peel + density verification; throws BoundViolation if density > 2*rho.
std::pair<EscapeAssignment, DensityReport> solve_peeling(const RepInstance& inst);

// Density of each level's rectangles taken alone (with their assigned
// directions); the expected per-level bound is 2.
std::vector<std::int64_t> per_level_density(const RepInstance& inst, const PeelingResult& res);

}  // namespace escape
