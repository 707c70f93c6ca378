#pragma once

#include <cstdint>

#include "escape/geometry.hpp"

namespace escape {

struct OracleResult {
    std::int64_t opt_density = 0;
    EscapeAssignment opt_assignment;
    // Minimum boundary density over all assignments, minimized independently
    // of opt_density; -1 for REP (tracked for SEP only).
    std::int64_t opt_boundary_density = -1;
};

// Branch-and-bound over all 4^n assignments. Deterministic: among optimal
// assignments the lexicographically first (canonical direction order) is
// returned. Throws ValidationError when n exceeds the cap.
OracleResult solve_exact_rep(const RepInstance& inst, std::size_t cap = 8);
OracleResult solve_exact_sep(const SepInstance& inst, std::size_t cap = 8);

}  // namespace escape
