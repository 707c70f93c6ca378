#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "escape/geometry.hpp"

namespace escape {

// Fractional escape weights in integer nanos (1e-9 units). Decimal inputs
// are parsed to nanos exactly; all feasibility comparisons run on integers
// with a one-nano slack.
constexpr std::int64_t kNano = 1'000'000'000;
constexpr std::int64_t kFeasSlackNanos = 1;
// The 4*k_f rounding guarantee is exact over rationals; parsing granularity
// can cost a few nanos, covered here.
constexpr std::int64_t kRoundSlackNanos = 8;

struct FractionalSolution {
    std::vector<std::array<std::int64_t, 4>> r_nanos;  // per rectangle, canonical direction order
    std::int64_t k_f_nanos = 0;

    std::size_t size() const { return r_nanos.size(); }
};

struct TailEstimate {
    double epsilon = 0.0;
    double analytic_bound = 0.0;
    double empirical_frequency = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
};

// Linear program text for the instance: minimize the cap k subject to one
// escape constraint per rectangle and one coverage constraint per escape
// grid cell.
std::string export_lp(const RepInstance& inst);

// "i dir value" lines plus one "objective value" line. Parsing is strict;
// feasibility is checked against the instance and failures carry a witness.
FractionalSolution parse_fractional(const std::string& text, std::size_t n);
void check_feasible(const FractionalSolution& f, const RepInstance& inst);
FractionalSolution import_fractional(const std::string& text, const RepInstance& inst);

// Per-cell fractional load (nanos), x-major over the escape grid cells.
std::vector<std::int64_t> cell_loads_nanos(const FractionalSolution& f, const RepInstance& inst,
                                           const EscapeGrid& grid);

// Argmax direction per rectangle, ties by canonical order. Verifies the
// resulting density against 4*k_f and throws BoundViolation past the slack.
std::pair<EscapeAssignment, DensityReport> deterministic_round(const FractionalSolution& f,
                                                               const RepInstance& inst);

// Directions sampled independently per rectangle from r[i][.] normalized;
// identical seeds give identical assignments.
std::pair<EscapeAssignment, DensityReport> randomized_round(const FractionalSolution& f,
                                                            const RepInstance& inst,
                                                            std::uint64_t seed);

// Fraction of trials whose realized density reaches (1+epsilon)*k_f, next
// to the analytic bound 4*n^2*exp(-(k/4)*eps^2/3) with k = ceil(k_f).
TailEstimate chernoff_tail(const RepInstance& inst, const FractionalSolution& f, double epsilon,
                           std::int64_t trials, std::uint64_t seed);

std::string tail_report(const TailEstimate& est);

}  // namespace escape
