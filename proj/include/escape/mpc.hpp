#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "escape/geometry.hpp"

namespace escape {

struct MpcConfig {
    std::int64_t machines = 1;  // L
    std::int64_t memory = 16;   // m, counted in records
    // Exponents the config was derived from, carried for reporting only.
    double eta = 0.5;
    double eta_prime = 0.5;

    // L = ceil(sqrt(n)), m = 4*ceil(sqrt(n)) + 16.
    static MpcConfig defaults_for(std::size_t n);
    void validate(std::size_t n) const;  // throws ValidationError if L*m < n
};

struct MpcRound {
    std::int64_t round = 0;
    std::int64_t records_shuffled = 0;
    std::int64_t max_machine_memory = 0;
};

struct MpcTrace {
    std::vector<MpcRound> rounds;
    std::int64_t iterations = 0;
    std::int64_t input_size = 0;
    std::int64_t total_communication = 0;
    std::int64_t max_machine_memory = 0;
    // max over rounds of total memory in use across machines, over input size.
    double replication_factor = 0.0;
};

// Alg.-state view: assigned (point, direction) pairs and remaining points.
struct PeelQueue {
    std::vector<std::pair<std::uint32_t, Direction>> q;
    std::vector<std::uint32_t> t;
};

struct SequentialResult {
    EscapeAssignment assignment;
    std::int64_t iterations = 0;
    std::vector<std::vector<std::pair<std::uint32_t, Direction>>> per_iteration;
    PeelQueue queue;  // final state: every point in q, t empty
};

// Reference execution: per iteration, row/column extrema are taken over the
// remaining set, then each remaining point enters q with the first matching
// branch in the order left, right, down, up; non-matching points survive.
SequentialResult run_sep_sequential(const SepInstance& inst, std::int64_t iteration_cap = 0);

// The same algorithm on a simulated round-synchronous cluster. Extrema are
// aggregated via machine-boundary candidates (sort-based semigroup step),
// verdicts are exchanged between the row and column copy families, and
// survivors are repacked; every shuffle is charged to the trace. Throws
// SimulationError on memory-cap or iteration-cap faults.
std::pair<EscapeAssignment, MpcTrace> run_sep_mpc(const SepInstance& inst, const MpcConfig& cfg,
                                                  std::int64_t iteration_cap = 0);

struct AggRecord {
    std::int64_t key = 0;
    std::int64_t value = 0;
};

struct AggResult {
    std::vector<AggRecord> aggregates;  // one per key, sorted by key
    std::vector<MpcRound> trace;
};

// Tree aggregation of an associative op: each round reduces locally, then
// partials are repacked by key. ceil(log_m N) rounds for a single key.
AggResult semigroup_aggregate(const std::vector<AggRecord>& records,
                              const std::function<std::int64_t(std::int64_t, std::int64_t)>& op,
                              const MpcConfig& cfg);

struct MpcViolation {
    std::string what;
    std::int64_t round = -1;  // -1 for trace-global violations
};

struct MpcCheckReport {
    std::vector<MpcViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Report-only audit: per-machine peaks <= m, per-round communication
// <= comm_constant * n, replication factor <= replication_bound.
MpcCheckReport check_mpc_constraints(const MpcTrace& trace, const MpcConfig& cfg, std::size_t n,
                                     std::int64_t comm_constant = 8,
                                     double replication_bound = 5.0);

}  // namespace escape
