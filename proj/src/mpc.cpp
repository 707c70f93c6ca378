#include "escape/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace escape {

namespace {

std::int64_t isqrt_ceil(std::int64_t n) {
    if (n <= 1)
        return n < 1 ? 0 : 1;
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (s * s < n)
        ++s;
    while ((s - 1) * (s - 1) >= n)
        --s;
    return s;
}

// Smallest t >= 1 with memory^t >= records; the charged depth of a
// distributed tree sort.
std::int64_t tree_rounds(std::int64_t records, std::int64_t memory) {
    if (records <= memory)
        return 1;
    std::int64_t t = 1;
    __int128 cap = memory;
    while (cap < records) {
        cap *= memory;
        ++t;
    }
    return t;
}

struct RowColExtrema {
    std::unordered_map<Coord, std::pair<Coord, Coord>> row;  // y -> (min x, max x)
    std::unordered_map<Coord, std::pair<Coord, Coord>> col;  // x -> (min y, max y)
};

RowColExtrema extrema_of(const std::vector<Point>& pts) {
    RowColExtrema e;
    for (const Point& p : pts) {
        auto [rit, rnew] = e.row.try_emplace(p.y, std::pair<Coord, Coord>{p.x, p.x});
        if (!rnew) {
            rit->second.first = std::min(rit->second.first, p.x);
            rit->second.second = std::max(rit->second.second, p.x);
        }
        auto [cit, cnew] = e.col.try_emplace(p.x, std::pair<Coord, Coord>{p.y, p.y});
        if (!cnew) {
            cit->second.first = std::min(cit->second.first, p.y);
            cit->second.second = std::max(cit->second.second, p.y);
        }
    }
    return e;
}

void require_disjoint_sep(const SepInstance& inst, const char* who) {
    if (!check_disjoint(inst))
        throw ValidationError(std::string(who) + " requires a disjoint instance");
}

std::int64_t default_iteration_cap(std::size_t n, std::int64_t requested) {
    return requested > 0 ? requested : 4 * static_cast<std::int64_t>(n);
}

}  // namespace

MpcConfig MpcConfig::defaults_for(std::size_t n) {
    MpcConfig cfg;
    const std::int64_t s = std::max<std::int64_t>(1, isqrt_ceil(static_cast<std::int64_t>(n)));
    cfg.machines = s;
    cfg.memory = 4 * s + 16;
    cfg.eta = 0.5;
    cfg.eta_prime = 0.5;
    return cfg;
}

void MpcConfig::validate(std::size_t n) const {
    if (machines < 1 || memory < 8)
        throw ValidationError("mpc config needs machines >= 1 and memory >= 8");
    if (machines * memory < static_cast<std::int64_t>(n))
        throw ValidationError("mpc config infeasible: machines * memory < input size");
}

SequentialResult run_sep_sequential(const SepInstance& inst, std::int64_t iteration_cap) {
    inst.validate();
    require_disjoint_sep(inst, "run_sep_sequential");
    const std::size_t n = inst.points.size();
    const std::int64_t cap = default_iteration_cap(n, iteration_cap);

    SequentialResult res;
    res.assignment.assign(n, Direction::Left);
    std::vector<std::uint32_t> alive(n);
    for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(n); ++i)
        alive[i] = i;

    while (!alive.empty()) {
        if (res.iterations >= cap)
            throw SimulationError("iteration cap exceeded after " + std::to_string(res.iterations) +
                                  " iterations");
        std::vector<Point> pts;
        pts.reserve(alive.size());
        for (std::uint32_t i : alive)
            pts.push_back(inst.points[i]);
        const RowColExtrema e = extrema_of(pts);

        std::vector<std::pair<std::uint32_t, Direction>> assigned;
        std::vector<std::uint32_t> survivors;
        for (std::uint32_t i : alive) {
            const Point p = inst.points[i];
            const auto& row = e.row.at(p.y);
            const auto& col = e.col.at(p.x);
            if (p.x == row.first)
                assigned.push_back({i, Direction::Left});
            else if (p.x == row.second)
                assigned.push_back({i, Direction::Right});
            else if (p.y == col.first)
                assigned.push_back({i, Direction::Down});
            else if (p.y == col.second)
                assigned.push_back({i, Direction::Up});
            else
                survivors.push_back(i);
        }
        if (assigned.empty())
            throw std::logic_error("no point is a row or column extremum");
        for (const auto& [i, d] : assigned) {
            res.assignment[i] = d;
            res.queue.q.push_back({i, d});
        }
        res.per_iteration.push_back(std::move(assigned));
        alive = std::move(survivors);
        ++res.iterations;
    }
    res.queue.t.clear();
    return res;
}

namespace {

// Trace bookkeeping. Peaks are per-machine record counts; cap violations are
// recorded in the trace and surfaced by check_mpc_constraints, not thrown.
class Accountant {
public:
    explicit Accountant(MpcTrace& trace) : trace_(trace) {}

    void charge(std::int64_t shuffled, const std::vector<std::int64_t>& peaks) {
        MpcRound r;
        r.round = static_cast<std::int64_t>(trace_.rounds.size()) + 1;
        r.records_shuffled = shuffled;
        std::int64_t total = 0;
        for (std::int64_t p : peaks) {
            total += p;
            r.max_machine_memory = std::max(r.max_machine_memory, p);
        }
        trace_.total_communication += shuffled;
        trace_.max_machine_memory = std::max(trace_.max_machine_memory, r.max_machine_memory);
        max_round_total_ = std::max(max_round_total_, total);
        trace_.rounds.push_back(r);
    }

    std::int64_t max_round_total() const { return max_round_total_; }

private:
    MpcTrace& trace_;
    std::int64_t max_round_total_ = 0;
};

// Packed cluster layout: the row family (left/right copies sorted by (y,x)),
// then the column family (down/up copies sorted by (x,y)), then the output
// queue, at `quota` records per machine. The last machine of the cluster
// doubles as the aggregator; at the default configuration the packing never
// reaches it.
struct Layout {
    std::int64_t quota = 1;
    std::int64_t row_records = 0;
    std::int64_t col_records = 0;
    std::int64_t q_records = 0;

    std::int64_t total() const { return row_records + col_records + q_records; }
    std::int64_t used() const { return (total() + quota - 1) / quota; }
    std::int64_t load(std::int64_t machine) const {
        const std::int64_t lo = machine * quota;
        return std::clamp<std::int64_t>(total() - lo, std::int64_t{0}, quota);
    }
};

std::vector<std::int64_t> resident_peaks(const Layout& lay, std::int64_t machines,
                                         std::int64_t transient_each) {
    std::vector<std::int64_t> peaks(static_cast<std::size_t>(machines), 0);
    for (std::int64_t i = 0; i < machines; ++i) {
        const std::int64_t l = lay.load(i);
        peaks[static_cast<std::size_t>(i)] = l > 0 ? l + transient_each : 0;
    }
    return peaks;
}

// Partial-extremum records each machine must exchange: one per family slice
// end whose key group continues on a neighbouring machine. Interior key
// groups resolve locally and send nothing.
std::vector<std::int64_t> machine_candidates(const Layout& lay, std::int64_t machines,
                                             const std::vector<Point>& row_sorted,
                                             const std::vector<Point>& col_sorted) {
    std::vector<std::int64_t> cand(static_cast<std::size_t>(machines), 0);
    auto family = [&](std::int64_t fstart, std::int64_t fend, auto key_at) {
        if (fstart >= fend)
            return;
        for (std::int64_t i = fstart / lay.quota; i <= (fend - 1) / lay.quota && i < machines;
             ++i) {
            const std::int64_t lo = std::max(fstart, i * lay.quota);
            const std::int64_t hi = std::min(fend, (i + 1) * lay.quota);
            if (lo >= hi)
                continue;
            const bool left = lo > fstart && key_at(lo - 1) == key_at(lo);
            const bool right = hi < fend && key_at(hi - 1) == key_at(hi);
            if (left && right && key_at(lo) == key_at(hi - 1))
                cand[static_cast<std::size_t>(i)] += 1;
            else
                cand[static_cast<std::size_t>(i)] += (left ? 1 : 0) + (right ? 1 : 0);
        }
    };
    family(0, lay.row_records,
           [&](std::int64_t r) { return row_sorted[static_cast<std::size_t>(r / 2)].y; });
    family(lay.row_records, lay.row_records + lay.col_records, [&](std::int64_t r) {
        return col_sorted[static_cast<std::size_t>((r - lay.row_records) / 2)].x;
    });
    return cand;
}

}  // namespace

std::pair<EscapeAssignment, MpcTrace> run_sep_mpc(const SepInstance& inst, const MpcConfig& cfg,
                                                  std::int64_t iteration_cap) {
    inst.validate();
    require_disjoint_sep(inst, "run_sep_mpc");
    const std::size_t n = inst.points.size();
    cfg.validate(n);
    const std::int64_t cap = default_iteration_cap(n, iteration_cap);

    MpcTrace trace;
    trace.input_size = static_cast<std::int64_t>(n);
    Accountant acct(trace);
    EscapeAssignment assignment(n, Direction::Left);
    if (n == 0)
        return {assignment, trace};

    const std::int64_t quota = cfg.memory - 4;  // headroom for streamed join buffers
    std::map<Point, std::uint32_t> index_of;
    for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(n); ++i)
        index_of[inst.points[i]] = i;

    // Each point expands to two records per family; the copies are tracked
    // as point lists with an implicit factor 2 in every record count.
    std::vector<Point> row_sorted = inst.points;
    std::sort(row_sorted.begin(), row_sorted.end(), [](const Point& a, const Point& b) {
        return std::tie(a.y, a.x) < std::tie(b.y, b.x);
    });
    std::vector<Point> col_sorted = inst.points;
    std::sort(col_sorted.begin(), col_sorted.end());

    Layout lay;
    lay.quota = quota;
    lay.row_records = 2 * static_cast<std::int64_t>(n);
    lay.col_records = 2 * static_cast<std::int64_t>(n);
    if (lay.used() > cfg.machines)
        throw SimulationError("expansion does not fit the cluster: " + std::to_string(lay.total()) +
                              " records need " + std::to_string(lay.used()) +
                              " machines of capacity " + std::to_string(quota) + ", have " +
                              std::to_string(cfg.machines));

    // Expansion plus the two family sorts, charged as one tree sort of the
    // 4n tagged copies. The first round still holds the unexpanded input.
    {
        const std::int64_t sort_rounds = tree_rounds(lay.total(), cfg.memory);
        const std::int64_t input_machines = (static_cast<std::int64_t>(n) + quota - 1) / quota;
        for (std::int64_t r = 0; r < sort_rounds; ++r) {
            std::vector<std::int64_t> peaks = resident_peaks(lay, cfg.machines, 0);
            if (r == 0)
                for (std::int64_t i = 0; i < input_machines; ++i) {
                    const std::int64_t orig = std::clamp<std::int64_t>(
                        static_cast<std::int64_t>(n) - i * quota, std::int64_t{0}, quota);
                    auto& p = peaks[static_cast<std::size_t>(i)];
                    p = std::max(p, orig);
                }
            acct.charge(lay.total(), peaks);
        }
    }

    std::vector<Point> alive = inst.points;
    while (!alive.empty()) {
        if (trace.iterations >= cap)
            throw SimulationError("iteration cap exceeded after " +
                                  std::to_string(trace.iterations) + " iterations");
        ++trace.iterations;

        const RowColExtrema ext = extrema_of(alive);
        const bool local_only = lay.used() <= 1;

        // Rounds 1-2: partial extrema of key groups split across machines go
        // to the aggregator and come back resolved. A single-machine layout
        // resolves everything locally.
        const std::vector<std::int64_t> cand =
            machine_candidates(lay, cfg.machines, row_sorted, col_sorted);
        std::int64_t cand_total = 0;
        for (std::int64_t c : cand)
            cand_total += c;
        {
            std::vector<std::int64_t> peaks = resident_peaks(lay, cfg.machines, 0);
            auto& agg = peaks[static_cast<std::size_t>(cfg.machines - 1)];
            agg = lay.load(cfg.machines - 1) + cand_total;
            acct.charge(local_only ? 0 : cand_total, peaks);
        }
        {
            std::vector<std::int64_t> peaks = resident_peaks(lay, cfg.machines, 0);
            for (std::int64_t i = 0; i < cfg.machines; ++i)
                peaks[static_cast<std::size_t>(i)] += cand[static_cast<std::size_t>(i)];
            auto& agg = peaks[static_cast<std::size_t>(cfg.machines - 1)];
            agg = std::max(agg, lay.load(cfg.machines - 1) + cand_total);
            acct.charge(local_only ? 0 : cand_total, peaks);
        }

        // Round 3: row-family verdicts; winners notify their column copies.
        std::vector<std::pair<Point, Direction>> won_row, won_col;
        std::vector<Point> survivors;
        for (const Point& p : alive) {
            const auto& row = ext.row.at(p.y);
            if (p.x == row.first)
                won_row.push_back({p, Direction::Left});
            else if (p.x == row.second)
                won_row.push_back({p, Direction::Right});
        }
        acct.charge(local_only ? 0 : static_cast<std::int64_t>(won_row.size()),
                    resident_peaks(lay, cfg.machines, local_only ? 0 : 1));

        // Round 4: column-family verdicts among the rest; winners notify
        // their row copies back.
        for (const Point& p : alive) {
            const auto& row = ext.row.at(p.y);
            if (p.x == row.first || p.x == row.second)
                continue;
            const auto& col = ext.col.at(p.x);
            if (p.y == col.first)
                won_col.push_back({p, Direction::Down});
            else if (p.y == col.second)
                won_col.push_back({p, Direction::Up});
            else
                survivors.push_back(p);
        }
        acct.charge(local_only ? 0 : static_cast<std::int64_t>(won_col.size()),
                    resident_peaks(lay, cfg.machines, local_only ? 0 : 1));

        for (const auto& [p, d] : won_row)
            assignment[index_of.at(p)] = d;
        for (const auto& [p, d] : won_col)
            assignment[index_of.at(p)] = d;

        // Rounds 5-6: per-machine survivor counts through the aggregator to
        // build the repack plan, then the move onto the new packed layout.
        Layout next = lay;
        next.row_records = 2 * static_cast<std::int64_t>(survivors.size());
        next.col_records = next.row_records;
        next.q_records = lay.q_records + static_cast<std::int64_t>(won_row.size()) +
                         static_cast<std::int64_t>(won_col.size());
        {
            std::vector<std::int64_t> peaks =
                resident_peaks(lay, cfg.machines, local_only ? 0 : 1);
            if (!local_only) {
                auto& agg = peaks[static_cast<std::size_t>(cfg.machines - 1)];
                agg = lay.load(cfg.machines - 1) + 1 + lay.used();
            }
            acct.charge(local_only ? 0 : 2 * lay.used(), peaks);
        }
        {
            std::vector<std::int64_t> peaks(static_cast<std::size_t>(cfg.machines), 0);
            for (std::int64_t i = 0; i < cfg.machines; ++i)
                peaks[static_cast<std::size_t>(i)] = std::max(lay.load(i), next.load(i));
            acct.charge(local_only ? 0 : next.total(), peaks);
        }

        auto survives = [&](const Point& p) {
            const auto& row = ext.row.at(p.y);
            if (p.x == row.first || p.x == row.second)
                return false;
            const auto& col = ext.col.at(p.x);
            return p.y != col.first && p.y != col.second;
        };
        std::erase_if(row_sorted, [&](const Point& p) { return !survives(p); });
        std::erase_if(col_sorted, [&](const Point& p) { return !survives(p); });
        alive = std::move(survivors);
        lay = next;
    }

    // Final sort of the queue back into input order.
    {
        const std::int64_t out_rounds = tree_rounds(static_cast<std::int64_t>(n), cfg.memory);
        Layout out;
        out.quota = quota;
        out.q_records = static_cast<std::int64_t>(n);
        for (std::int64_t r = 0; r < out_rounds; ++r)
            acct.charge(static_cast<std::int64_t>(n), resident_peaks(out, cfg.machines, 0));
    }

    trace.replication_factor =
        static_cast<double>(acct.max_round_total()) / static_cast<double>(n);
    return {assignment, trace};
}

AggResult semigroup_aggregate(const std::vector<AggRecord>& records,
                              const std::function<std::int64_t(std::int64_t, std::int64_t)>& op,
                              const MpcConfig& cfg) {
    cfg.validate(records.size());
    AggResult res;
    if (records.empty())
        return res;
    const std::size_t m = static_cast<std::size_t>(cfg.memory);

    // Input order, m records per machine.
    std::vector<std::vector<AggRecord>> machines;
    for (std::size_t i = 0; i < records.size(); i += m)
        machines.emplace_back(records.begin() + static_cast<std::ptrdiff_t>(i),
                              records.begin() +
                                  static_cast<std::ptrdiff_t>(std::min(records.size(), i + m)));
    machines.resize(static_cast<std::size_t>(cfg.machines));

    std::int64_t shuffled_this_round = 0;
    for (;;) {
        // Local reduce, first-occurrence key order.
        std::int64_t peak = 0;
        for (auto& mach : machines) {
            peak = std::max<std::int64_t>(peak, static_cast<std::int64_t>(mach.size()));
            std::vector<AggRecord> reduced;
            for (const AggRecord& rec : mach) {
                bool merged = false;
                for (AggRecord& out : reduced)
                    if (out.key == rec.key) {
                        out.value = op(out.value, rec.value);
                        merged = true;
                        break;
                    }
                if (!merged)
                    reduced.push_back(rec);
            }
            mach = std::move(reduced);
        }
        res.trace.push_back(
            {static_cast<std::int64_t>(res.trace.size()) + 1, shuffled_this_round, peak});

        // Done once every key lives on exactly one machine.
        std::map<std::int64_t, std::int64_t> key_count;
        for (const auto& mach : machines)
            for (const AggRecord& rec : mach)
                ++key_count[rec.key];
        bool done = true;
        for (const auto& [key, count] : key_count)
            if (count > 1)
                done = false;
        if (done) {
            for (const auto& mach : machines)
                for (const AggRecord& rec : mach)
                    res.aggregates.push_back(rec);
            std::sort(res.aggregates.begin(), res.aggregates.end(),
                      [](const AggRecord& a, const AggRecord& b) { return a.key < b.key; });
            return res;
        }

        // Shuffle partials sorted by key; groups that fit a machine stay
        // whole, oversized groups split at the capacity boundary.
        std::vector<AggRecord> partials;
        for (const auto& mach : machines)
            for (const AggRecord& rec : mach)
                partials.push_back(rec);
        std::stable_sort(partials.begin(), partials.end(),
                         [](const AggRecord& a, const AggRecord& b) { return a.key < b.key; });
        for (auto& mach : machines)
            mach.clear();
        std::size_t mi = 0;
        std::size_t at = 0;
        while (at < partials.size()) {
            std::size_t end = at;
            while (end < partials.size() && partials[end].key == partials[at].key)
                ++end;
            const std::size_t group = end - at;
            std::size_t placed = 0;
            while (placed < group) {
                if (mi >= machines.size())
                    throw SimulationError("aggregate repack does not fit the cluster");
                if (machines[mi].size() == m) {
                    ++mi;
                    continue;
                }
                const std::size_t room = m - machines[mi].size();
                if (group - placed > room && group <= m) {
                    ++mi;
                    continue;
                }
                const std::size_t take = std::min(group - placed, room);
                for (std::size_t k = 0; k < take; ++k)
                    machines[mi].push_back(partials[at + placed + k]);
                placed += take;
            }
            at = end;
        }
        shuffled_this_round = static_cast<std::int64_t>(partials.size());
    }
}

MpcCheckReport check_mpc_constraints(const MpcTrace& trace, const MpcConfig& cfg, std::size_t n,
                                     std::int64_t comm_constant, double replication_bound) {
    MpcCheckReport report;
    for (const MpcRound& r : trace.rounds) {
        if (r.max_machine_memory > cfg.memory)
            report.violations.push_back({"machine memory peak " +
                                             std::to_string(r.max_machine_memory) + " exceeds " +
                                             std::to_string(cfg.memory),
                                         r.round});
        if (r.records_shuffled > comm_constant * static_cast<std::int64_t>(n))
            report.violations.push_back({"round communication " +
                                             std::to_string(r.records_shuffled) + " exceeds " +
                                             std::to_string(comm_constant) + "*n",
                                         r.round});
    }
    if (trace.replication_factor > replication_bound + 1e-9)
        report.violations.push_back({"replication factor " +
                                         std::to_string(trace.replication_factor) + " exceeds " +
                                         std::to_string(replication_bound),
                                     -1});
    return report;
}

}  // namespace escape
