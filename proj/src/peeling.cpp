#include "escape/peeling.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "escape/interval_tree.hpp"

namespace escape {

namespace {

void require_disjoint(const RepInstance& inst, const char* who) {
    if (!check_disjoint(inst))
        throw ValidationError(std::string(who) + " requires pairwise disjoint rectangles");
}

}  // namespace

EscapeDag build_escape_dag(const RepInstance& inst, Direction d) {
    require_disjoint(inst, "build_escape_dag");
    const std::size_t n = inst.rects.size();
    EscapeDag dag;
    dag.direction = d;
    dag.node_count = n;

    // Sweep toward the escape edge. A rectangle becomes a potential blocker
    // once the sweep passes its far edge (the one closer to the escape edge
    // of the blocked rectangle), and rectangle j is queried at the edge where
    // its escape path starts extending. "asc" fixes the sweep orientation so
    // one comparator serves all four directions.
    const bool horizontal = is_horizontal(d);
    const bool asc = (d == Direction::Left || d == Direction::Down);
    std::vector<std::pair<Coord, Coord>> perp(n);
    std::vector<Coord> add_key(n), query_key(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Rect& r = inst.rects[i];
        perp[i] = horizontal ? std::pair<Coord, Coord>{r.y1, r.y2}
                             : std::pair<Coord, Coord>{r.x1, r.x2};
        switch (d) {
        case Direction::Left:
            add_key[i] = r.x2;
            query_key[i] = r.x1;
            break;
        case Direction::Right:
            add_key[i] = r.x1;
            query_key[i] = r.x2;
            break;
        case Direction::Down:
            add_key[i] = r.y2;
            query_key[i] = r.y1;
            break;
        case Direction::Up:
            add_key[i] = r.y1;
            query_key[i] = r.y2;
            break;
        }
    }

    struct Event {
        Coord key;
        int type;  // 0 = add (before queries at equal key), 1 = query
        std::uint32_t idx;
    };
    std::vector<Event> events;
    events.reserve(2 * n);
    for (std::uint32_t i = 0; i < n; ++i) {
        events.push_back({add_key[i], 0, i});
        events.push_back({query_key[i], 1, i});
    }
    std::sort(events.begin(), events.end(), [asc](const Event& a, const Event& b) {
        if (a.key != b.key)
            return asc ? a.key < b.key : a.key > b.key;
        if (a.type != b.type)
            return a.type < b.type;
        return a.idx < b.idx;
    });

    IntervalTree tree(perp);
    std::vector<std::uint32_t> hits;
    for (const Event& e : events) {
        if (e.type == 0) {
            tree.activate(e.idx);
            continue;
        }
        hits.clear();
        tree.collect_positive(perp[e.idx].first, perp[e.idx].second, hits);
        for (std::uint32_t blocker : hits)
            if (blocker != e.idx)
                dag.edges.push_back({blocker, e.idx});
    }
    std::sort(dag.edges.begin(), dag.edges.end());
    return dag;
}

std::optional<std::vector<std::uint32_t>> topological_order(const EscapeDag& dag) {
    std::vector<std::uint32_t> indeg(dag.node_count, 0);
    std::vector<std::vector<std::uint32_t>> out(dag.node_count);
    for (auto [i, j] : dag.edges) {
        out[i].push_back(j);
        ++indeg[j];
    }
    std::vector<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < dag.node_count; ++i)
        if (indeg[i] == 0)
            queue.push_back(i);
    std::vector<std::uint32_t> order;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t v = queue[head];
        order.push_back(v);
        for (std::uint32_t w : out[v])
            if (--indeg[w] == 0)
                queue.push_back(w);
    }
    if (order.size() != dag.node_count)
        return std::nullopt;
    return order;
}

PeelingResult peel(const RepInstance& inst) {
    require_disjoint(inst, "peel");
    const std::size_t n = inst.rects.size();
    PeelingResult res;
    res.assignment.assign(n, Direction::Left);
    if (n == 0)
        return res;

    // CSR out-adjacency plus indegree counters per direction.
    std::array<std::vector<std::uint32_t>, 4> offsets, targets;
    std::array<std::vector<std::uint32_t>, 4> indeg;
    for (Direction d : kDirections) {
        const auto di = static_cast<std::size_t>(d);
        EscapeDag dag = build_escape_dag(inst, d);
        offsets[di].assign(n + 1, 0);
        indeg[di].assign(n, 0);
        for (auto [i, j] : dag.edges) {
            ++offsets[di][i + 1];
            ++indeg[di][j];
        }
        for (std::size_t i = 0; i < n; ++i)
            offsets[di][i + 1] += offsets[di][i];
        targets[di].resize(dag.edges.size());
        std::vector<std::uint32_t> cursor(offsets[di].begin(), offsets[di].end() - 1);
        for (auto [i, j] : dag.edges)
            targets[di][cursor[i]++] = j;
    }

    // pending[d] holds nodes whose d-indegree dropped to zero before the
    // current round; removals discovered during a round feed the next one.
    std::array<std::vector<std::uint32_t>, 4> pending, next_pending;
    for (Direction d : kDirections) {
        const auto di = static_cast<std::size_t>(d);
        for (std::uint32_t i = 0; i < n; ++i)
            if (indeg[di][i] == 0)
                pending[di].push_back(i);
    }

    std::vector<bool> assigned(n, false);
    std::size_t remaining = n;
    while (remaining > 0) {
        std::vector<std::uint32_t> level;
        for (Direction d : kDirections) {
            const auto di = static_cast<std::size_t>(d);
            for (std::uint32_t v : pending[di]) {
                if (assigned[v])
                    continue;  // freed earlier, or already taken by an earlier direction
                assigned[v] = true;
                res.assignment[v] = d;
                level.push_back(v);
            }
            pending[di].clear();
        }
        if (level.empty())
            throw std::logic_error("peeling made no progress on an acyclic blocking relation");
        for (std::uint32_t v : level) {
            for (Direction d : kDirections) {
                const auto di = static_cast<std::size_t>(d);
                for (std::uint32_t e = offsets[di][v]; e < offsets[di][v + 1]; ++e) {
                    const std::uint32_t w = targets[di][e];
                    if (--indeg[di][w] == 0 && !assigned[w])
                        next_pending[di].push_back(w);
                }
            }
        }
        for (std::size_t di = 0; di < 4; ++di)
            pending[di].swap(next_pending[di]);
        std::sort(level.begin(), level.end());
        remaining -= level.size();
        res.levels.push_back(std::move(level));
    }
    res.rho = static_cast<std::int64_t>(res.levels.size());
    return res;
}

std::pair<EscapeAssignment, DensityReport> solve_peeling(const RepInstance& inst) {
    PeelingResult res = peel(inst);
    DensityReport report = compute_density_rep(inst, res.assignment);
    if (report.density > 2 * res.rho)
        throw BoundViolation("peeling density " + std::to_string(report.density) +
                             " exceeds 2*rho = " + std::to_string(2 * res.rho));
    return {std::move(res.assignment), report};
}

std::vector<std::int64_t> per_level_density(const RepInstance& inst, const PeelingResult& res) {
    std::vector<std::int64_t> out;
    out.reserve(res.levels.size());
    for (const auto& level : res.levels) {
        RepInstance sub;
        sub.boundary = inst.boundary;
        EscapeAssignment dirs;
        for (std::uint32_t v : level) {
            sub.rects.push_back(inst.rects[v]);
            dirs.push_back(res.assignment[v]);
        }
        out.push_back(compute_density_rep(sub, dirs).density);
    }
    return out;
}

}  // namespace escape
