#include "escape/matching.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

namespace escape {

std::array<Projection, 4> projections(Point p, const Boundary& b) {
    return {Projection{{0, p.y}, Direction::Left}, Projection{{b.width, p.y}, Direction::Right},
            Projection{{p.x, 0}, Direction::Down}, Projection{{p.x, b.height}, Direction::Up}};
}

std::vector<std::int32_t> max_matching(const BipartiteGraph& g) {
    constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::int32_t> match_left(g.n_left, -1);
    std::vector<std::int32_t> match_right(g.n_right, -1);
    std::vector<std::uint32_t> dist(g.n_left);

    auto bfs = [&]() {
        std::queue<std::uint32_t> q;
        for (std::uint32_t u = 0; u < g.n_left; ++u) {
            if (match_left[u] < 0) {
                dist[u] = 0;
                q.push(u);
            } else {
                dist[u] = kInf;
            }
        }
        bool found = false;
        while (!q.empty()) {
            const std::uint32_t u = q.front();
            q.pop();
            for (std::uint32_t v : g.adj[u]) {
                const std::int32_t w = match_right[v];
                if (w < 0) {
                    found = true;
                } else if (dist[static_cast<std::uint32_t>(w)] == kInf) {
                    dist[static_cast<std::uint32_t>(w)] = dist[u] + 1;
                    q.push(static_cast<std::uint32_t>(w));
                }
            }
        }
        return found;
    };

    std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t u) {
        for (std::uint32_t v : g.adj[u]) {
            const std::int32_t w = match_right[v];
            if (w < 0 || (dist[static_cast<std::uint32_t>(w)] == dist[u] + 1 &&
                          dfs(static_cast<std::uint32_t>(w)))) {
                match_left[u] = static_cast<std::int32_t>(v);
                match_right[v] = static_cast<std::int32_t>(u);
                return true;
            }
        }
        dist[u] = kInf;
        return false;
    };

    while (bfs())
        for (std::uint32_t u = 0; u < g.n_left; ++u)
            if (match_left[u] < 0)
                dfs(u);
    return match_left;
}

namespace {

struct ProjectionIndex {
    std::vector<Point> proj_points;  // sorted unique
    // Per left vertex: (projection point id, direction), deduplicated by
    // point with the earliest direction kept, canonical order preserved.
    std::vector<std::vector<std::pair<std::uint32_t, Direction>>> per_left;
};

ProjectionIndex build_projection_index(const SepInstance& inst) {
    ProjectionIndex idx;
    for (const Point& p : inst.points)
        for (const Projection& pr : projections(p, inst.boundary))
            idx.proj_points.push_back(pr.point);
    std::sort(idx.proj_points.begin(), idx.proj_points.end());
    idx.proj_points.erase(std::unique(idx.proj_points.begin(), idx.proj_points.end()),
                          idx.proj_points.end());
    auto id_of = [&](Point q) {
        return static_cast<std::uint32_t>(
            std::lower_bound(idx.proj_points.begin(), idx.proj_points.end(), q) -
            idx.proj_points.begin());
    };
    idx.per_left.resize(inst.points.size());
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
        auto& list = idx.per_left[i];
        for (const Projection& pr : projections(inst.points[i], inst.boundary)) {
            const std::uint32_t id = id_of(pr.point);
            bool seen = false;
            for (const auto& [prev, _] : list)
                if (prev == id)
                    seen = true;
            if (!seen)
                list.push_back({id, pr.dir});
        }
    }
    return idx;
}

BipartiteGraph build_graph(const ProjectionIndex& idx, std::int64_t k_b) {
    BipartiteGraph g;
    g.n_left = idx.per_left.size();
    g.n_right = idx.proj_points.size() * static_cast<std::size_t>(k_b);
    g.adj.resize(g.n_left);
    for (std::size_t i = 0; i < g.n_left; ++i)
        for (const auto& [proj_id, dir] : idx.per_left[i])
            for (std::int64_t c = 0; c < k_b; ++c)
                g.adj[i].push_back(
                    static_cast<std::uint32_t>(proj_id * static_cast<std::uint32_t>(k_b) + c));
    return g;
}

bool feasible(const ProjectionIndex& idx, std::int64_t k_b, std::vector<std::int32_t>& out) {
    const BipartiteGraph g = build_graph(idx, k_b);
    out = max_matching(g);
    return std::none_of(out.begin(), out.end(), [](std::int32_t m) { return m < 0; });
}

}  // namespace

MatchingResult solve_sep(const SepInstance& inst, bool binary_search) {
    MatchingResult res;
    const std::size_t n = inst.points.size();
    res.assignment.assign(n, Direction::Left);
    if (n == 0)
        return res;

    const ProjectionIndex idx = build_projection_index(inst);
    std::vector<std::int32_t> match;
    std::int64_t k_b = 0;
    if (!binary_search) {
        for (std::int64_t k = 1; k <= static_cast<std::int64_t>(n); ++k) {
            if (feasible(idx, k, match)) {
                k_b = k;
                break;
            }
        }
    } else {
        std::int64_t lo = 1, hi = static_cast<std::int64_t>(n);
        while (lo < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (feasible(idx, mid, match))
                hi = mid;
            else
                lo = mid + 1;
        }
        k_b = lo;
        feasible(idx, k_b, match);  // rebuild the matching at the minimum
    }
    if (k_b == 0)
        throw std::logic_error("matching infeasible at k_b = n");

    res.k_b = k_b;
    for (std::size_t i = 0; i < n; ++i) {
        const auto right = static_cast<std::uint32_t>(match[i]);
        const std::uint32_t proj_id = right / static_cast<std::uint32_t>(k_b);
        const std::uint32_t copy = right % static_cast<std::uint32_t>(k_b);
        Direction dir = Direction::Left;
        for (const auto& [id, d] : idx.per_left[i])
            if (id == proj_id) {
                dir = d;
                break;
            }
        res.assignment[i] = dir;
        res.matching.push_back({static_cast<std::uint32_t>(i), idx.proj_points[proj_id], copy, dir});
    }
    return res;
}

}  // namespace escape
