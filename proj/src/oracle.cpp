#include "escape/oracle.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace escape {

namespace {

void check_cap(std::size_t n, std::size_t cap) {
    if (n > cap)
        throw ValidationError("instance size " + std::to_string(n) +
                              " exceeds enumeration cap " + std::to_string(cap));
}

// DFS minimizing the running maximum of per-site coverage. Sites are flat
// indices; cover[i][d] lists the sites covered by element i going d. Pruning
// on current max is sound because adding paths never lowers it, and trying
// directions in canonical order makes the first optimum the lexicographic
// minimum.
struct Enumerator {
    std::size_t n;
    std::size_t site_count;
    const std::vector<std::array<std::vector<std::uint32_t>, 4>>& cover;

    std::vector<std::int32_t> load;
    std::vector<Direction> current;
    EscapeAssignment best_assignment;
    std::int64_t best = 0;

    Enumerator(std::size_t n, std::size_t sites,
               const std::vector<std::array<std::vector<std::uint32_t>, 4>>& cover)
        : n(n), site_count(sites), cover(cover) {
        load.assign(site_count, 0);
        current.assign(n, Direction::Left);
        best = static_cast<std::int64_t>(n) + 1;
    }

    void run() { dfs(0, 0); }

    void dfs(std::size_t depth, std::int64_t cur_max) {
        if (cur_max >= best)
            return;
        if (depth == n) {
            best = cur_max;
            best_assignment = current;
            return;
        }
        for (Direction d : kDirections) {
            const auto& sites = cover[depth][static_cast<std::size_t>(d)];
            std::int64_t new_max = cur_max;
            for (std::uint32_t s : sites)
                new_max = std::max<std::int64_t>(new_max, ++load[s]);
            current[depth] = d;
            dfs(depth + 1, new_max);
            for (std::uint32_t s : sites)
                --load[s];
        }
    }
};

}  // namespace

OracleResult solve_exact_rep(const RepInstance& inst, std::size_t cap) {
    check_cap(inst.rects.size(), cap);
    const std::size_t n = inst.rects.size();
    OracleResult res;
    if (n == 0)
        return res;

    const EscapeGrid grid = build_escape_grid(inst);
    const std::size_t ny = grid.y_cells();
    std::vector<std::array<std::vector<std::uint32_t>, 4>> cover(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (Direction d : kDirections) {
            const Rect p = escape_path(inst.rects[i], d, inst.boundary);
            auto& sites = cover[i][static_cast<std::size_t>(d)];
            for (std::size_t ix = grid.x_index(p.x1); ix < grid.x_index(p.x2); ++ix)
                for (std::size_t iy = grid.y_index(p.y1); iy < grid.y_index(p.y2); ++iy)
                    sites.push_back(static_cast<std::uint32_t>(ix * ny + iy));
        }
    }
    Enumerator e(n, grid.cell_count(), cover);
    e.run();
    res.opt_density = e.best;
    res.opt_assignment = std::move(e.best_assignment);
    return res;
}

OracleResult solve_exact_sep(const SepInstance& inst, std::size_t cap) {
    check_cap(inst.points.size(), cap);
    const std::size_t n = inst.points.size();
    OracleResult res;
    res.opt_boundary_density = 0;
    if (n == 0)
        return res;

    const Coord W = inst.boundary.width, H = inst.boundary.height;
    if ((W + 1) * (H + 1) > 1'000'000)
        throw ValidationError("lattice too large for exhaustive enumeration");
    const std::size_t stride = static_cast<std::size_t>(H + 1);
    auto site = [&](Coord x, Coord y) { return static_cast<std::uint32_t>(x * stride + y); };

    // Inclusive lattice segments per (point, direction).
    std::vector<std::array<std::vector<std::uint32_t>, 4>> cover(n);
    std::vector<std::array<std::vector<std::uint32_t>, 4>> boundary_cover(n);
    auto on_boundary = [&](Coord x, Coord y) { return x == 0 || x == W || y == 0 || y == H; };
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = inst.points[i];
        for (Direction d : kDirections) {
            auto& all = cover[i][static_cast<std::size_t>(d)];
            auto& bnd = boundary_cover[i][static_cast<std::size_t>(d)];
            auto push = [&](Coord x, Coord y) {
                all.push_back(site(x, y));
                if (on_boundary(x, y))
                    bnd.push_back(site(x, y));
            };
            switch (d) {
            case Direction::Left:
                for (Coord x = 0; x <= p.x; ++x) push(x, p.y);
                break;
            case Direction::Right:
                for (Coord x = p.x; x <= W; ++x) push(x, p.y);
                break;
            case Direction::Down:
                for (Coord y = 0; y <= p.y; ++y) push(p.x, y);
                break;
            case Direction::Up:
                for (Coord y = p.y; y <= H; ++y) push(p.x, y);
                break;
            }
        }
    }

    const std::size_t sites = static_cast<std::size_t>((W + 1) * (H + 1));
    Enumerator full(n, sites, cover);
    full.run();
    res.opt_density = full.best;
    res.opt_assignment = std::move(full.best_assignment);

    Enumerator boundary(n, sites, boundary_cover);
    boundary.run();
    res.opt_boundary_density = boundary.best;
    return res;
}

}  // namespace escape
