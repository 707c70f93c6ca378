#include "support/oracles.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace testsupport {

namespace {

using escape::Boundary;
using escape::Coord;
using escape::kDirections;
using escape::Point;
using escape::Rect;

std::vector<Rect> all_paths(const RepInstance& inst, const EscapeAssignment& asg) {
    if (asg.size() != inst.rects.size())
        throw std::logic_error("assignment size mismatch");
    std::vector<Rect> paths;
    paths.reserve(asg.size());
    for (std::size_t i = 0; i < asg.size(); ++i)
        paths.push_back(escape::escape_path(inst.rects[i], asg[i], inst.boundary));
    return paths;
}

// Doubled coordinates: midpoints between consecutive distinct edge values.
std::vector<Coord> doubled_mids(std::vector<Coord> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<Coord> mids;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        mids.push_back(edges[i] + edges[i + 1]);  // = 2 * midpoint
    return mids;
}

// Closed 1D segments: max coverage over doubled endpoints and midpoints.
// Peak coverage of open segment interiors: sample the midpoint of every
// interval between consecutive endpoints (doubled coordinates keep the
// midpoints integral) and count strict containment.
std::int64_t segment_peak(const std::vector<std::pair<Coord, Coord>>& segs) {
    std::vector<Coord> ends;
    for (const auto& [lo, hi] : segs) {
        ends.push_back(lo);
        ends.push_back(hi);
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    std::int64_t best = 0;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const Coord mid = ends[i] + ends[i + 1];  // doubled
        std::int64_t c = 0;
        for (const auto& [lo, hi] : segs)
            if (2 * lo < mid && mid < 2 * hi)
                ++c;
        best = std::max(best, c);
    }
    return best;
}

bool covers_sep(Point q, Direction d, Point at, const Boundary& b) {
    switch (d) {
        case Direction::Left: return at.y == q.y && 0 <= at.x && at.x <= q.x;
        case Direction::Right: return at.y == q.y && q.x <= at.x && at.x <= b.width;
        case Direction::Down: return at.x == q.x && 0 <= at.y && at.y <= q.y;
        case Direction::Up: return at.x == q.x && q.y <= at.y && at.y <= b.height;
    }
    return false;
}

}  // namespace

std::int64_t brute_density_rep(const RepInstance& inst, const EscapeAssignment& asg) {
    const std::vector<Rect> paths = all_paths(inst, asg);
    std::vector<Coord> xe, ye;
    for (const Rect& p : paths) {
        xe.push_back(p.x1);
        xe.push_back(p.x2);
        ye.push_back(p.y1);
        ye.push_back(p.y2);
    }
    std::int64_t best = 0;
    for (Coord mx : doubled_mids(xe))
        for (Coord my : doubled_mids(ye)) {
            std::int64_t c = 0;
            for (const Rect& p : paths)
                if (2 * p.x1 < mx && mx < 2 * p.x2 && 2 * p.y1 < my && my < 2 * p.y2)
                    ++c;
            best = std::max(best, c);
        }
    return best;
}

std::int64_t brute_boundary_rep(const RepInstance& inst, const EscapeAssignment& asg) {
    const std::vector<Rect> paths = all_paths(inst, asg);
    const Boundary& b = inst.boundary;
    std::vector<std::pair<Coord, Coord>> left, right, down, up;
    for (const Rect& p : paths) {
        if (p.x1 == 0)
            left.push_back({p.y1, p.y2});
        if (p.x2 == b.width)
            right.push_back({p.y1, p.y2});
        if (p.y1 == 0)
            down.push_back({p.x1, p.x2});
        if (p.y2 == b.height)
            up.push_back({p.x1, p.x2});
    }
    return std::max(std::max(segment_peak(left), segment_peak(right)),
                    std::max(segment_peak(down), segment_peak(up)));
}

std::int64_t brute_density_sep(const SepInstance& inst, const EscapeAssignment& asg) {
    if (asg.size() != inst.points.size())
        throw std::logic_error("assignment size mismatch");
    const Boundary& b = inst.boundary;
    std::int64_t best = 0;
    for (Coord x = 0; x <= b.width; ++x)
        for (Coord y = 0; y <= b.height; ++y) {
            std::int64_t c = 0;
            for (std::size_t i = 0; i < asg.size(); ++i)
                if (covers_sep(inst.points[i], asg[i], {x, y}, b))
                    ++c;
            best = std::max(best, c);
        }
    return best;
}

std::int64_t brute_boundary_sep(const SepInstance& inst, const EscapeAssignment& asg) {
    if (asg.size() != inst.points.size())
        throw std::logic_error("assignment size mismatch");
    const Boundary& b = inst.boundary;
    std::int64_t best = 0;
    for (Coord x = 0; x <= b.width; ++x)
        for (Coord y = 0; y <= b.height; ++y) {
            if (x != 0 && x != b.width && y != 0 && y != b.height)
                continue;
            std::int64_t c = 0;
            for (std::size_t i = 0; i < asg.size(); ++i)
                if (covers_sep(inst.points[i], asg[i], {x, y}, b))
                    ++c;
            best = std::max(best, c);
        }
    return best;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> brute_dag_edges(const RepInstance& inst,
                                                                     Direction d) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    const auto n = static_cast<std::uint32_t>(inst.rects.size());
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const Rect& a = inst.rects[i];  // candidate blocker
            const Rect& c = inst.rects[j];  // blocked
            bool between = false;
            bool overlap = false;
            switch (d) {
                case Direction::Left:
                    between = a.x2 <= c.x1;
                    overlap = a.y1 < c.y2 && a.y2 > c.y1;
                    break;
                case Direction::Right:
                    between = a.x1 >= c.x2;
                    overlap = a.y1 < c.y2 && a.y2 > c.y1;
                    break;
                case Direction::Down:
                    between = a.y2 <= c.y1;
                    overlap = a.x1 < c.x2 && a.x2 > c.x1;
                    break;
                case Direction::Up:
                    between = a.y1 >= c.y2;
                    overlap = a.x1 < c.x2 && a.x2 > c.x1;
                    break;
            }
            if (between && overlap)
                edges.push_back({i, j});
        }
    std::sort(edges.begin(), edges.end());
    return edges;
}

namespace {

template <typename DensityFn>
BruteOpt enumerate_min(std::size_t n, DensityFn&& density_of) {
    if (n > 10)
        throw std::logic_error("enumeration limited to n <= 10");
    BruteOpt best;
    best.density = -1;
    EscapeAssignment asg(n, Direction::Left);
    const std::uint64_t total = n == 0 ? 1 : (std::uint64_t{1} << (2 * n));
    for (std::uint64_t code = 0; code < total; ++code) {
        // index 0 in the top bits so ascending code is lexicographic order
        for (std::size_t i = 0; i < n; ++i)
            asg[i] = static_cast<Direction>((code >> (2 * (n - 1 - i))) & 3);
        const std::int64_t dens = density_of(asg);
        if (best.density < 0 || dens < best.density) {
            best.density = dens;
            best.assignment = asg;
        }
    }
    return best;
}

}  // namespace

BruteOpt enumerate_min_rep(const RepInstance& inst) {
    return enumerate_min(inst.rects.size(),
                         [&](const EscapeAssignment& a) { return brute_density_rep(inst, a); });
}

BruteOpt enumerate_min_sep(const SepInstance& inst) {
    return enumerate_min(inst.points.size(),
                         [&](const EscapeAssignment& a) { return brute_density_sep(inst, a); });
}

std::int64_t enumerate_min_boundary_sep(const SepInstance& inst) {
    return enumerate_min(inst.points.size(),
                         [&](const EscapeAssignment& a) { return brute_boundary_sep(inst, a); })
        .density;
}

std::int64_t brute_max_matching(const escape::BipartiteGraph& g) {
    std::vector<std::int32_t> match_right(g.n_right, -1);
    std::vector<char> visited;
    std::function<bool(std::uint32_t)> augment = [&](std::uint32_t u) {
        for (std::uint32_t v : g.adj[u]) {
            if (visited[v])
                continue;
            visited[v] = 1;
            if (match_right[v] < 0 || augment(static_cast<std::uint32_t>(match_right[v]))) {
                match_right[v] = static_cast<std::int32_t>(u);
                return true;
            }
        }
        return false;
    };
    std::int64_t size = 0;
    for (std::uint32_t u = 0; u < g.n_left; ++u) {
        visited.assign(g.n_right, 0);
        if (augment(u))
            ++size;
    }
    return size;
}

std::int64_t brute_max_load_nanos(const RepInstance& inst, const escape::FractionalSolution& f) {
    if (f.size() != inst.rects.size())
        throw std::logic_error("fractional size mismatch");
    struct WPath {
        Rect r;
        std::int64_t w;
    };
    std::vector<WPath> paths;
    std::vector<Coord> xe, ye;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (Direction d : kDirections) {
            const std::int64_t w = f.r_nanos[i][static_cast<std::size_t>(static_cast<int>(d))];
            if (w <= 0)
                continue;
            const Rect p = escape::escape_path(inst.rects[i], d, inst.boundary);
            paths.push_back({p, w});
            xe.push_back(p.x1);
            xe.push_back(p.x2);
            ye.push_back(p.y1);
            ye.push_back(p.y2);
        }
    std::int64_t best = 0;
    for (Coord mx : doubled_mids(xe))
        for (Coord my : doubled_mids(ye)) {
            std::int64_t c = 0;
            for (const WPath& p : paths)
                if (2 * p.r.x1 < mx && mx < 2 * p.r.x2 && 2 * p.r.y1 < my && my < 2 * p.r.y2)
                    c += p.w;
            best = std::max(best, c);
        }
    return best;
}

}  // namespace testsupport
