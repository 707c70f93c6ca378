#include "escape/geometry.hpp"

#include <algorithm>
#include <iterator>
#include <set>
#include <utility>

#include "escape/detail/maxtree.hpp"

namespace escape {

std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::Down: return "down";
    case Direction::Up: return "up";
    }
    return "?";
}

Direction direction_from_string(std::string_view s) {
    if (s == "left" || s == "l") return Direction::Left;
    if (s == "right" || s == "r") return Direction::Right;
    if (s == "down" || s == "d") return Direction::Down;
    if (s == "up" || s == "u") return Direction::Up;
    throw ParseError("unknown direction: \"" + std::string(s) + "\"");
}

void RepInstance::validate() const {
    boundary.validate();
    for (const Rect& r : rects)
        r.validate_inside(boundary);
    if (disjoint && !check_disjoint(*this))
        throw ValidationError("instance declared disjoint but rectangles overlap");
}

bool SepInstance::is_disjoint() const {
    return check_disjoint(*this);
}

void SepInstance::validate() const {
    boundary.validate();
    for (const Point& p : points)
        if (!(0 <= p.x && p.x <= boundary.width && 0 <= p.y && p.y <= boundary.height))
            throw ValidationError("point outside boundary");
}

std::size_t EscapeGrid::x_index(Coord v) const {
    auto it = std::lower_bound(xs.begin(), xs.end(), v);
    if (it == xs.end() || *it != v)
        throw std::logic_error("coordinate is not an escape grid line");
    return static_cast<std::size_t>(it - xs.begin());
}

std::size_t EscapeGrid::y_index(Coord v) const {
    auto it = std::lower_bound(ys.begin(), ys.end(), v);
    if (it == ys.end() || *it != v)
        throw std::logic_error("coordinate is not an escape grid line");
    return static_cast<std::size_t>(it - ys.begin());
}

Rect escape_path(const Rect& r, Direction d, const Boundary& b) {
    switch (d) {
    case Direction::Left: return {0, r.y1, r.x2, r.y2};
    case Direction::Right: return {r.x1, r.y1, b.width, r.y2};
    case Direction::Down: return {r.x1, 0, r.x2, r.y2};
    case Direction::Up: return {r.x1, r.y1, r.x2, b.height};
    }
    return r;
}

EscapeGrid build_escape_grid(const RepInstance& inst) {
    EscapeGrid g;
    g.xs.reserve(2 * inst.rects.size() + 2);
    g.ys.reserve(2 * inst.rects.size() + 2);
    g.xs.push_back(0);
    g.xs.push_back(inst.boundary.width);
    g.ys.push_back(0);
    g.ys.push_back(inst.boundary.height);
    for (const Rect& r : inst.rects) {
        g.xs.push_back(r.x1);
        g.xs.push_back(r.x2);
        g.ys.push_back(r.y1);
        g.ys.push_back(r.y2);
    }
    std::sort(g.xs.begin(), g.xs.end());
    g.xs.erase(std::unique(g.xs.begin(), g.xs.end()), g.xs.end());
    std::sort(g.ys.begin(), g.ys.end());
    g.ys.erase(std::unique(g.ys.begin(), g.ys.end()), g.ys.end());
    return g;
}

namespace {

struct Segment {
    Coord lo, hi;
};

// Max closed-interval coverage over one boundary edge, with the smallest
// coordinate where it is attained; used for SEP where coverage is counted
// at lattice points and segments include both endpoints.
std::pair<std::int64_t, Coord> edge_coverage_closed(std::vector<Segment>& segs) {
    std::vector<std::pair<Coord, int>> events;  // (coordinate, +1/-1)
    events.reserve(2 * segs.size());
    for (const Segment& s : segs) {
        events.push_back({s.lo, +1});
        events.push_back({s.hi, -1});
    }
    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first < b.first;
        return a.second > b.second;  // opens before closes: closed intervals
    });
    std::int64_t cur = 0, best = 0;
    Coord best_at = 0;
    for (std::size_t i = 0; i < events.size();) {
        const Coord at = events[i].first;
        while (i < events.size() && events[i].first == at && events[i].second > 0) {
            ++cur;
            ++i;
        }
        if (cur > best) {
            best = cur;
            best_at = at;
        }
        while (i < events.size() && events[i].first == at) {
            --cur;
            ++i;
        }
    }
    return {best, best_at};
}

// Max coverage of the open sub-segments between consecutive endpoints, with
// the left anchor of the first argmax sub-segment; used for REP where two
// paths meeting at a single edge point do not overlap, mirroring the
// open-cell evaluation inside the box (and keeping k_B <= k).
std::pair<std::int64_t, Coord> edge_coverage_open(std::vector<Segment>& segs) {
    std::vector<std::pair<Coord, int>> events;
    events.reserve(2 * segs.size());
    for (const Segment& s : segs) {
        events.push_back({s.lo, +1});
        events.push_back({s.hi, -1});
    }
    std::sort(events.begin(), events.end());
    std::int64_t cur = 0, best = 0;
    Coord best_at = 0;
    for (std::size_t i = 0; i < events.size();) {
        const Coord at = events[i].first;
        while (i < events.size() && events[i].first == at) {
            cur += events[i].second;
            ++i;
        }
        // cur now counts segments covering the open interval (at, next).
        if (i < events.size() && cur > best) {
            best = cur;
            best_at = at;
        }
    }
    return {best, best_at};
}

void fill_boundary_rep(const RepInstance& inst, const std::vector<Rect>& paths,
                       DensityReport& out) {
    const Coord W = inst.boundary.width, H = inst.boundary.height;
    std::array<std::vector<Segment>, 4> edges;  // left, right, down, up
    for (const Rect& p : paths) {
        if (p.x1 == 0) edges[0].push_back({p.y1, p.y2});
        if (p.x2 == W) edges[1].push_back({p.y1, p.y2});
        if (p.y1 == 0) edges[2].push_back({p.x1, p.x2});
        if (p.y2 == H) edges[3].push_back({p.x1, p.x2});
    }
    out.boundary_density = 0;
    out.witness_boundary = {0, 0};
    for (std::size_t e = 0; e < 4; ++e) {
        auto [cov, at] = edge_coverage_open(edges[e]);
        if (cov > out.boundary_density) {
            out.boundary_density = cov;
            switch (e) {
            case 0: out.witness_boundary = {0, at}; break;
            case 1: out.witness_boundary = {W, at}; break;
            case 2: out.witness_boundary = {at, 0}; break;
            case 3: out.witness_boundary = {at, H}; break;
            }
        }
    }
}

std::vector<Rect> make_paths(const RepInstance& inst, const EscapeAssignment& a) {
    if (a.size() != inst.rects.size())
        throw ValidationError("assignment length does not match instance size");
    std::vector<Rect> paths;
    paths.reserve(inst.rects.size());
    for (std::size_t i = 0; i < inst.rects.size(); ++i)
        paths.push_back(escape_path(inst.rects[i], a[i], inst.boundary));
    return paths;
}

}  // namespace

namespace detail {

DensityReport density_rep_dense(const RepInstance& inst, const EscapeAssignment& a,
                                const EscapeGrid& grid) {
    const std::size_t nx = grid.x_cells(), ny = grid.y_cells();
    const std::vector<Rect> paths = make_paths(inst, a);
    // 2D difference array over cells; diff is (nx+1) x (ny+1), x-major.
    std::vector<std::int64_t> diff((nx + 1) * (ny + 1), 0);
    const std::size_t stride = ny + 1;
    for (const Rect& p : paths) {
        const std::size_t ix1 = grid.x_index(p.x1), ix2 = grid.x_index(p.x2);
        const std::size_t iy1 = grid.y_index(p.y1), iy2 = grid.y_index(p.y2);
        diff[ix1 * stride + iy1] += 1;
        diff[ix1 * stride + iy2] -= 1;
        diff[ix2 * stride + iy1] -= 1;
        diff[ix2 * stride + iy2] += 1;
    }
    DensityReport out;
    out.witness_cell = {0, 0};
    std::vector<std::int64_t> col(ny, 0);
    for (std::size_t i = 0; i < nx; ++i) {
        std::int64_t run = 0;
        for (std::size_t j = 0; j < ny; ++j) {
            run += diff[i * stride + j];
            col[j] += run;
            if (col[j] > out.density) {
                out.density = col[j];
                out.witness_cell = {static_cast<Coord>(i), static_cast<Coord>(j)};
            }
        }
    }
    fill_boundary_rep(inst, paths, out);
    return out;
}

DensityReport density_rep_sweep(const RepInstance& inst, const EscapeAssignment& a,
                                const EscapeGrid& grid) {
    const std::size_t nx = grid.x_cells(), ny = grid.y_cells();
    const std::vector<Rect> paths = make_paths(inst, a);
    // Slab sweep over x; the tree holds per-y-cell coverage of the open slab.
    struct Event {
        std::size_t slab;
        std::int64_t lo, hi, delta;
    };
    std::vector<Event> events;
    events.reserve(2 * paths.size());
    for (const Rect& p : paths) {
        const std::int64_t iy1 = static_cast<std::int64_t>(grid.y_index(p.y1));
        const std::int64_t iy2 = static_cast<std::int64_t>(grid.y_index(p.y2));
        events.push_back({grid.x_index(p.x1), iy1, iy2 - 1, +1});
        events.push_back({grid.x_index(p.x2), iy1, iy2 - 1, -1});
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.slab < b.slab; });
    detail::MaxTree tree(ny);
    DensityReport out;
    out.witness_cell = {0, 0};
    std::size_t e = 0;
    for (std::size_t i = 0; i < nx; ++i) {
        while (e < events.size() && events[e].slab == i) {
            tree.add(events[e].lo, events[e].hi, events[e].delta);
            ++e;
        }
        if (tree.max() > out.density) {
            out.density = tree.max();
            out.witness_cell = {static_cast<Coord>(i), static_cast<Coord>(tree.argmax())};
        }
    }
    fill_boundary_rep(inst, paths, out);
    return out;
}

}  // namespace detail

DensityReport compute_density_rep(const RepInstance& inst, const EscapeAssignment& a) {
    const EscapeGrid grid = build_escape_grid(inst);
    // Dense scan is cache-friendly for small grids; the sweep keeps large
    // instances at O((n + cells_x) log cells_y) memory-free of the full grid.
    if (grid.cell_count() <= (1u << 22))
        return detail::density_rep_dense(inst, a, grid);
    return detail::density_rep_sweep(inst, a, grid);
}

DensityReport compute_density_sep(const SepInstance& inst, const EscapeAssignment& a) {
    if (a.size() != inst.points.size())
        throw ValidationError("assignment length does not match instance size");
    const Coord W = inst.boundary.width, H = inst.boundary.height;
    DensityReport out;
    out.witness_cell = {0, 0};
    out.witness_boundary = {0, 0};
    if (inst.points.empty())
        return out;

    // Horizontal path = inclusive column range on one row; vertical the same
    // on one column. Coverage at a lattice point is horizontal + vertical
    // hits, and the maximum is attained at a critical coordinate (a point
    // coordinate or the boundary), so the sweep runs on the compressed grid.
    struct HSeg {
        Coord y, x1, x2;
    };
    struct VSeg {
        Coord x, y1, y2;
    };
    std::vector<HSeg> hsegs;
    std::vector<VSeg> vsegs;
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
        const Point& p = inst.points[i];
        switch (a[i]) {
        case Direction::Left: hsegs.push_back({p.y, 0, p.x}); break;
        case Direction::Right: hsegs.push_back({p.y, p.x, W}); break;
        case Direction::Down: vsegs.push_back({p.x, 0, p.y}); break;
        case Direction::Up: vsegs.push_back({p.x, p.y, H}); break;
        }
    }

    std::vector<Coord> xs = {0, W}, ys = {0, H};
    for (const Point& p : inst.points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    auto xi = [&](Coord v) {
        return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), v) - xs.begin());
    };
    auto yi = [&](Coord v) {
        return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), v) - ys.begin());
    };

    // Sweep x ascending. The tree holds, per compressed y, the horizontal
    // coverage at the current x; each column's vertical segments are layered
    // on temporarily to read off max coverage in that column.
    struct HEvent {
        std::size_t at;
        std::size_t row;
        std::int64_t delta;
    };
    std::vector<HEvent> hevents;
    hevents.reserve(2 * hsegs.size());
    for (const HSeg& s : hsegs) {
        hevents.push_back({xi(s.x1), yi(s.y), +1});
        hevents.push_back({xi(s.x2) + 1, yi(s.y), -1});
    }
    std::sort(hevents.begin(), hevents.end(),
              [](const HEvent& a, const HEvent& b) { return a.at < b.at; });
    std::vector<std::vector<VSeg>> by_col(xs.size());
    for (const VSeg& s : vsegs)
        by_col[xi(s.x)].push_back(s);

    detail::MaxTree tree(ys.size());
    std::size_t e = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        while (e < hevents.size() && hevents[e].at == i) {
            tree.add(static_cast<std::int64_t>(hevents[e].row),
                     static_cast<std::int64_t>(hevents[e].row), hevents[e].delta);
            ++e;
        }
        for (const VSeg& s : by_col[i])
            tree.add(static_cast<std::int64_t>(yi(s.y1)), static_cast<std::int64_t>(yi(s.y2)), +1);
        if (tree.max() > out.density) {
            out.density = tree.max();
            out.witness_cell = {xs[i], ys[tree.argmax()]};
        }
        for (const VSeg& s : by_col[i])
            tree.add(static_cast<std::int64_t>(yi(s.y1)), static_cast<std::int64_t>(yi(s.y2)), -1);
    }

    // Boundary edges, in the order left, right, down, up.
    std::array<std::vector<Segment>, 4> edges;
    for (const HSeg& s : hsegs) {
        if (s.x1 == 0) edges[0].push_back({s.y, s.y});
        if (s.x2 == W) edges[1].push_back({s.y, s.y});
        if (s.y == 0) edges[2].push_back({s.x1, s.x2});
        if (s.y == H) edges[3].push_back({s.x1, s.x2});
    }
    for (const VSeg& s : vsegs) {
        if (s.x == 0) edges[0].push_back({s.y1, s.y2});
        if (s.x == W) edges[1].push_back({s.y1, s.y2});
        if (s.y1 == 0) edges[2].push_back({s.x, s.x});
        if (s.y2 == H) edges[3].push_back({s.x, s.x});
    }
    for (std::size_t k = 0; k < 4; ++k) {
        auto [cov, at] = edge_coverage_closed(edges[k]);
        if (cov > out.boundary_density) {
            out.boundary_density = cov;
            switch (k) {
            case 0: out.witness_boundary = {0, at}; break;
            case 1: out.witness_boundary = {W, at}; break;
            case 2: out.witness_boundary = {at, 0}; break;
            case 3: out.witness_boundary = {at, H}; break;
            }
        }
    }
    return out;
}

bool check_disjoint(const RepInstance& inst) {
    const std::size_t n = inst.rects.size();
    if (n < 2)
        return true;
    // Plane sweep on x. Closed rectangles touch-intersect, so at each x all
    // openings are applied before closings and y-overlap tests are closed.
    struct Event {
        Coord x;
        int type;  // 0 = open, 1 = close
        std::size_t idx;
    };
    std::vector<Event> events;
    events.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        events.push_back({inst.rects[i].x1, 0, i});
        events.push_back({inst.rects[i].x2, 1, i});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.x != b.x)
            return a.x < b.x;
        return a.type < b.type;
    });
    // Active y-intervals stay pairwise disjoint (first overlap returns), so
    // ordered by y1 they are also ordered by y2, and a new interval overlaps
    // some active one iff it overlaps its predecessor or successor.
    struct Interval {
        Coord lo, hi;
        std::size_t idx;
        bool operator<(const Interval& b) const {
            if (lo != b.lo)
                return lo < b.lo;
            if (hi != b.hi)
                return hi < b.hi;
            return idx < b.idx;
        }
    };
    std::multiset<Interval> active;
    for (std::size_t e = 0; e < events.size();) {
        const Coord x = events[e].x;
        std::size_t open_from = e;
        while (e < events.size() && events[e].x == x && events[e].type == 0)
            ++e;
        for (std::size_t k = open_from; k < e; ++k) {
            const Rect& r = inst.rects[events[k].idx];
            Interval iv{r.y1, r.y2, events[k].idx};
            auto it = active.insert(iv);
            if (it != active.begin()) {
                auto prev = std::prev(it);
                if (prev->hi >= iv.lo)
                    return false;
            }
            auto next = std::next(it);
            if (next != active.end() && next->lo <= iv.hi)
                return false;
        }
        while (e < events.size() && events[e].x == x) {
            const Rect& r = inst.rects[events[e].idx];
            active.erase(active.find(Interval{r.y1, r.y2, events[e].idx}));
            ++e;
        }
    }
    return true;
}

bool check_disjoint(const SepInstance& inst) {
    std::vector<Point> pts = inst.points;
    std::sort(pts.begin(), pts.end());
    return std::adjacent_find(pts.begin(), pts.end()) == pts.end();
}

RepInstance sep_to_rep(const SepInstance& inst) {
    RepInstance rep;
    rep.boundary = {2 * inst.boundary.width + 2, 2 * inst.boundary.height + 2};
    rep.rects.reserve(inst.points.size());
    for (const Point& p : inst.points)
        rep.rects.push_back({2 * p.x, 2 * p.y, 2 * p.x + 1, 2 * p.y + 1});
    rep.disjoint = inst.is_disjoint();
    return rep;
}

}  // namespace escape
