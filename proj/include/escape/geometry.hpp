#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace escape {

// Error taxonomy. The CLI maps these onto exit codes, the library just throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct SimulationError : Error {
    using Error::Error;
};
// An approximation guarantee the algorithms promise internally did not hold.
struct BoundViolation : Error {
    using Error::Error;
};

using Coord = std::int64_t;

struct Point {
    Coord x = 0;
    Coord y = 0;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

// The bounding box B = [0,width] x [0,height].
struct Boundary {
    Coord width = 1;
    Coord height = 1;

    void validate() const {
        if (width < 1 || height < 1)
            throw ValidationError("boundary sides must be >= 1");
    }
    friend bool operator==(const Boundary&, const Boundary&) = default;
};

// Closed axis-aligned rectangle [x1,x2] x [y1,y2] with x1 < x2, y1 < y2.
struct Rect {
    Coord x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    Coord width() const { return x2 - x1; }
    Coord height() const { return y2 - y1; }

    bool contains(const Rect& other) const {
        return x1 <= other.x1 && other.x2 <= x2 && y1 <= other.y1 && other.y2 <= y2;
    }
    // Closed-set intersection (touching edges intersect).
    bool intersects_closed(const Rect& other) const {
        return x1 <= other.x2 && other.x1 <= x2 && y1 <= other.y2 && other.y1 <= y2;
    }
    void validate_inside(const Boundary& b) const {
        if (!(0 <= x1 && x1 < x2 && x2 <= b.width && 0 <= y1 && y1 < y2 && y2 <= b.height))
            throw ValidationError("rectangle out of bounds or degenerate");
    }
    friend bool operator==(const Rect&, const Rect&) = default;
    friend auto operator<=>(const Rect&, const Rect&) = default;
};

// Canonical order left < right < down < up; it is the tie-break order
// everywhere in the library (peeling, argmax rounding, branch priority).
enum class Direction : std::uint8_t { Left = 0, Right = 1, Down = 2, Up = 3 };

inline constexpr std::array<Direction, 4> kDirections = {Direction::Left, Direction::Right,
                                                         Direction::Down, Direction::Up};

constexpr Direction opposite(Direction d) {
    switch (d) {
    case Direction::Left: return Direction::Right;
    case Direction::Right: return Direction::Left;
    case Direction::Down: return Direction::Up;
    case Direction::Up: return Direction::Down;
    }
    return Direction::Left;
}

// Perpendicular direction, fixed as the clockwise quarter turn so that
// perpendicular(perpendicular(d)) == opposite(d).
constexpr Direction perpendicular(Direction d) {
    switch (d) {
    case Direction::Up: return Direction::Right;
    case Direction::Right: return Direction::Down;
    case Direction::Down: return Direction::Left;
    case Direction::Left: return Direction::Up;
    }
    return Direction::Up;
}

constexpr bool is_horizontal(Direction d) {
    return d == Direction::Left || d == Direction::Right;
}

std::string_view to_string(Direction d);
Direction direction_from_string(std::string_view s);  // accepts "left"/"l", ...

// One chosen escape direction per input element, index-aligned.
using EscapeAssignment = std::vector<Direction>;

// REP input: rectangles inside a boundary box. `disjoint` is a declared
// property and is verified on load when set.
struct RepInstance {
    Boundary boundary;
    std::vector<Rect> rects;
    bool disjoint = false;

    std::size_t size() const { return rects.size(); }
    void validate() const;
};

// SEP input: lattice points of the (width+1) x (height+1) grid; repeated
// points encode multiplicity.
struct SepInstance {
    Boundary boundary;
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
    bool is_disjoint() const;  // all multiplicities equal one
    void validate() const;
};

// Grid formed by extending all rectangle edges to the boundary.
// xs/ys are strictly increasing and always contain 0 and width/height.
struct EscapeGrid {
    std::vector<Coord> xs;
    std::vector<Coord> ys;

    std::size_t x_cells() const { return xs.size() - 1; }
    std::size_t y_cells() const { return ys.size() - 1; }
    std::size_t cell_count() const { return x_cells() * y_cells(); }

    // Index of coordinate v in xs/ys; v must be a grid line.
    std::size_t x_index(Coord v) const;
    std::size_t y_index(Coord v) const;
};

struct DensityReport {
    std::int64_t density = 0;
    std::int64_t boundary_density = 0;
    // REP: (i,j) cell indices into the escape grid. SEP: the lattice point.
    Point witness_cell;
    // A boundary point where the boundary maximum is attained (for REP the
    // anchor corner of the argmax boundary segment).
    Point witness_boundary;
};

// The escape path of r in direction d: r extended until it reaches the boundary.
Rect escape_path(const Rect& r, Direction d, const Boundary& b);

EscapeGrid build_escape_grid(const RepInstance& inst);

// Density of an assignment: max over open cells of the escape grid of the
// number of escape paths covering the cell. Paths cover their own rectangle's
// footprint. Boundary density counts coverage of the open sub-segments of the
// boundary edges (paths meeting at a single edge point do not overlap, the
// 1-d analogue of the open-cell rule, so boundary density <= density).
DensityReport compute_density_rep(const RepInstance& inst, const EscapeAssignment& a);

// SEP density: paths are inclusive lattice segments from the point to the
// boundary; density is the max path count over all lattice points, boundary
// density the same max over boundary lattice points.
DensityReport compute_density_sep(const SepInstance& inst, const EscapeAssignment& a);

// Pairwise closed-set disjointness (REP) / all-multiplicities-one (SEP),
// O(n log n).
bool check_disjoint(const RepInstance& inst);
bool check_disjoint(const SepInstance& inst);

// SEP as a REP of unit squares: point (x,y) -> [2x,2x+1]x[2y,2y+1] inside a
// (2W+2) x (2H+2) box. The factor 2 keeps neighbouring squares disjoint as
// closed sets, and the mapping preserves blocking and realized densities.
RepInstance sep_to_rep(const SepInstance& inst);

namespace detail {

// Both evaluate the full REP report; compute_density_rep picks by grid size.
// Exposed so tests can cross-check one against the other.
DensityReport density_rep_dense(const RepInstance& inst, const EscapeAssignment& a,
                                const EscapeGrid& grid);
DensityReport density_rep_sweep(const RepInstance& inst, const EscapeAssignment& a,
                                const EscapeGrid& grid);

}  // namespace detail

}  // namespace escape
