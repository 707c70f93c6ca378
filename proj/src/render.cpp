#include "escape/render.hpp"

#include <algorithm>
#include <sstream>

#include "escape/geometry.hpp"

namespace escape {

namespace {

const char* kPalette[12] = {"#4878cf", "#d65f5f", "#59a14f", "#ee9432", "#8172b2", "#937860",
                            "#da8bc3", "#66c2cc", "#b5bd4c", "#c44e52", "#55a868", "#8c613c"};

const char* kPathFill[4] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"};

struct Scale {
    Coord s;
    Coord pad;
    Coord h;  // world height, for the y flip

    Coord x(Coord wx) const { return pad + wx * s; }
    Coord y(Coord wy) const { return pad + (h - wy) * s; }
};

void emit_rect(std::ostringstream& os, const Scale& sc, const Rect& r, const char* cls,
               const std::string& style) {
    os << "  <rect class=\"" << cls << "\" x=\"" << sc.x(r.x1) << "\" y=\"" << sc.y(r.y2)
       << "\" width=\"" << (r.x2 - r.x1) * sc.s << "\" height=\"" << (r.y2 - r.y1) * sc.s << "\" "
       << style << "/>\n";
}

}  // namespace

std::string render_svg(const Instance& inst, const EscapeAssignment* assignment,
                       const std::vector<std::vector<std::uint32_t>>* levels) {
    const Boundary b = boundary_of(inst);
    Scale sc;
    sc.s = std::clamp<Coord>(800 / std::max<Coord>(1, std::max(b.width, b.height)), 2, 48);
    sc.pad = sc.s;
    sc.h = b.height;

    const std::size_t n = size_of(inst);
    std::vector<int> level_of(n, -1);
    if (levels)
        for (std::size_t l = 0; l < levels->size(); ++l)
            for (std::uint32_t i : (*levels)[l])
                if (i < n)
                    level_of[i] = static_cast<int>(l % 12);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << b.width * sc.s + 2 * sc.pad
       << "\" height=\"" << b.height * sc.s + 2 * sc.pad << "\">\n";
    os << "  <rect class=\"frame\" x=\"" << sc.x(0) << "\" y=\"" << sc.y(b.height) << "\" width=\""
       << b.width * sc.s << "\" height=\"" << b.height * sc.s
       << "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"2\"/>\n";

    if (const auto* rep = std::get_if<RepInstance>(&inst)) {
        if (assignment) {
            for (std::size_t i = 0; i < rep->rects.size() && i < assignment->size(); ++i) {
                const Direction d = (*assignment)[i];
                const Rect p = escape_path(rep->rects[i], d, rep->boundary);
                emit_rect(os, sc, p, "path",
                          std::string("fill=\"") + kPathFill[static_cast<int>(d)] +
                              "\" fill-opacity=\"0.22\" stroke=\"none\" ");
            }
        }
        for (std::size_t i = 0; i < rep->rects.size(); ++i) {
            const char* fill = level_of[i] >= 0 ? kPalette[level_of[i]] : kPalette[0];
            emit_rect(os, sc, rep->rects[i], "rect",
                      std::string("fill=\"") + fill + "\" stroke=\"#222222\" stroke-width=\"1\" ");
        }
    } else if (const auto* sep = std::get_if<SepInstance>(&inst)) {
        const Coord r = std::max<Coord>(2, sc.s / 4);
        if (assignment) {
            const Coord w = std::max<Coord>(2, sc.s / 6);
            for (std::size_t i = 0; i < sep->points.size() && i < assignment->size(); ++i) {
                const Direction d = (*assignment)[i];
                const Point p = sep->points[i];
                Coord x1 = sc.x(p.x), y1 = sc.y(p.y), x2 = x1, y2 = y1;
                switch (d) {
                    case Direction::Left: x1 = sc.x(0); break;
                    case Direction::Right: x2 = sc.x(b.width); break;
                    case Direction::Down: y2 = sc.y(0); break;
                    case Direction::Up: y1 = sc.y(b.height); break;
                }
                os << "  <rect class=\"path\" x=\"" << std::min(x1, x2) - w / 2 << "\" y=\""
                   << std::min(y1, y2) - w / 2 << "\" width=\"" << (x2 - x1) + w << "\" height=\""
                   << (y2 - y1) + w << "\" fill=\""
                   << kPathFill[static_cast<int>(d)]
                   << "\" fill-opacity=\"0.22\" stroke=\"none\" />\n";
            }
        }
        for (std::size_t i = 0; i < sep->points.size(); ++i) {
            const char* fill = level_of[i] >= 0 ? kPalette[level_of[i]] : kPalette[1];
            os << "  <circle class=\"pt\" cx=\"" << sc.x(sep->points[i].x) << "\" cy=\""
               << sc.y(sep->points[i].y) << "\" r=\"" << r << "\" fill=\"" << fill
               << "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace escape
