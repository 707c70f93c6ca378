#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "escape/io.hpp"

namespace escape {

// Deterministic SVG: geometry scaled to integer pixels, world y up. Escape
// paths (when an assignment is given) overlay the shapes translucently;
// level sets (when given) color the shapes by level.
std::string render_svg(const Instance& inst, const EscapeAssignment* assignment,
                       const std::vector<std::vector<std::uint32_t>>* levels);

}  // namespace escape
