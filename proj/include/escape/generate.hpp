#pragma once

#include <cstdint>
#include <string>

#include "escape/io.hpp"

namespace escape {

enum class GenFamily { Random, Rings, Staircase, Rows };

GenFamily family_from_string(const std::string& s);
std::string to_string(GenFamily f);

struct GenSpec {
    bool sep = false;  // REP otherwise
    std::size_t n = 0;
    std::uint64_t seed = 0;
    bool disjoint = true;
    Coord width = 0;  // 0 picks a size from n
    Coord height = 0;
    GenFamily family = GenFamily::Random;
};

// Deterministic in the spec. `rings` builds concentric diamond rings (one
// peeling level each), `staircase` builds nested three-sided frames with a
// rotating opening, `rows` builds collinear interior points.
Instance generate(const GenSpec& spec);

}  // namespace escape
