#include "escape/generate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "escape/rng.hpp"

namespace escape {

namespace {

Coord isqrt_ceil(std::size_t n) {
    if (n <= 1)
        return static_cast<Coord>(n);
    auto s = static_cast<Coord>(std::sqrt(static_cast<double>(n)));
    while (s * s < static_cast<Coord>(n))
        ++s;
    return s;
}

bool rects_overlap(const Rect& a, const Rect& b) {
    return a.x1 <= b.x2 && b.x1 <= a.x2 && a.y1 <= b.y2 && b.y1 <= a.y2;
}

RepInstance gen_rep_random(const GenSpec& spec) {
    RepInstance inst;
    const Coord side = std::max<Coord>(8, (isqrt_ceil(spec.n) * 7) / 2 + 4);
    inst.boundary.width = spec.width > 0 ? spec.width : side;
    inst.boundary.height = spec.height > 0 ? spec.height : side;
    inst.disjoint = spec.disjoint;
    Rng rng(spec.seed);

    if (!spec.disjoint) {
        const Coord max_w = std::max<Coord>(1, inst.boundary.width / 3);
        const Coord max_h = std::max<Coord>(1, inst.boundary.height / 3);
        for (std::size_t i = 0; i < spec.n; ++i) {
            const Coord w = rng.range(1, max_w);
            const Coord h = rng.range(1, max_h);
            const Coord x1 = rng.range(0, inst.boundary.width - w);
            const Coord y1 = rng.range(0, inst.boundary.height - h);
            inst.rects.push_back({x1, y1, x1 + w, y1 + h});
        }
        inst.disjoint = check_disjoint(inst);
        inst.validate();
        return inst;
    }

    // Disjoint placement by rejection; a coarse bucket grid keeps the
    // overlap checks local. Rectangles are 1..3 wide with a margin of 1.
    constexpr Coord kBucket = 5;
    const Coord bw = inst.boundary.width / kBucket + 2;
    const Coord bh = inst.boundary.height / kBucket + 2;
    std::vector<std::vector<std::uint32_t>> buckets(
        static_cast<std::size_t>(bw) * static_cast<std::size_t>(bh));
    auto bucket_at = [&](Coord bx, Coord by) -> std::vector<std::uint32_t>& {
        return buckets[static_cast<std::size_t>(bx) * static_cast<std::size_t>(bh) +
                       static_cast<std::size_t>(by)];
    };

    const std::size_t max_attempts = 200 * spec.n + 1000;
    std::size_t attempts = 0;
    while (inst.rects.size() < spec.n) {
        if (++attempts > max_attempts)
            throw ValidationError("could not place " + std::to_string(spec.n) +
                                  " disjoint rectangles in " +
                                  std::to_string(inst.boundary.width) + "x" +
                                  std::to_string(inst.boundary.height) +
                                  " after bounded retries");
        const Coord w = rng.range(1, 3);
        const Coord h = rng.range(1, 3);
        if (inst.boundary.width < w + 2 || inst.boundary.height < h + 2)
            throw ValidationError("boundary too small for any placement");
        const Coord x1 = rng.range(1, inst.boundary.width - 1 - w);
        const Coord y1 = rng.range(1, inst.boundary.height - 1 - h);
        const Rect cand{x1, y1, x1 + w, y1 + h};

        bool ok = true;
        const Coord bx0 = std::max<Coord>(0, cand.x1 / kBucket - 1);
        const Coord bx1 = std::min<Coord>(bw - 1, cand.x2 / kBucket + 1);
        const Coord by0 = std::max<Coord>(0, cand.y1 / kBucket - 1);
        const Coord by1 = std::min<Coord>(bh - 1, cand.y2 / kBucket + 1);
        for (Coord bx = bx0; ok && bx <= bx1; ++bx)
            for (Coord by = by0; ok && by <= by1; ++by)
                for (std::uint32_t idx : bucket_at(bx, by))
                    if (rects_overlap(cand, inst.rects[idx])) {
                        ok = false;
                        break;
                    }
        if (!ok)
            continue;
        const auto idx = static_cast<std::uint32_t>(inst.rects.size());
        inst.rects.push_back(cand);
        bucket_at(cand.x1 / kBucket, cand.y1 / kBucket).push_back(idx);
    }
    inst.validate();
    return inst;
}

RepInstance gen_rings(const GenSpec& spec) {
    // n = 2d(d+1) unit squares in d concentric diamond rings; peeling
    // removes exactly one ring per round.
    Coord d = 0;
    while (2 * (d + 1) * (d + 2) <= static_cast<Coord>(spec.n))
        ++d;
    if (2 * d * (d + 1) != static_cast<Coord>(spec.n) || d < 1)
        throw ValidationError("rings family needs n = 2*d*(d+1) for some d >= 1 (4, 12, 24, ...)");

    RepInstance inst;
    const Coord c = 2 * d + 2;
    inst.boundary.width = 4 * d + 5;
    inst.boundary.height = 4 * d + 5;
    inst.disjoint = true;
    for (Coord j = 1; j <= d; ++j)
        for (Coord dx = -j; dx <= j; ++dx) {
            const Coord rest = j - (dx < 0 ? -dx : dx);
            const Coord x = c + 2 * dx;
            inst.rects.push_back({x, c + 2 * rest, x + 1, c + 2 * rest + 1});
            if (rest != 0)
                inst.rects.push_back({x, c - 2 * rest, x + 1, c - 2 * rest + 1});
        }
    inst.validate();
    return inst;
}

RepInstance gen_staircase(const GenSpec& spec) {
    // Nested three-sided square frames, the open side rotating through the
    // canonical direction order as the frames step inward.
    if (spec.n % 3 != 0 || spec.n == 0)
        throw ValidationError("staircase family needs a positive multiple of 3");
    const Coord d = static_cast<Coord>(spec.n / 3);

    RepInstance inst;
    const Coord side = 6 * d + 4;
    inst.boundary.width = side;
    inst.boundary.height = side;
    inst.disjoint = true;
    for (Coord j = 0; j < d; ++j) {
        const Coord m = 3 * j + 2;
        const Coord hi = side - m;
        const Rect left{m, m + 2, m + 1, hi - 2};
        const Rect right{hi - 1, m + 2, hi, hi - 2};
        const Rect down{m, m, hi, m + 1};
        const Rect up{m, hi - 1, hi, hi};
        const int open = static_cast<int>(j % 4);
        const Rect sides[4] = {left, right, down, up};
        for (int s = 0; s < 4; ++s)
            if (s != open)
                inst.rects.push_back(sides[s]);
    }
    inst.validate();
    return inst;
}

SepInstance gen_sep_random(const GenSpec& spec) {
    SepInstance inst;
    const Coord side = std::max<Coord>(8, 2 * isqrt_ceil(spec.n) + 2);
    inst.boundary.width = spec.width > 0 ? spec.width : side;
    inst.boundary.height = spec.height > 0 ? spec.height : side;
    Rng rng(spec.seed);

    const Coord iw = inst.boundary.width - 2;
    const Coord ih = inst.boundary.height - 2;
    if (iw < 1 || ih < 1)
        throw ValidationError("boundary too small for interior points");
    if (spec.disjoint &&
        static_cast<std::size_t>(iw + 1) * static_cast<std::size_t>(ih + 1) < spec.n)
        throw ValidationError("boundary too small for " + std::to_string(spec.n) +
                              " distinct interior points");

    std::set<Point> used;
    const std::size_t max_attempts = 100 * spec.n + 1000;
    std::size_t attempts = 0;
    while (inst.points.size() < spec.n) {
        if (++attempts > max_attempts)
            throw ValidationError("could not place distinct interior points after bounded retries");
        if (!spec.disjoint && !inst.points.empty() && rng.chance(0.15)) {
            const std::size_t pick = static_cast<std::size_t>(rng.below(inst.points.size()));
            inst.points.push_back(inst.points[pick]);
            continue;
        }
        const Point p{rng.range(1, inst.boundary.width - 1),
                      rng.range(1, inst.boundary.height - 1)};
        if (spec.disjoint && !used.insert(p).second)
            continue;
        inst.points.push_back(p);
    }
    inst.validate();
    return inst;
}

SepInstance gen_rows(const GenSpec& spec) {
    if (spec.n == 0)
        throw ValidationError("rows family needs n >= 1");
    SepInstance inst;
    inst.boundary.width = 2 * static_cast<Coord>(spec.n) + 2;
    inst.boundary.height = 4;
    for (std::size_t i = 0; i < spec.n; ++i)
        inst.points.push_back({2 * static_cast<Coord>(i) + 1, 2});
    inst.validate();
    return inst;
}

}  // namespace

GenFamily family_from_string(const std::string& s) {
    if (s == "random")
        return GenFamily::Random;
    if (s == "rings")
        return GenFamily::Rings;
    if (s == "staircase")
        return GenFamily::Staircase;
    if (s == "rows")
        return GenFamily::Rows;
    throw ParseError("unknown family '" + s + "' (random|rings|staircase|rows)");
}

std::string to_string(GenFamily f) {
    switch (f) {
        case GenFamily::Random: return "random";
        case GenFamily::Rings: return "rings";
        case GenFamily::Staircase: return "staircase";
        case GenFamily::Rows: return "rows";
    }
    return "random";
}

Instance generate(const GenSpec& spec) {
    switch (spec.family) {
        case GenFamily::Random:
            if (spec.sep)
                return gen_sep_random(spec);
            return gen_rep_random(spec);
        case GenFamily::Rings:
            if (spec.sep)
                throw ValidationError("rings is a rectangle family");
            return gen_rings(spec);
        case GenFamily::Staircase:
            if (spec.sep)
                throw ValidationError("staircase is a rectangle family");
            return gen_staircase(spec);
        case GenFamily::Rows:
            if (!spec.sep)
                throw ValidationError("rows is a point family");
            return gen_rows(spec);
    }
    throw std::logic_error("unreachable family");
}

}  // namespace escape
