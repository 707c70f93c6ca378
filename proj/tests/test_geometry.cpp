#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "escape/generate.hpp"
#include "escape/geometry.hpp"
#include "escape/io.hpp"
#include "escape/rng.hpp"
#include "support/oracles.hpp"

using namespace escape;

namespace {

RepInstance random_rep(std::size_t n, std::uint64_t seed, bool disjoint, Coord side = 0) {
    GenSpec spec;
    spec.n = n;
    spec.seed = seed;
    spec.disjoint = disjoint;
    spec.width = side;
    spec.height = side;
    return std::get<RepInstance>(generate(spec));
}

SepInstance random_sep(std::size_t n, std::uint64_t seed, bool disjoint, Coord side = 0) {
    GenSpec spec;
    spec.sep = true;
    spec.n = n;
    spec.seed = seed;
    spec.disjoint = disjoint;
    spec.width = side;
    spec.height = side;
    return std::get<SepInstance>(generate(spec));
}

EscapeAssignment random_assignment(std::size_t n, Rng& rng) {
    EscapeAssignment a(n);
    for (auto& d : a)
        d = static_cast<Direction>(rng.below(4));
    return a;
}

}  // namespace

TEST_CASE("direction order, involutions and names") {
    CHECK(static_cast<int>(Direction::Left) == 0);
    CHECK(static_cast<int>(Direction::Right) == 1);
    CHECK(static_cast<int>(Direction::Down) == 2);
    CHECK(static_cast<int>(Direction::Up) == 3);

    for (auto d : kDirections) {
        CHECK(opposite(opposite(d)) == d);
        CHECK(perpendicular(perpendicular(d)) == opposite(d));
        CHECK(is_horizontal(d) != is_horizontal(perpendicular(d)));
        CHECK(direction_from_string(std::string(to_string(d))) == d);
    }
    CHECK(direction_from_string("l") == Direction::Left);
    CHECK(direction_from_string("r") == Direction::Right);
    CHECK(direction_from_string("d") == Direction::Down);
    CHECK(direction_from_string("u") == Direction::Up);
    CHECK_THROWS_AS(direction_from_string("north"), ParseError);
}

TEST_CASE("escape_path extends one side to the boundary") {
    const Boundary b{10, 10};
    CHECK(escape_path({2, 2, 3, 3}, Direction::Up, b) == Rect{2, 2, 3, 10});
    CHECK(escape_path({0, 4, 1, 5}, Direction::Left, b) == Rect{0, 4, 1, 5});
    CHECK(escape_path({2, 2, 3, 3}, Direction::Right, b) == Rect{2, 2, 10, 3});
    CHECK(escape_path({2, 2, 3, 3}, Direction::Left, b) == Rect{0, 2, 3, 3});
    CHECK(escape_path({2, 2, 3, 3}, Direction::Down, b) == Rect{2, 0, 3, 3});

    // Containment and idempotence on random rectangles.
    Rng rng(21);
    for (int t = 0; t < 200; ++t) {
        const Coord x1 = rng.range(0, 8), y1 = rng.range(0, 8);
        const Rect r{x1, y1, x1 + rng.range(1, 10 - x1), y1 + rng.range(1, 10 - y1)};
        for (auto d : kDirections) {
            const Rect p = escape_path(r, d, b);
            CHECK(p.contains(r));
            CHECK(escape_path(p, d, b) == p);
        }
    }
}

TEST_CASE("escape grid collects edge coordinates") {
    RepInstance empty;
    empty.boundary = {7, 5};
    const auto g0 = build_escape_grid(empty);
    CHECK(g0.xs == std::vector<Coord>{0, 7});
    CHECK(g0.ys == std::vector<Coord>{0, 5});
    CHECK(g0.cell_count() == 1);

    RepInstance one;
    one.boundary = {10, 10};
    one.rects = {{2, 4, 3, 5}};
    const auto g1 = build_escape_grid(one);
    CHECK(g1.xs == std::vector<Coord>{0, 2, 3, 10});
    CHECK(g1.ys == std::vector<Coord>{0, 4, 5, 10});
    CHECK(g1.cell_count() == 9);
    CHECK(g1.x_index(3) == 2);
    CHECK(g1.y_index(10) == 3);
    CHECK_THROWS(g1.x_index(4));

    const auto inst = random_rep(50, 3, false);
    const auto g = build_escape_grid(inst);
    CHECK(g.xs.size() <= 102);
    CHECK(g.ys.size() <= 102);
    CHECK(std::is_sorted(g.xs.begin(), g.xs.end()));
    CHECK(std::adjacent_find(g.xs.begin(), g.xs.end()) == g.xs.end());
    CHECK(g.xs.front() == 0);
    CHECK(g.xs.back() == inst.boundary.width);
}

TEST_CASE("instance validation rejects malformed input") {
    const Boundary bad{0, 3};
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    RepInstance inst;
    inst.boundary = {5, 5};
    inst.rects = {{2, 2, 2, 3}};  // zero width
    CHECK_THROWS_AS(inst.validate(), ValidationError);
    inst.rects = {{-1, 0, 2, 3}};
    CHECK_THROWS_AS(inst.validate(), ValidationError);
    inst.rects = {{0, 0, 2, 6}};  // taller than the box
    CHECK_THROWS_AS(inst.validate(), ValidationError);

    // Declared disjoint but overlapping.
    inst.rects = {{0, 0, 2, 2}, {1, 1, 3, 3}};
    inst.disjoint = true;
    CHECK_THROWS_AS(inst.validate(), ValidationError);
    inst.disjoint = false;
    CHECK_NOTHROW(inst.validate());

    SepInstance sep;
    sep.boundary = {4, 4};
    sep.points = {{5, 2}};
    CHECK_THROWS_AS(sep.validate(), ValidationError);
    sep.points = {{2, 2}};
    CHECK_NOTHROW(sep.validate());
}

TEST_CASE("density of simple arrangements") {
    RepInstance inst;
    inst.boundary = {10, 10};
    inst.rects = {{2, 4, 4, 6}};
    for (auto d : kDirections)
        CHECK(compute_density_rep(inst, {d}).density == 1);

    // Side by side in one band, both up: parallel paths never overlap.
    inst.rects = {{1, 4, 3, 6}, {4, 4, 6, 6}};
    auto rep = compute_density_rep(inst, {Direction::Up, Direction::Up});
    CHECK(rep.density == 1);

    // Stacked with a shared x-interval, both up: two paths above the lower one.
    inst.rects = {{2, 1, 5, 3}, {3, 5, 6, 7}};
    rep = compute_density_rep(inst, {Direction::Up, Direction::Up});
    CHECK(rep.density == 2);
    CHECK(rep.boundary_density == 2);  // both reach the top edge over [3,5]

    CHECK_THROWS_AS(compute_density_rep(inst, {Direction::Up}), ValidationError);
}

TEST_CASE("rep density matches the brute-force count") {
    Rng rng(77);
    for (int t = 0; t < 150; ++t) {
        const auto inst = random_rep(1 + t % 7, 500 + t, false);
        const auto a = random_assignment(inst.size(), rng);
        const auto rep = compute_density_rep(inst, a);
        CHECK(rep.density == testsupport::brute_density_rep(inst, a));
        CHECK(rep.boundary_density == testsupport::brute_boundary_rep(inst, a));
        CHECK(rep.boundary_density <= rep.density);

        // Permutation invariance: shuffle the rectangles with their directions.
        std::vector<std::size_t> perm(inst.size());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.below(i)]);
        RepInstance shuffled = inst;
        EscapeAssignment pa(a.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            shuffled.rects[i] = inst.rects[perm[i]];
            pa[i] = a[perm[i]];
        }
        const auto rep2 = compute_density_rep(shuffled, pa);
        CHECK(rep2.density == rep.density);
        CHECK(rep2.boundary_density == rep.boundary_density);
    }
}

TEST_CASE("dense and sweep evaluators agree") {
    Rng rng(13);
    for (int t = 0; t < 40; ++t) {
        const auto inst = random_rep(5 + t * 2, 900 + t, t % 2 == 0);
        const auto a = random_assignment(inst.size(), rng);
        const auto grid = build_escape_grid(inst);
        const auto d1 = detail::density_rep_dense(inst, a, grid);
        const auto d2 = detail::density_rep_sweep(inst, a, grid);
        CHECK(d1.density == d2.density);
        CHECK(d1.boundary_density == d2.boundary_density);
    }
}

TEST_CASE("refining the grid does not change the density") {
    Rng rng(31);
    for (int t = 0; t < 30; ++t) {
        // Doubled coordinates keep midpoint refinement integral.
        auto inst = random_rep(2 + t % 8, 1300 + t, false);
        inst.boundary.width *= 2;
        inst.boundary.height *= 2;
        for (auto& r : inst.rects) {
            r.x1 *= 2;
            r.y1 *= 2;
            r.x2 *= 2;
            r.y2 *= 2;
        }
        const auto a = random_assignment(inst.size(), rng);
        const auto grid = build_escape_grid(inst);
        EscapeGrid fine;
        for (std::size_t i = 0; i + 1 < grid.xs.size(); ++i) {
            fine.xs.push_back(grid.xs[i]);
            fine.xs.push_back((grid.xs[i] + grid.xs[i + 1]) / 2);
        }
        fine.xs.push_back(grid.xs.back());
        for (std::size_t i = 0; i + 1 < grid.ys.size(); ++i) {
            fine.ys.push_back(grid.ys[i]);
            fine.ys.push_back((grid.ys[i] + grid.ys[i + 1]) / 2);
        }
        fine.ys.push_back(grid.ys.back());

        const auto coarse = detail::density_rep_dense(inst, a, grid);
        const auto refined = detail::density_rep_dense(inst, a, fine);
        CHECK(coarse.density == refined.density);
    }
}

TEST_CASE("sep density over inclusive lattice segments") {
    SepInstance inst;
    inst.boundary = {6, 6};
    inst.points = {{3, 3}};
    auto rep = compute_density_sep(inst, {Direction::Up});
    CHECK(rep.density == 1);
    CHECK(rep.boundary_density == 1);
    CHECK(rep.witness_boundary == Point{3, 6});

    inst.points = {{1, 3}, {2, 3}, {3, 3}};
    rep = compute_density_sep(inst, {Direction::Left, Direction::Left, Direction::Left});
    CHECK(rep.density == 3);
    CHECK(rep.boundary_density == 3);  // all three segments cover (0,3) and (1,3)

    rep = compute_density_sep(inst, {Direction::Up, Direction::Up, Direction::Up});
    CHECK(rep.density == 1);
    CHECK(rep.boundary_density == 1);

    // A path covers its own point: multiplicity shows up regardless of direction.
    inst.points = {{3, 3}, {3, 3}};
    rep = compute_density_sep(inst, {Direction::Left, Direction::Right});
    CHECK(rep.density == 2);
    CHECK(rep.boundary_density == 1);

    CHECK_THROWS_AS(compute_density_sep(inst, {Direction::Up}), ValidationError);
}

TEST_CASE("sep density matches the brute-force count") {
    Rng rng(99);
    for (int t = 0; t < 150; ++t) {
        const auto inst = random_sep(1 + t % 8, 1700 + t, t % 3 == 0);
        const auto a = random_assignment(inst.size(), rng);
        const auto rep = compute_density_sep(inst, a);
        CHECK(rep.density == testsupport::brute_density_sep(inst, a));
        CHECK(rep.boundary_density == testsupport::brute_boundary_sep(inst, a));
        CHECK(rep.boundary_density <= rep.density);
    }
}

TEST_CASE("check_disjoint uses closed-set semantics") {
    RepInstance inst;
    inst.boundary = {10, 10};
    inst.rects = {{0, 0, 2, 2}, {1, 1, 3, 3}};
    CHECK_FALSE(check_disjoint(inst));
    inst.rects = {{0, 0, 2, 2}, {2, 0, 4, 2}};  // shared edge
    CHECK_FALSE(check_disjoint(inst));
    inst.rects = {{0, 0, 2, 2}, {2, 2, 4, 4}};  // shared corner
    CHECK_FALSE(check_disjoint(inst));
    inst.rects = {{0, 0, 2, 2}, {3, 0, 5, 2}};
    CHECK(check_disjoint(inst));

    // Sweep result equals the quadratic pairwise check.
    for (int t = 0; t < 120; ++t) {
        const auto r = random_rep(2 + t % 12, 2300 + t, false);
        bool pairwise = true;
        for (std::size_t i = 0; i < r.size() && pairwise; ++i)
            for (std::size_t j = i + 1; j < r.size(); ++j)
                if (r.rects[i].intersects_closed(r.rects[j])) {
                    pairwise = false;
                    break;
                }
        CHECK(check_disjoint(r) == pairwise);
    }
    for (int t = 0; t < 40; ++t)
        CHECK(check_disjoint(random_rep(6 + t % 20, 3100 + t, true)));

    SepInstance sep;
    sep.boundary = {4, 4};
    sep.points = {{1, 1}, {2, 2}};
    CHECK(check_disjoint(sep));
    sep.points = {{1, 1}, {2, 2}, {1, 1}};
    CHECK_FALSE(check_disjoint(sep));
}

TEST_CASE("unit-square embedding preserves both densities") {
    SepInstance inst;
    inst.boundary = {4, 4};
    inst.points = {{1, 2}, {3, 3}};
    const auto rep = sep_to_rep(inst);
    CHECK(rep.boundary.width == 10);
    CHECK(rep.boundary.height == 10);
    CHECK(rep.rects[0] == Rect{2, 4, 3, 5});
    CHECK(rep.rects[1] == Rect{6, 6, 7, 7});
    CHECK(rep.disjoint);

    Rng rng(55);
    for (int t = 0; t < 120; ++t) {
        const auto sep = random_sep(1 + t % 9, 4000 + t, t % 3 != 0);
        const auto a = random_assignment(sep.size(), rng);
        const auto ds = compute_density_sep(sep, a);
        const auto dr = compute_density_rep(sep_to_rep(sep), a);
        CHECK(ds.density == dr.density);
        CHECK(ds.boundary_density == dr.boundary_density);
    }
}

TEST_CASE("instance json round trip is byte-stable") {
    const auto dir = std::filesystem::temp_directory_path() / "escape_geo_test";
    std::filesystem::create_directories(dir);

    const Instance rep = random_rep(6, 7, true);
    const auto path = (dir / "rep.json").string();
    save_instance(rep, path);
    const Instance back = load_instance(path);
    CHECK(std::get<RepInstance>(back).rects == std::get<RepInstance>(rep).rects);
    CHECK(std::get<RepInstance>(back).boundary == std::get<RepInstance>(rep).boundary);
    CHECK(std::get<RepInstance>(back).disjoint == std::get<RepInstance>(rep).disjoint);
    CHECK(instance_to_json(back).dump(2) == instance_to_json(rep).dump(2));

    SepInstance sep;
    sep.boundary = {5, 4};
    sep.points = {{1, 1}, {1, 1}, {3, 2}};  // repeated pairs encode multiplicity
    const auto spath = (dir / "sep.json").string();
    save_instance(sep, spath);
    const auto sback = std::get<SepInstance>(load_instance(spath));
    CHECK(sback.points == sep.points);

    Solution sol;
    sol.directions = {Direction::Left, Direction::Up, Direction::Down};
    sol.density = 2;
    sol.boundary_density = 1;
    const auto solpath = (dir / "sol.json").string();
    save_solution(sol, solpath);
    const auto sol2 = load_solution(solpath);
    CHECK(sol2.directions == sol.directions);
    CHECK(sol2.density == sol.density);
    CHECK(sol2.boundary_density == sol.boundary_density);

    std::filesystem::remove_all(dir);
}

TEST_CASE("loaders reject malformed documents") {
    CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"type":"other"})")), ParseError);
    CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"type":"rep"})")), ParseError);
    CHECK_THROWS_AS(
        instance_from_json(Json::parse(
            R"({"type":"rep","boundary":{"width":5,"height":5},"rectangles":[{"x1":3,"y1":0,"x2":2,"y2":1}]})")),
        ValidationError);
    CHECK_THROWS_AS(
        instance_from_json(Json::parse(
            R"({"type":"sep","boundary":{"width":5,"height":5},"points":[[1]]})")),
        ParseError);
    CHECK_THROWS_AS(solution_from_json(Json::parse(R"({"directions":["sideways"]})")), ParseError);
    CHECK_THROWS_AS(load_instance("/nonexistent/escape-instance.json"), ParseError);

    // Declared-disjoint instances are re-checked on load.
    CHECK_THROWS_AS(
        instance_from_json(Json::parse(
            R"({"type":"rep","boundary":{"width":5,"height":5},"disjoint":true,)"
            R"("rectangles":[{"x1":0,"y1":0,"x2":2,"y2":2},{"x1":1,"y1":1,"x2":3,"y2":3}]})")),
        ValidationError);
}
