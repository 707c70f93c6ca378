#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "escape/generate.hpp"
#include "escape/geometry.hpp"
#include "escape/mpc.hpp"
#include "escape/peeling.hpp"
#include "escape/rng.hpp"

using namespace escape;

namespace {

SepInstance random_sep(std::size_t n, std::uint64_t seed, bool disjoint = true) {
    GenSpec spec;
    spec.sep = true;
    spec.n = n;
    spec.seed = seed;
    spec.disjoint = disjoint;
    return std::get<SepInstance>(generate(spec));
}

SepInstance filled_plus() {
    SepInstance inst;
    inst.boundary = {4, 4};
    inst.points = {{2, 2}, {1, 2}, {3, 2}, {2, 1}, {2, 3}};
    return inst;
}

}  // namespace

TEST_CASE("config defaults and validation") {
    const auto cfg = MpcConfig::defaults_for(10);
    CHECK(cfg.machines == 4);
    CHECK(cfg.memory == 32);
    CHECK_NOTHROW(cfg.validate(10));
    CHECK(MpcConfig::defaults_for(0).machines == 1);
    CHECK(MpcConfig::defaults_for(100).machines == 10);
    CHECK(MpcConfig::defaults_for(100).memory == 56);

    MpcConfig bad;
    bad.machines = 0;
    CHECK_THROWS_AS(bad.validate(1), ValidationError);
    bad.machines = 4;
    bad.memory = 4;
    CHECK_THROWS_AS(bad.validate(1), ValidationError);
    bad.memory = 8;
    CHECK_THROWS_AS(bad.validate(100), ValidationError);  // 4*8 < 100
    CHECK_NOTHROW(bad.validate(32));
}

TEST_CASE("sequential branch order on pinned instances") {
    SepInstance one;
    one.boundary = {8, 8};
    one.points = {{4, 4}};
    auto seq = run_sep_sequential(one);
    CHECK(seq.assignment == EscapeAssignment{Direction::Left});
    CHECK(seq.iterations == 1);

    // Three collinear points: the ends are row extrema, the middle one is
    // alone in its column and leaves as a column minimum the same round.
    GenSpec spec;
    spec.sep = true;
    spec.n = 3;
    spec.family = GenFamily::Rows;
    const auto rows = std::get<SepInstance>(generate(spec));
    seq = run_sep_sequential(rows);
    CHECK(seq.iterations == 1);
    CHECK(seq.assignment ==
          EscapeAssignment{Direction::Left, Direction::Down, Direction::Right});

    // A filled plus keeps its center for a second round.
    const auto plus = filled_plus();
    seq = run_sep_sequential(plus);
    CHECK(seq.iterations == 2);
    CHECK(seq.assignment == EscapeAssignment{Direction::Left, Direction::Left, Direction::Right,
                                             Direction::Left, Direction::Left});
    REQUIRE(seq.per_iteration.size() == 2);
    CHECK(seq.per_iteration[0].size() == 4);
    CHECK(seq.per_iteration[1].size() == 1);
    CHECK(seq.per_iteration[1][0].first == 0);  // the center point
    CHECK(seq.queue.t.empty());
    CHECK(seq.queue.q.size() == plus.size());

    CHECK_THROWS_AS(run_sep_sequential(plus, 1), SimulationError);
}

TEST_CASE("non-disjoint input is rejected") {
    SepInstance dup;
    dup.boundary = {6, 6};
    dup.points = {{2, 2}, {2, 2}};
    CHECK_THROWS_AS(run_sep_sequential(dup), ValidationError);
    CHECK_THROWS_AS(run_sep_mpc(dup, MpcConfig::defaults_for(2)), ValidationError);
}

TEST_CASE("simulated cluster reproduces the sequential run") {
    for (int t = 0; t < 60; ++t) {
        const auto inst = random_sep(1 + static_cast<std::size_t>(t) * 4, 20000 + t);
        const auto seq = run_sep_sequential(inst);
        const auto cfg = MpcConfig::defaults_for(inst.size());
        const auto [asg, trace] = run_sep_mpc(inst, cfg);

        CHECK(asg == seq.assignment);
        CHECK(trace.iterations == seq.iterations);
        // Same point-removal rule as unit-square peeling, round for round.
        CHECK(trace.iterations == peel(sep_to_rep(inst)).rho);

        CHECK(trace.input_size == static_cast<std::int64_t>(inst.size()));
        std::int64_t comm = 0, mem = 0;
        std::int64_t expect_round = 1;
        for (const auto& r : trace.rounds) {
            CHECK(r.round == expect_round++);
            comm += r.records_shuffled;
            mem = std::max(mem, r.max_machine_memory);
        }
        CHECK(trace.total_communication == comm);
        CHECK(trace.max_machine_memory == mem);
        CHECK(trace.max_machine_memory <= cfg.memory);
        CHECK(trace.replication_factor <= 5.0);

        const auto report = check_mpc_constraints(trace, cfg, inst.size());
        for (const auto& v : report.violations)
            MESSAGE(v.what);
        CHECK(report.ok());
    }
}

TEST_CASE("simulation faults are reported") {
    // Cluster too small for the four directional copies.
    const auto inst = random_sep(20, 11);
    MpcConfig tiny;
    tiny.machines = 3;
    tiny.memory = 28;
    CHECK_NOTHROW(tiny.validate(inst.size()));
    CHECK_THROWS_AS(run_sep_mpc(inst, tiny), SimulationError);

    // Iteration cap.
    const auto plus = filled_plus();
    CHECK_THROWS_AS(run_sep_mpc(plus, MpcConfig::defaults_for(plus.size()), 1), SimulationError);
    CHECK_NOTHROW(run_sep_mpc(plus, MpcConfig::defaults_for(plus.size()), 2));
}

TEST_CASE("tree aggregation rounds follow the memory depth") {
    MpcConfig cfg;
    cfg.machines = 16;
    cfg.memory = 8;

    // One full machine: a single local reduce settles every key.
    std::vector<AggRecord> recs;
    for (int i = 0; i < 8; ++i)
        recs.push_back({7, i + 1});
    auto res = semigroup_aggregate(
        recs, [](std::int64_t a, std::int64_t b) { return std::min(a, b); }, cfg);
    CHECK(res.trace.size() == 1);
    REQUIRE(res.aggregates.size() == 1);
    CHECK(res.aggregates[0].key == 7);
    CHECK(res.aggregates[0].value == 1);

    // m^2 records of one key: reduce, merge partials, reduce again.
    recs.clear();
    for (int i = 0; i < 64; ++i)
        recs.push_back({7, 1});
    res = semigroup_aggregate(recs, [](std::int64_t a, std::int64_t b) { return a + b; }, cfg);
    CHECK(res.trace.size() == 2);
    CHECK(res.trace[1].records_shuffled == 8);
    REQUIRE(res.aggregates.size() == 1);
    CHECK(res.aggregates[0].value == 64);

    // Twice that needs a third level.
    recs.clear();
    for (int i = 0; i < 128; ++i)
        recs.push_back({7, 1});
    res = semigroup_aggregate(recs, [](std::int64_t a, std::int64_t b) { return a + b; }, cfg);
    CHECK(res.trace.size() == 3);
    CHECK(res.aggregates[0].value == 128);
}

TEST_CASE("tree aggregation equals sequential aggregation on random data") {
    Rng rng(31337);
    for (int t = 0; t < 30; ++t) {
        std::vector<AggRecord> recs;
        const std::size_t n = 1 + rng.below(200);
        for (std::size_t i = 0; i < n; ++i)
            recs.push_back({static_cast<std::int64_t>(rng.below(12)),
                            static_cast<std::int64_t>(rng.below(1000))});
        MpcConfig cfg;
        cfg.machines = static_cast<std::int64_t>(1 + rng.below(6)) * 4;
        cfg.memory = 8 + static_cast<std::int64_t>(rng.below(3)) * 4;
        if (cfg.machines * cfg.memory < static_cast<std::int64_t>(n))
            continue;

        std::map<std::int64_t, std::int64_t> expect;
        for (const auto& r : recs) {
            auto [it, fresh] = expect.emplace(r.key, r.value);
            if (!fresh)
                it->second += r.value;
        }
        const auto res =
            semigroup_aggregate(recs, [](std::int64_t a, std::int64_t b) { return a + b; }, cfg);
        REQUIRE(res.aggregates.size() == expect.size());
        std::size_t i = 0;
        for (const auto& [key, value] : expect) {
            CHECK(res.aggregates[i].key == key);
            CHECK(res.aggregates[i].value == value);
            ++i;
        }
        for (const auto& r : res.trace)
            CHECK(r.max_machine_memory <= cfg.memory);
    }
}

TEST_CASE("constraint audit flags tampered traces") {
    const auto inst = random_sep(30, 5);
    const auto cfg = MpcConfig::defaults_for(inst.size());
    auto [asg, trace] = run_sep_mpc(inst, cfg);
    CHECK(check_mpc_constraints(trace, cfg, inst.size()).ok());

    auto bad = trace;
    bad.rounds[0].max_machine_memory = cfg.memory + 1;
    auto report = check_mpc_constraints(bad, cfg, inst.size());
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].round == bad.rounds[0].round);

    bad = trace;
    bad.rounds[1].records_shuffled = 8 * static_cast<std::int64_t>(inst.size()) + 1;
    CHECK(check_mpc_constraints(bad, cfg, inst.size()).violations.size() == 1);
    CHECK(check_mpc_constraints(bad, cfg, inst.size(), 9).violations.empty());

    bad = trace;
    bad.replication_factor = 5.5;
    CHECK(check_mpc_constraints(bad, cfg, inst.size()).violations.size() == 1);
    CHECK(check_mpc_constraints(bad, cfg, inst.size(), 8, 6.0).violations.empty());
}
