#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "escape/generate.hpp"
#include "escape/io.hpp"
#include "escape/lp.hpp"
#include "escape/matching.hpp"
#include "escape/mpc.hpp"
#include "escape/oracle.hpp"
#include "escape/peeling.hpp"
#include "escape/render.hpp"

namespace {

using namespace escape;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write " + path);
    out << content;
    if (!out)
        throw ValidationError("failed writing " + path);
}

struct SolveOpts {
    std::string algo;
    std::string in;
    std::string out;
    std::string frac;
    std::uint64_t seed = 0;
    bool strict = false;
    std::int64_t machines = 0;
    std::int64_t memory = 0;
};

MpcConfig config_for(std::size_t n, std::int64_t machines, std::int64_t memory) {
    MpcConfig cfg = MpcConfig::defaults_for(n);
    if (machines > 0)
        cfg.machines = machines;
    if (memory > 0)
        cfg.memory = memory;
    return cfg;
}

Solution solve_one(const Instance& inst, const SolveOpts& o, double* elapsed_ms) {
    const auto t0 = std::chrono::steady_clock::now();
    Solution sol;
    if (o.algo == "peel") {
        if (const auto* rep = std::get_if<RepInstance>(&inst)) {
            const PeelingResult pr = peel(*rep);
            if (o.strict) {
                const auto dens = per_level_density(*rep, pr);
                for (std::size_t l = 0; l < dens.size(); ++l)
                    if (dens[l] > 2)
                        throw BoundViolation("level " + std::to_string(l + 1) + " density " +
                                             std::to_string(dens[l]) + " exceeds 2");
            }
            const DensityReport r = compute_density_rep(*rep, pr.assignment);
            if (r.density > 2 * pr.rho)
                throw BoundViolation("peeling density " + std::to_string(r.density) +
                                     " exceeds 2*rho = " + std::to_string(2 * pr.rho));
            sol = {pr.assignment, r.density, r.boundary_density};
        } else {
            const auto& sep = std::get<SepInstance>(inst);
            const RepInstance conv = sep_to_rep(sep);
            const PeelingResult pr = peel(conv);
            const DensityReport r = compute_density_sep(sep, pr.assignment);
            sol = {pr.assignment, r.density, r.boundary_density};
        }
    } else if (o.algo == "match") {
        const auto* sep = std::get_if<SepInstance>(&inst);
        if (!sep)
            throw ValidationError("match runs on point instances");
        const MatchingResult mr = solve_sep(*sep);
        const DensityReport r = compute_density_sep(*sep, mr.assignment);
        sol = {mr.assignment, r.density, r.boundary_density};
    } else if (o.algo == "mpc") {
        const auto* sep = std::get_if<SepInstance>(&inst);
        if (!sep)
            throw ValidationError("mpc runs on point instances");
        const MpcConfig cfg = config_for(sep->points.size(), o.machines, o.memory);
        const auto [asg, trace] = run_sep_mpc(*sep, cfg);
        const DensityReport r = compute_density_sep(*sep, asg);
        sol = {asg, r.density, r.boundary_density};
    } else if (o.algo == "round-det" || o.algo == "round-rand") {
        const auto* rep = std::get_if<RepInstance>(&inst);
        if (!rep)
            throw ValidationError(o.algo + " runs on rectangle instances");
        if (o.frac.empty())
            throw ValidationError(o.algo + " requires --frac with a fractional solution");
        const FractionalSolution f = import_fractional(read_text(o.frac), *rep);
        const auto [asg, r] = o.algo == "round-det" ? deterministic_round(f, *rep)
                                                    : randomized_round(f, *rep, o.seed);
        sol = {asg, r.density, r.boundary_density};
    } else {
        throw ValidationError("unknown algorithm '" + o.algo + "'");
    }
    if (elapsed_ms) {
        const auto t1 = std::chrono::steady_clock::now();
        *elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    return sol;
}

Json trace_to_json(const MpcTrace& trace, const MpcConfig& cfg) {
    Json j;
    j["machines"] = cfg.machines;
    j["memory"] = cfg.memory;
    j["input_size"] = trace.input_size;
    j["iterations"] = trace.iterations;
    j["total_communication"] = trace.total_communication;
    j["max_machine_memory"] = trace.max_machine_memory;
    j["replication_factor"] = trace.replication_factor;
    j["rounds"] = Json::array();
    for (const MpcRound& r : trace.rounds) {
        Json jr;
        jr["round"] = r.round;
        jr["records_shuffled"] = r.records_shuffled;
        jr["max_machine_memory"] = r.max_machine_memory;
        j["rounds"].push_back(jr);
    }
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"rectangle and point escape toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance");
    GenSpec spec;
    std::string kind = "rep", family = "random", gen_out;
    gen->add_option("--kind", kind, "instance kind")->check(CLI::IsMember({"rep", "sep"}));
    gen->add_option("-n,--count", spec.n, "number of rectangles/points")->required();
    gen->add_option("--seed", spec.seed, "rng seed");
    gen->add_flag("--disjoint,!--general", spec.disjoint, "require pairwise disjointness");
    gen->add_option("--width", spec.width, "boundary width (0 = auto)");
    gen->add_option("--height", spec.height, "boundary height (0 = auto)");
    gen->add_option("--family", family, "random|rings|staircase|rows");
    gen->add_option("-o,--out", gen_out, "output instance file")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "run an algorithm on an instance");
    SolveOpts so;
    solve->add_option("--algo", so.algo, "peel|match|mpc|round-det|round-rand")->required();
    solve->add_option("--in", so.in, "instance file")->required();
    solve->add_option("-o,--out", so.out, "output solution file")->required();
    solve->add_option("--frac", so.frac, "fractional solution file (round-*)");
    solve->add_option("--seed", so.seed, "rng seed (round-rand)");
    solve->add_option("--machines", so.machines, "mpc machine count override");
    solve->add_option("--memory", so.memory, "mpc per-machine memory override");
    solve->add_flag("--strict", so.strict, "hard-fail monitored per-level bounds");

    // verify
    auto* verify = app.add_subcommand("verify", "recompute and check a solution");
    std::string v_in, v_sol;
    verify->add_option("--in", v_in, "instance file")->required();
    verify->add_option("--sol", v_sol, "solution file")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact optimum (small instances)");
    std::string or_in, or_out;
    oracle->add_option("--in", or_in, "instance file")->required();
    oracle->add_option("-o,--out", or_out, "optional solution file");

    // compare
    auto* compare = app.add_subcommand("compare", "run algorithms side by side");
    std::string c_in, c_frac;
    std::vector<std::string> c_algos;
    bool c_oracle = false;
    std::uint64_t c_seed = 0;
    compare->add_option("--in", c_in, "instance file")->required();
    compare->add_option("--algos", c_algos, "algorithms to run")
        ->required()
        ->delimiter(',');
    compare->add_flag("--oracle", c_oracle, "include the exact optimum");
    compare->add_option("--frac", c_frac, "fractional solution file (round-*)");
    compare->add_option("--seed", c_seed, "rng seed");

    // mpc
    auto* mpc = app.add_subcommand("mpc", "simulate the cluster algorithm with a trace");
    std::string m_in, m_trace, m_out;
    std::int64_t m_machines = 0, m_memory = 0, m_cap = 0;
    bool m_strict = false;
    mpc->add_option("--in", m_in, "instance file (points)")->required();
    mpc->add_option("--machines", m_machines, "machine count (0 = default)");
    mpc->add_option("--memory", m_memory, "per-machine memory (0 = default)");
    mpc->add_option("--iteration-cap", m_cap, "iteration cap (0 = default)");
    mpc->add_option("--trace", m_trace, "trace JSON output file");
    mpc->add_option("-o,--out", m_out, "optional solution file");
    mpc->add_flag("--strict", m_strict, "fail on constraint violations");

    // lp-export
    auto* lpx = app.add_subcommand("lp-export", "emit the linear program for an instance");
    std::string l_in, l_out = "-";
    lpx->add_option("--in", l_in, "instance file (rectangles)")->required();
    lpx->add_option("-o,--out", l_out, "output file (- for stdout)");

    // render
    auto* render = app.add_subcommand("render", "draw an instance as SVG");
    std::string r_in, r_sol, r_out;
    bool r_levels = false;
    render->add_option("--in", r_in, "instance file")->required();
    auto* opt_sol = render->add_option("--sol", r_sol, "solution file (draw escape paths)");
    auto* opt_lvl = render->add_flag("--levels", r_levels, "color by peeling level");
    opt_sol->excludes(opt_lvl);
    opt_lvl->excludes(opt_sol);
    render->add_option("-o,--out", r_out, "output SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (gen->parsed()) {
        spec.family = family_from_string(family);
        spec.sep = kind == "sep";
        const Instance inst = generate(spec);
        save_instance(inst, gen_out);
        std::cout << "generated " << size_of(inst) << " " << (spec.sep ? "points" : "rectangles")
                  << " in " << boundary_of(inst).width << "x" << boundary_of(inst).height << " -> "
                  << gen_out << "\n";
        return 0;
    }

    if (solve->parsed()) {
        const Instance inst = load_instance(so.in);
        double ms = 0;
        const Solution sol = solve_one(inst, so, &ms);
        save_solution(sol, so.out);
        std::cout << "algo " << so.algo << " density " << sol.density << " boundary "
                  << sol.boundary_density << " -> " << so.out << "\n";
        return 0;
    }

    if (verify->parsed()) {
        const Instance inst = load_instance(v_in);
        const Solution sol = load_solution(v_sol);
        if (sol.directions.size() != size_of(inst))
            throw ValidationError("solution has " + std::to_string(sol.directions.size()) +
                                  " directions for " + std::to_string(size_of(inst)) + " items");
        const DensityReport r =
            std::holds_alternative<RepInstance>(inst)
                ? compute_density_rep(std::get<RepInstance>(inst), sol.directions)
                : compute_density_sep(std::get<SepInstance>(inst), sol.directions);
        bool ok = true;
        if (r.density != sol.density) {
            std::cout << "density mismatch: file says " << sol.density << ", recomputed "
                      << r.density << "\n";
            ok = false;
        }
        if (r.boundary_density != sol.boundary_density) {
            std::cout << "boundary density mismatch: file says " << sol.boundary_density
                      << ", recomputed " << r.boundary_density << "\n";
            ok = false;
        }
        if (!ok)
            throw ValidationError("solution file disagrees with recomputation");
        std::cout << "ok density " << r.density << " boundary " << r.boundary_density << "\n";
        return 0;
    }

    if (oracle->parsed()) {
        const Instance inst = load_instance(or_in);
        OracleResult res;
        DensityReport r;
        if (const auto* rep = std::get_if<RepInstance>(&inst)) {
            res = solve_exact_rep(*rep);
            r = compute_density_rep(*rep, res.opt_assignment);
            std::cout << "optimal density " << res.opt_density << "\n";
        } else {
            const auto& sep = std::get<SepInstance>(inst);
            res = solve_exact_sep(sep);
            r = compute_density_sep(sep, res.opt_assignment);
            std::cout << "optimal density " << res.opt_density << "\n";
            std::cout << "optimal boundary density " << res.opt_boundary_density << "\n";
        }
        if (!or_out.empty())
            save_solution({res.opt_assignment, r.density, r.boundary_density}, or_out);
        return 0;
    }

    if (compare->parsed()) {
        const Instance inst = load_instance(c_in);
        std::int64_t opt = -1;
        if (c_oracle) {
            if (const auto* rep = std::get_if<RepInstance>(&inst))
                opt = solve_exact_rep(*rep).opt_density;
            else
                opt = solve_exact_sep(std::get<SepInstance>(inst)).opt_density;
        }
        std::cout << "algo density boundary ms";
        if (opt >= 0)
            std::cout << " ratio";
        std::cout << "\n";
        for (const std::string& algo : c_algos) {
            SolveOpts o;
            o.algo = algo;
            o.frac = c_frac;
            o.seed = c_seed;
            double ms = 0;
            const Solution sol = solve_one(inst, o, &ms);
            std::cout << algo << " " << sol.density << " " << sol.boundary_density << " " << ms;
            if (opt > 0)
                std::cout << " " << static_cast<double>(sol.density) / static_cast<double>(opt);
            else if (opt == 0)
                std::cout << " " << (sol.density == 0 ? 1.0 : 0.0);
            std::cout << "\n";
        }
        return 0;
    }

    if (mpc->parsed()) {
        const Instance inst = load_instance(m_in);
        const auto* sep = std::get_if<SepInstance>(&inst);
        if (!sep)
            throw ValidationError("mpc runs on point instances");
        const MpcConfig cfg = config_for(sep->points.size(), m_machines, m_memory);
        const auto [asg, trace] = run_sep_mpc(*sep, cfg, m_cap);
        const DensityReport r = compute_density_sep(*sep, asg);
        const MpcCheckReport report = check_mpc_constraints(trace, cfg, sep->points.size());
        std::cout << "machines " << cfg.machines << " memory " << cfg.memory << "\n"
                  << "iterations " << trace.iterations << " rounds " << trace.rounds.size() << "\n"
                  << "density " << r.density << " boundary " << r.boundary_density << "\n"
                  << "total_communication " << trace.total_communication << "\n"
                  << "max_machine_memory " << trace.max_machine_memory << "\n"
                  << "replication_factor " << trace.replication_factor << "\n";
        for (const MpcViolation& v : report.violations)
            std::cout << "violation (round " << v.round << "): " << v.what << "\n";
        if (!m_trace.empty())
            save_json(trace_to_json(trace, cfg), m_trace);
        if (!m_out.empty())
            save_solution({asg, r.density, r.boundary_density}, m_out);
        if (m_strict && !report.ok())
            throw BoundViolation("mpc constraint violations: " +
                                 std::to_string(report.violations.size()));
        return 0;
    }

    if (lpx->parsed()) {
        const Instance inst = load_instance(l_in);
        const auto* rep = std::get_if<RepInstance>(&inst);
        if (!rep)
            throw ValidationError("lp-export runs on rectangle instances");
        write_text(l_out, export_lp(*rep));
        return 0;
    }

    if (render->parsed()) {
        const Instance inst = load_instance(r_in);
        EscapeAssignment asg;
        const EscapeAssignment* asg_ptr = nullptr;
        std::vector<std::vector<std::uint32_t>> levels;
        const std::vector<std::vector<std::uint32_t>>* levels_ptr = nullptr;
        if (!r_sol.empty()) {
            const Solution sol = load_solution(r_sol);
            if (sol.directions.size() != size_of(inst))
                throw ValidationError("solution does not match the instance");
            asg = sol.directions;
            asg_ptr = &asg;
        }
        if (r_levels) {
            const RepInstance rep = std::holds_alternative<RepInstance>(inst)
                                        ? std::get<RepInstance>(inst)
                                        : sep_to_rep(std::get<SepInstance>(inst));
            PeelingResult pr = peel(rep);
            levels = std::move(pr.levels);
            levels_ptr = &levels;
            asg = std::move(pr.assignment);
            asg_ptr = &asg;
        }
        write_text(r_out, render_svg(inst, asg_ptr, levels_ptr));
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const BoundViolation& e) {
        std::cerr << "bound violation: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SimulationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
