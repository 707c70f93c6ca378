#include "escape/lp.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "escape/rng.hpp"

namespace escape {

namespace {

constexpr char kDirSuffix[4] = {'l', 'r', 'd', 'u'};

std::string var_name(std::size_t i, Direction d) {
    return "r_" + std::to_string(i) + "_" + kDirSuffix[static_cast<int>(d)];
}

std::string nanos_to_string(std::int64_t v) {
    const char* sign = v < 0 ? "-" : "";
    const std::int64_t a = v < 0 ? -v : v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%lld.%09lld", sign,
                  static_cast<long long>(a / kNano), static_cast<long long>(a % kNano));
    return buf;
}

std::int64_t parse_nanos(const std::string& tok) {
    if (tok.empty())
        throw ParseError("empty numeric token");
    if (tok.find_first_of("eE") != std::string::npos) {
        std::size_t pos = 0;
        long double v = 0;
        try {
            v = std::stold(tok, &pos);
        } catch (const std::exception&) {
            throw ParseError("bad numeric token '" + tok + "'");
        }
        if (pos != tok.size())
            throw ParseError("bad numeric token '" + tok + "'");
        return static_cast<std::int64_t>(llroundl(v * kNano));
    }
    std::size_t i = 0;
    bool neg = false;
    if (tok[i] == '+' || tok[i] == '-') {
        neg = tok[i] == '-';
        ++i;
    }
    std::int64_t ip = 0;
    bool any = false;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) {
        if (ip > 4'000'000'000LL)
            throw ParseError("numeric token out of range '" + tok + "'");
        ip = ip * 10 + (tok[i] - '0');
        any = true;
        ++i;
    }
    std::int64_t frac = 0;
    int digits = 0;
    if (i < tok.size() && tok[i] == '.') {
        ++i;
        while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) {
            const int d = tok[i] - '0';
            if (digits < 9)
                frac = frac * 10 + d;
            else if (digits == 9 && d >= 5)
                ++frac;  // round half away from zero at nano precision
            ++digits;
            any = true;
            ++i;
        }
        for (int k = digits; k < 9; ++k)
            frac *= 10;
    }
    if (!any || i != tok.size())
        throw ParseError("bad numeric token '" + tok + "'");
    const std::int64_t nanos = ip * kNano + frac;
    return neg ? -nanos : nanos;
}

std::size_t parse_index(const std::string& tok, std::size_t n) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError("bad rectangle index '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError("bad rectangle index '" + tok + "'");
    if (v >= n)
        throw ParseError("rectangle index " + tok + " out of range for n = " + std::to_string(n));
    return static_cast<std::size_t>(v);
}

struct CellSpan {
    std::size_t x0, x1, y0, y1;  // half-open cell index ranges
};

CellSpan path_cells(const RepInstance& inst, const EscapeGrid& grid, std::size_t i, Direction d) {
    const Rect path = escape_path(inst.rects[i], d, inst.boundary);
    return {grid.x_index(path.x1), grid.x_index(path.x2), grid.y_index(path.y1),
            grid.y_index(path.y2)};
}

}  // namespace

std::string export_lp(const RepInstance& inst) {
    inst.validate();
    const std::size_t n = inst.rects.size();
    std::ostringstream os;
    os << "MINIMIZE\n  obj: k\n";
    if (n == 0) {
        os << "BOUNDS\n  k >= 0\nEND\n";
        return os.str();
    }

    const EscapeGrid grid = build_escape_grid(inst);
    const std::size_t nx = grid.xs.size() - 1;
    const std::size_t ny = grid.ys.size() - 1;
    std::vector<std::vector<std::pair<std::size_t, Direction>>> members(nx * ny);
    for (std::size_t i = 0; i < n; ++i)
        for (Direction d : kDirections) {
            const CellSpan s = path_cells(inst, grid, i, d);
            for (std::size_t ix = s.x0; ix < s.x1; ++ix)
                for (std::size_t iy = s.y0; iy < s.y1; ++iy)
                    members[ix * ny + iy].push_back({i, d});
        }

    os << "SUBJECT TO\n";
    for (std::size_t i = 0; i < n; ++i) {
        os << "  esc_" << i << ":";
        bool first = true;
        for (Direction d : kDirections) {
            os << (first ? " " : " + ") << var_name(i, d);
            first = false;
        }
        os << " >= 1\n";
    }
    for (std::size_t ix = 0; ix < nx; ++ix)
        for (std::size_t iy = 0; iy < ny; ++iy) {
            os << "  cell_" << ix << "_" << iy << ":";
            bool first = true;
            for (const auto& [i, d] : members[ix * ny + iy]) {
                os << (first ? " " : " + ") << var_name(i, d);
                first = false;
            }
            os << " - k <= 0\n";
        }

    os << "BOUNDS\n";
    for (std::size_t i = 0; i < n; ++i)
        for (Direction d : kDirections)
            os << "  0 <= " << var_name(i, d) << " <= 1\n";
    os << "  k >= 0\nEND\n";
    return os.str();
}

FractionalSolution parse_fractional(const std::string& text, std::size_t n) {
    FractionalSolution f;
    f.r_nanos.assign(n, {0, 0, 0, 0});
    std::vector<std::array<bool, 4>> seen(n, {false, false, false, false});
    bool have_objective = false;

    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t)
            toks.push_back(t);
        if (toks.empty())
            continue;
        const std::string where = " (line " + std::to_string(line_no) + ")";
        if (toks[0] == "objective") {
            if (toks.size() != 2)
                throw ParseError("objective line needs exactly one value" + where);
            if (have_objective)
                throw ParseError("duplicate objective line" + where);
            f.k_f_nanos = parse_nanos(toks[1]);
            have_objective = true;
            continue;
        }
        if (toks.size() != 3)
            throw ParseError("expected 'i dir value'" + where);
        const std::size_t i = parse_index(toks[0], n);
        const Direction d = direction_from_string(toks[1]);
        const int di = static_cast<int>(d);
        if (seen[i][static_cast<std::size_t>(di)])
            throw ParseError("duplicate entry for rectangle " + toks[0] + " direction " + toks[1] +
                             where);
        seen[i][static_cast<std::size_t>(di)] = true;
        f.r_nanos[i][static_cast<std::size_t>(di)] = parse_nanos(toks[2]);
    }
    if (!have_objective)
        throw ParseError("missing objective line");
    return f;
}

std::vector<std::int64_t> cell_loads_nanos(const FractionalSolution& f, const RepInstance& inst,
                                           const EscapeGrid& grid) {
    const std::size_t nx = grid.xs.size() - 1;
    const std::size_t ny = grid.ys.size() - 1;
    std::vector<std::int64_t> diff((nx + 1) * (ny + 1), 0);
    auto at = [&](std::size_t ix, std::size_t iy) -> std::int64_t& {
        return diff[ix * (ny + 1) + iy];
    };
    for (std::size_t i = 0; i < f.size(); ++i)
        for (Direction d : kDirections) {
            const std::int64_t w = f.r_nanos[i][static_cast<std::size_t>(static_cast<int>(d))];
            if (w == 0)
                continue;
            const CellSpan s = path_cells(inst, grid, i, d);
            at(s.x0, s.y0) += w;
            at(s.x1, s.y0) -= w;
            at(s.x0, s.y1) -= w;
            at(s.x1, s.y1) += w;
        }
    std::vector<std::int64_t> loads(nx * ny, 0);
    for (std::size_t ix = 0; ix < nx; ++ix)
        for (std::size_t iy = 0; iy < ny; ++iy) {
            std::int64_t v = at(ix, iy);
            if (ix > 0)
                v += loads[(ix - 1) * ny + iy];
            if (iy > 0)
                v += loads[ix * ny + iy - 1];
            if (ix > 0 && iy > 0)
                v -= loads[(ix - 1) * ny + iy - 1];
            loads[ix * ny + iy] = v;
        }
    return loads;
}

void check_feasible(const FractionalSolution& f, const RepInstance& inst) {
    if (f.size() != inst.rects.size())
        throw ValidationError("fractional solution has " + std::to_string(f.size()) +
                              " entries for " + std::to_string(inst.rects.size()) + " rectangles");
    if (f.k_f_nanos < -kFeasSlackNanos)
        throw ValidationError("objective " + nanos_to_string(f.k_f_nanos) + " is negative");
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::int64_t sum = 0;
        for (Direction d : kDirections) {
            const std::int64_t v = f.r_nanos[i][static_cast<std::size_t>(static_cast<int>(d))];
            if (v < -kFeasSlackNanos || v > kNano + kFeasSlackNanos)
                throw ValidationError("r[" + std::to_string(i) + "][" + std::string(to_string(d)) +
                                      "] = " + nanos_to_string(v) + " outside [0,1]");
            sum += v;
        }
        if (sum < kNano - kFeasSlackNanos)
            throw ValidationError("rectangle " + std::to_string(i) + " escape mass " +
                                  nanos_to_string(sum) + " < 1");
    }
    if (inst.rects.empty())
        return;
    const EscapeGrid grid = build_escape_grid(inst);
    const std::size_t ny = grid.ys.size() - 1;
    const std::vector<std::int64_t> loads = cell_loads_nanos(f, inst, grid);
    for (std::size_t idx = 0; idx < loads.size(); ++idx)
        if (loads[idx] > f.k_f_nanos + kFeasSlackNanos)
            throw ValidationError("cell (" + std::to_string(idx / ny) + "," +
                                  std::to_string(idx % ny) + ") fractional load " +
                                  nanos_to_string(loads[idx]) + " exceeds objective " +
                                  nanos_to_string(f.k_f_nanos));
}

FractionalSolution import_fractional(const std::string& text, const RepInstance& inst) {
    FractionalSolution f = parse_fractional(text, inst.rects.size());
    check_feasible(f, inst);
    return f;
}

std::pair<EscapeAssignment, DensityReport> deterministic_round(const FractionalSolution& f,
                                                               const RepInstance& inst) {
    if (f.size() != inst.rects.size())
        throw ValidationError("fractional solution does not match the instance");
    EscapeAssignment asg(f.size(), Direction::Left);
    for (std::size_t i = 0; i < f.size(); ++i) {
        Direction best = Direction::Left;
        std::int64_t best_v = f.r_nanos[i][0];
        for (Direction d : kDirections) {
            const std::int64_t v = f.r_nanos[i][static_cast<std::size_t>(static_cast<int>(d))];
            if (v > best_v) {
                best_v = v;
                best = d;
            }
        }
        asg[i] = best;
    }
    DensityReport rep = compute_density_rep(inst, asg);
    const __int128 lhs = static_cast<__int128>(rep.density) * kNano;
    const __int128 rhs = static_cast<__int128>(4) * f.k_f_nanos + kRoundSlackNanos;
    if (lhs > rhs)
        throw BoundViolation("rounded density " + std::to_string(rep.density) + " exceeds 4*k_f = " +
                             nanos_to_string(4 * f.k_f_nanos));
    return {asg, rep};
}

std::pair<EscapeAssignment, DensityReport> randomized_round(const FractionalSolution& f,
                                                            const RepInstance& inst,
                                                            std::uint64_t seed) {
    if (f.size() != inst.rects.size())
        throw ValidationError("fractional solution does not match the instance");
    EscapeAssignment asg(f.size(), Direction::Left);
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::array<std::int64_t, 4> w = f.r_nanos[i];
        std::int64_t total = 0;
        for (auto& v : w) {
            v = std::max<std::int64_t>(v, 0);
            total += v;
        }
        if (total <= 0)
            throw ValidationError("rectangle " + std::to_string(i) + " has zero escape mass");
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
        std::int64_t u = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
        for (Direction d : kDirections) {
            const std::int64_t v = w[static_cast<std::size_t>(static_cast<int>(d))];
            if (u < v) {
                asg[i] = d;
                break;
            }
            u -= v;
        }
    }
    return {asg, compute_density_rep(inst, asg)};
}

TailEstimate chernoff_tail(const RepInstance& inst, const FractionalSolution& f, double epsilon,
                           std::int64_t trials, std::uint64_t seed) {
    if (!(epsilon > 0.0) || !(epsilon < 3.0))
        throw ValidationError("epsilon must lie in (0,3)");
    if (trials < 1)
        throw ValidationError("trials must be positive");
    const std::size_t n = inst.rects.size();
    const std::int64_t k = (f.k_f_nanos + kNano - 1) / kNano;
    TailEstimate est;
    est.epsilon = epsilon;
    est.trials = trials;
    est.seed = seed;
    est.analytic_bound = 4.0 * static_cast<double>(n) * static_cast<double>(n) *
                         std::exp(-(static_cast<double>(k) / 4.0) * epsilon * epsilon / 3.0);

    const auto eps_nanos = static_cast<std::int64_t>(std::llround(epsilon * kNano));
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed =
            Rng::derive(seed, static_cast<std::uint64_t>(t)).next_u64();
        const auto [asg, rep] = randomized_round(f, inst, trial_seed);
        const __int128 lhs = static_cast<__int128>(rep.density) * kNano * kNano;
        const __int128 rhs = static_cast<__int128>(kNano + eps_nanos) * f.k_f_nanos;
        if (lhs >= rhs)
            ++hits;
    }
    est.empirical_frequency = static_cast<double>(hits) / static_cast<double>(trials);
    return est;
}

std::string tail_report(const TailEstimate& est) {
    std::ostringstream os;
    os.precision(12);
    os << "epsilon " << est.epsilon << "\n"
       << "trials " << est.trials << "\n"
       << "seed " << est.seed << "\n"
       << "empirical_frequency " << est.empirical_frequency << "\n"
       << "analytic_bound " << est.analytic_bound << "\n"
       << "within_bound " << (est.empirical_frequency <= est.analytic_bound ? "true" : "false")
       << "\n";
    return os.str();
}

}  // namespace escape
