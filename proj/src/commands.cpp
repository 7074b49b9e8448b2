#include "esopt/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "esopt/errors.hpp"
#include "esopt/kernel.hpp"
#include "esopt/reference.hpp"

namespace esopt {

using nlohmann::json;

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed for " + path.string());
}

namespace {

json step_json(const StepParams& sp) {
    return {{"u", sp.u},   {"d", sp.d},   {"h", sp.h},   {"ell", sp.ell}, {"p1", sp.p1},
            {"p2", sp.p2}, {"p3", sp.p3}, {"p4", sp.p4}, {"q", sp.q},     {"dt", sp.dt}};
}

Solution solve_config(const RunConfig& cfg, const StepParams& sp, ExerciseMode mode, bool keep_values, int threads) {
    const Grid grid(cfg.n_steps, cfg.market.y0, sp.h);
    return solve(grid, sp, RiskAversion(cfg.gamma), cfg.option, mode, {keep_values, threads});
}

}  // namespace

PriceReport run_price(const RunConfig& cfg) {
    PriceReport report;
    report.step = calibrate(cfg.market, cfg.n_steps);
    const Solution sol = solve_config(cfg, report.step, cfg.mode, false, cfg.mc.threads);
    report.employee = employee_value(sol.values, cfg.option);
    report.merton_hedge = merton_hedge(report.step, RiskAversion(cfg.gamma), cfg.market.s0);
    report.bs_discounted = reference::bs_discounted(cfg.market, cfg.option.strike);
    report.bs_standard = reference::bs_standard(cfg.market, cfg.option.strike);
    report.surface_inconsistency = surface_inconsistency(sol.policy);
    return report;
}

json to_json(const PriceReport& r) {
    return {{"package_value", r.employee.package},
            {"per_unit_value", r.employee.per_unit},
            {"merton_hedge", r.merton_hedge},
            {"bs_discounted", r.bs_discounted},
            {"bs_standard", r.bs_standard},
            {"surface_inconsistency", r.surface_inconsistency},
            {"step", step_json(r.step)}};
}

SurfaceResult run_surface(const RunConfig& cfg) {
    const StepParams sp = calibrate(cfg.market, cfg.n_steps);
    const Grid grid(cfg.n_steps, cfg.market.y0, sp.h);
    const Solution sol = solve(grid, sp, RiskAversion(cfg.gamma), cfg.option, cfg.mode, {false, cfg.mc.threads});
    return {grid.values(), critical_surface(sol.policy, cfg.option)};
}

std::string surface_csv(const SurfaceResult& result) {
    std::string out = "y";
    const std::size_t columns = result.surface.empty() ? 0 : result.surface.front().size();
    for (std::size_t n = 0; n < columns; ++n) out += ",n" + std::to_string(n);
    out += '\n';
    for (std::size_t row = 0; row < result.surface.size(); ++row) {
        out += format_number(result.y_values[row]);
        for (int cell : result.surface[row]) out += ',' + std::to_string(cell);
        out += '\n';
    }
    return out;
}

std::vector<ThresholdRow> run_threshold(const RunConfig& cfg) {
    const ThresholdSpec& ts = cfg.threshold;
    ContinuousParams one = cfg.market;
    one.t_max = ts.dt;

    one.rho = 0.0;
    const StepParams independent = calibrate(one, 1);
    one.rho = ts.rho_mid;
    const StepParams mid = calibrate(one, 1);
    const double m1 = independent.p1 + independent.p2;
    const StepParams complete = StepParams::from_moves(independent.u, independent.d, independent.h, independent.ell,
                                                       m1, 0.0, 0.0, 1.0 - m1, ts.dt);

    const RiskAversion gamma(ts.gamma);
    auto attempt = [&](int a, const StepParams& sp) -> std::optional<double> {
        try {
            return exercise_threshold(a, ts.strike, sp, gamma);
        } catch (const NoThreshold&) {
            return std::nullopt;
        }
    };

    std::vector<ThresholdRow> rows;
    for (int a = 1; a <= ts.a_max; ++a) rows.push_back({a, attempt(a, complete), attempt(a, mid), attempt(a, independent)});
    return rows;
}

std::string threshold_csv(const std::vector<ThresholdRow>& rows) {
    auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("NA"); };
    std::string out = "a,complete,intermediate,uncorrelated\n";
    for (const auto& r : rows)
        out += std::to_string(r.a_count) + ',' + cell(r.complete) + ',' + cell(r.intermediate) + ',' +
               cell(r.uncorrelated) + '\n';
    return out;
}

FirmCostReport run_firm_cost(const RunConfig& cfg) {
    const StepParams sp = calibrate(cfg.market, cfg.n_steps);
    const Grid grid(cfg.n_steps, cfg.market.y0, sp.h);
    const Solution sol = solve(grid, sp, RiskAversion(cfg.gamma), cfg.option, cfg.mode, {false, 1});

    FirmCostReport report;
    report.a_total = cfg.option.a_total;
    report.employee = employee_value(sol.values, cfg.option);
    report.cost = simulate_cost(sol.policy, grid, cfg.market, cfg.option, cfg.mc);
    report.bs_discounted = reference::bs_discounted(cfg.market, cfg.option.strike);
    report.bs_standard = reference::bs_standard(cfg.market, cfg.option.strike);
    report.surface_inconsistency = surface_inconsistency(sol.policy);
    return report;
}

json to_json(const FirmCostReport& r) {
    return {{"employee_package_value", r.employee.package},
            {"employee_per_unit_value", r.employee.per_unit},
            {"firm_cost_mean", r.cost.mean},
            {"firm_cost_std_error", r.cost.std_error},
            {"firm_cost_per_unit", r.cost.mean / r.a_total},
            {"n_paths", r.cost.n_paths},
            {"bs_discounted", r.bs_discounted},
            {"bs_standard", r.bs_standard},
            {"surface_inconsistency", r.surface_inconsistency}};
}

namespace {

SweepPoint evaluate_point(const RunConfig& base, double x) {
    RunConfig cfg = base;
    switch (base.sweep->axis) {
        case SweepAxis::Maturity: cfg.market.t_max = x; break;
        case SweepAxis::Gamma: cfg.gamma = x; break;
        case SweepAxis::Volatility:
            cfg.market.sigma = x;
            cfg.market.beta = x;
            break;
        case SweepAxis::Rho: cfg.market.rho = x; break;
        case SweepAxis::PackageSize: cfg.option.a_total = static_cast<int>(x); break;
    }

    SweepPoint p;
    p.x = x;
    try {
        const StepParams sp = calibrate(cfg.market, cfg.n_steps);
        const Solution partial = solve_config(cfg, sp, ExerciseMode::Partial, false, 1);
        const Solution constrained = solve_config(cfg, sp, ExerciseMode::Constrained, false, 1);
        p.partial = employee_value(partial.values, cfg.option).per_unit;
        p.constrained = employee_value(constrained.values, cfg.option).per_unit;
        p.bs_discounted = reference::bs_discounted(cfg.market, cfg.option.strike);
        p.bs_standard = reference::bs_standard(cfg.market, cfg.option.strike);
        p.feasible = true;
    } catch (const InfeasibleProbabilities& e) {
        p.note = e.what();
    } catch (const std::invalid_argument& e) {
        p.note = e.what();
    }
    return p;
}

}  // namespace

std::vector<SweepPoint> run_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("sweep", "missing section");
    const auto& xs = cfg.sweep->values;
    std::vector<SweepPoint> points(xs.size());
    const int workers = std::clamp(cfg.mc.threads, 1, static_cast<int>(xs.size()));
    if (workers == 1) {
        for (std::size_t j = 0; j < xs.size(); ++j) points[j] = evaluate_point(cfg, xs[j]);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t j = static_cast<std::size_t>(w); j < xs.size(); j += static_cast<std::size_t>(workers))
                    points[j] = evaluate_point(cfg, xs[j]);
            });
        }
    }
    return points;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = "index,x,per_unit_partial,per_unit_constrained,bs_discounted,bs_standard,status\n";
    for (std::size_t j = 0; j < points.size(); ++j) {
        const auto& p = points[j];
        out += std::to_string(j) + ',' + format_number(p.x) + ',';
        if (p.feasible) {
            out += format_number(p.partial) + ',' + format_number(p.constrained) + ',' + format_number(p.bs_discounted) +
                   ',' + format_number(p.bs_standard) + ",ok\n";
        } else {
            out += ",,,,infeasible\n";
        }
    }
    return out;
}

std::optional<double> rho_asymmetry(const std::vector<SweepPoint>& points) {
    std::optional<double> worst;
    for (const auto& p : points) {
        if (!p.feasible || p.x <= 0.0) continue;
        for (const auto& m : points) {
            if (!m.feasible || std::abs(m.x + p.x) > 1e-12) continue;
            const double rel = std::abs(p.partial - m.partial) / p.partial;
            worst = std::max(worst.value_or(0.0), rel);
        }
    }
    return worst;
}

}  // namespace esopt
