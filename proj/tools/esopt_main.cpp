// Batch front end: price | surface | threshold | firm-cost | sweep.
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible calibration,
// 4 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "esopt/commands.hpp"
#include "esopt/config.hpp"
#include "esopt/errors.hpp"

namespace {

using nlohmann::json;

struct Overrides {
    std::string config_path;
    std::string preset;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> mode;
};

json resolve(const Overrides& o) {
    if (o.config_path.empty() && o.preset.empty())
        throw esopt::ConfigError("config", "give --config and/or --preset");
    json doc = o.preset.empty() ? json::object() : esopt::preset(o.preset);
    if (!o.config_path.empty()) doc.merge_patch(esopt::load_config_file(o.config_path));
    if (o.out) doc["output_dir"] = *o.out;
    if (o.seed) doc["mc"]["seed"] = *o.seed;
    if (o.threads) doc["threads"] = *o.threads;
    if (o.mode) doc["mode"] = *o.mode;
    return doc;
}

json summary(const char* command, const esopt::RunConfig& cfg, json result) {
    return {{"command", command}, {"config", cfg.resolved}, {"result", std::move(result)}};
}

void emit(const esopt::RunConfig& cfg, const std::string& name, const json& doc) {
    const std::string text = doc.dump(2) + "\n";
    esopt::write_file(cfg.output_dir, name, text);
    std::cout << text;
}

int run(const std::string& command, const Overrides& o) {
    const esopt::RunConfig cfg = esopt::parse_config(resolve(o));

    if (command == "price") {
        emit(cfg, "price.json", summary("price", cfg, esopt::to_json(esopt::run_price(cfg))));
    } else if (command == "surface") {
        const auto result = esopt::run_surface(cfg);
        esopt::write_file(cfg.output_dir, "surface.csv", esopt::surface_csv(result));
        emit(cfg, "surface.json", summary("surface", cfg, {{"csv", "surface.csv"}, {"rows", result.y_values.size()}}));
    } else if (command == "threshold") {
        const auto rows = esopt::run_threshold(cfg);
        esopt::write_file(cfg.output_dir, "threshold.csv", esopt::threshold_csv(rows));
        emit(cfg, "threshold.json", summary("threshold", cfg, {{"csv", "threshold.csv"}, {"rows", rows.size()}}));
    } else if (command == "firm-cost") {
        emit(cfg, "firm_cost.json", summary("firm-cost", cfg, esopt::to_json(esopt::run_firm_cost(cfg))));
    } else if (command == "sweep") {
        const auto points = esopt::run_sweep(cfg);
        const std::string axis = esopt::to_string(cfg.sweep->axis);
        const std::string csv_name = "sweep_" + axis + ".csv";
        esopt::write_file(cfg.output_dir, csv_name, esopt::sweep_csv(points));
        std::size_t gaps = 0;
        for (const auto& p : points) gaps += p.feasible ? 0 : 1;
        json result = {{"csv", csv_name}, {"axis", axis}, {"points", points.size()}, {"gaps", gaps}};
        if (cfg.sweep->axis == esopt::SweepAxis::Rho) {
            const auto asym = esopt::rho_asymmetry(points);
            result["rho_asymmetry"] = asym ? json(*asym) : json(nullptr);
        }
        emit(cfg, "sweep_" + axis + ".json", summary("sweep", cfg, result));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Indifference valuation of employee option packages with partial exercise"};
    app.require_subcommand(1);

    Overrides o;
    std::string mode;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
    for (const char* name : {"price", "surface", "threshold", "firm-cost", "sweep"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " command");
        sub->add_option("--config", o.config_path, "JSON configuration file (merged over --preset)");
        sub->add_option("--preset", o.preset, "named parameter set: base_5_1, par1, par2");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "Monte Carlo seed");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
        sub->add_option("--mode", mode, "exercise mode")->check(CLI::IsMember({"partial", "constrained"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    if (chosen->count("--out")) o.out = out;
    if (chosen->count("--seed")) o.seed = seed;
    if (chosen->count("--threads")) o.threads = threads;
    if (chosen->count("--mode")) o.mode = mode;

    try {
        return run(chosen->get_name(), o);
    } catch (const esopt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const esopt::InfeasibleProbabilities& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    }
}
