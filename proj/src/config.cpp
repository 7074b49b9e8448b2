#include "esopt/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "esopt/errors.hpp"

namespace esopt {

using nlohmann::json;

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Maturity: return "maturity";
        case SweepAxis::Gamma: return "gamma";
        case SweepAxis::Volatility: return "volatility";
        case SweepAxis::Rho: return "rho";
        case SweepAxis::PackageSize: return "package_size";
    }
    return "?";
}

const char* to_string(ExerciseMode mode) { return mode == ExerciseMode::Partial ? "partial" : "constrained"; }

namespace {

// Fixed parameter blocks. par1 carries no maturity, correlation or risk aversion of its
// own; the values below (T = 5, rho = 0.6, gamma = 0.5) are the ones used with it in
// the firm-cost set, so par1 and par2 differ only in their attached sweep and MC sizes.
const char* const kBase51 = R"({
  "market": {"mu": 0.12, "sigma": 0.2, "alpha": 0.15, "beta": 0.3, "r": 0.07, "delta": 0.075,
             "rho": -0.5, "s0": 1.2, "y0": 1.0, "t_max": 5.0},
  "option": {"a_total": 10, "strike": 1.0},
  "gamma": 0.125, "n_steps": 500, "mode": "partial",
  "mc": {"n_paths": 100000, "seed": 1, "antithetic": false},
  "threshold": {"a_max": 20, "strike": 2.0, "gamma": 1.0, "dt": 1.0, "rho_mid": 0.5},
  "threads": 1, "output_dir": "out"
})";

const char* const kPar1 = R"({
  "market": {"mu": 0.09, "sigma": 0.40, "alpha": 0.08, "beta": 0.45, "r": 0.06, "delta": 0.0,
             "rho": 0.6, "s0": 1.2, "y0": 1.0, "t_max": 5.0},
  "option": {"a_total": 10, "strike": 1.0},
  "gamma": 0.5, "n_steps": 100, "mode": "partial",
  "sweep": {"axis": "gamma", "values": [0.125, 0.25, 0.5, 1.0, 2.0]},
  "mc": {"n_paths": 100000, "seed": 1, "antithetic": false},
  "threshold": {"a_max": 20, "strike": 2.0, "gamma": 1.0, "dt": 1.0, "rho_mid": 0.5},
  "threads": 1, "output_dir": "out"
})";

const char* const kPar2 = R"({
  "market": {"mu": 0.09, "sigma": 0.40, "alpha": 0.08, "beta": 0.45, "r": 0.06, "delta": 0.0,
             "rho": 0.6, "s0": 1.2, "y0": 1.0, "t_max": 5.0},
  "option": {"a_total": 10, "strike": 1.0},
  "gamma": 0.5, "n_steps": 100, "mode": "partial",
  "mc": {"n_paths": 100000, "seed": 1, "antithetic": false},
  "threshold": {"a_max": 20, "strike": 2.0, "gamma": 1.0, "dt": 1.0, "rho_mid": 0.5},
  "threads": 1, "output_dir": "out"
})";

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
}

const json& section(const json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ConfigError(key, "missing section");
    const json& s = doc.at(key);
    if (!s.is_object()) throw ConfigError(key, "must be an object");
    return s;
}

double number(const json& obj, const std::string& where, const std::string& key) {
    const std::string field = where.empty() ? key : where + "." + key;
    if (!obj.contains(key)) throw ConfigError(field, "missing");
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(field, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
    return x;
}

long long integer(const json& obj, const std::string& where, const std::string& key) {
    const std::string field = where.empty() ? key : where + "." + key;
    if (!obj.contains(key)) throw ConfigError(field, "missing");
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(field, "must be an integer");
    return v.get<long long>();
}

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ConfigError(field, message);
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "maturity") return SweepAxis::Maturity;
    if (name == "gamma") return SweepAxis::Gamma;
    if (name == "volatility") return SweepAxis::Volatility;
    if (name == "rho") return SweepAxis::Rho;
    if (name == "package_size") return SweepAxis::PackageSize;
    throw ConfigError("sweep.axis", "expected one of maturity, gamma, volatility, rho, package_size");
}

SweepSpec parse_sweep(const json& s) {
    reject_unknown(s, "sweep", {"axis", "values", "start", "stop", "step"});
    require(s.contains("axis") && s.at("axis").is_string(), "sweep.axis", "missing or not a string");
    SweepSpec out;
    out.axis = parse_axis(s.at("axis").get<std::string>());
    if (s.contains("values")) {
        require(!s.contains("start") && !s.contains("stop") && !s.contains("step"), "sweep",
                "give either values or start/stop/step");
        require(s.at("values").is_array() && !s.at("values").empty(), "sweep.values", "must be a non-empty array");
        for (const auto& v : s.at("values")) {
            require(v.is_number(), "sweep.values", "entries must be numbers");
            out.values.push_back(v.get<double>());
        }
    } else {
        const double start = number(s, "sweep", "start");
        const double stop = number(s, "sweep", "stop");
        const double step = number(s, "sweep", "step");
        require(step > 0.0, "sweep.step", "must be > 0");
        require(stop >= start, "sweep.stop", "must be >= start");
        const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
        require(count <= 100000, "sweep.step", "too many sweep points");
        for (long long j = 0; j < count; ++j) out.values.push_back(start + static_cast<double>(j) * step);
    }
    if (out.axis == SweepAxis::PackageSize) {
        for (double v : out.values)
            require(v >= 1.0 && v == std::floor(v), "sweep.values", "package sizes must be integers >= 1");
    }
    return out;
}

}  // namespace

std::vector<std::string> preset_names() { return {"base_5_1", "par1", "par2"}; }

json preset(const std::string& name) {
    if (name == "base_5_1") return json::parse(kBase51);
    if (name == "par1") return json::parse(kPar1);
    if (name == "par2") return json::parse(kPar2);
    throw ConfigError("preset", "unknown preset '" + name + "'");
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
}

RunConfig parse_config(const json& doc) {
    require(doc.is_object(), "config", "top level must be an object");
    reject_unknown(doc, "", {"market", "option", "gamma", "n_steps", "mode", "sweep", "mc", "threshold", "threads",
                             "output_dir"});
    RunConfig cfg;

    const json& m = section(doc, "market");
    reject_unknown(m, "market", {"mu", "sigma", "alpha", "beta", "r", "delta", "rho", "s0", "y0", "t_max"});
    auto& cp = cfg.market;
    cp.mu = number(m, "market", "mu");
    cp.sigma = number(m, "market", "sigma");
    cp.alpha = number(m, "market", "alpha");
    cp.beta = number(m, "market", "beta");
    cp.r = number(m, "market", "r");
    cp.delta = number(m, "market", "delta");
    cp.rho = number(m, "market", "rho");
    cp.s0 = number(m, "market", "s0");
    cp.y0 = number(m, "market", "y0");
    cp.t_max = number(m, "market", "t_max");
    require(cp.sigma > 0.0, "market.sigma", "must be > 0");
    require(cp.beta > 0.0, "market.beta", "must be > 0");
    require(cp.delta >= 0.0, "market.delta", "must be >= 0");
    require(cp.rho >= -1.0 && cp.rho <= 1.0, "market.rho", "must lie in [-1, 1]");
    require(cp.s0 > 0.0, "market.s0", "must be > 0");
    require(cp.y0 > 0.0, "market.y0", "must be > 0");
    require(cp.t_max > 0.0, "market.t_max", "must be > 0");

    const json& o = section(doc, "option");
    reject_unknown(o, "option", {"a_total", "strike"});
    const long long a_total = integer(o, "option", "a_total");
    require(a_total >= 1 && a_total <= 100000, "option.a_total", "must be an integer in [1, 100000]");
    cfg.option.a_total = static_cast<int>(a_total);
    cfg.option.strike = number(o, "option", "strike");
    require(cfg.option.strike > 0.0, "option.strike", "must be > 0");

    cfg.gamma = number(doc, "", "gamma");
    require(cfg.gamma > 0.0, "gamma", "must be > 0");
    const long long n_steps = integer(doc, "", "n_steps");
    require(n_steps >= 1 && n_steps <= 100000, "n_steps", "must be an integer in [1, 100000]");
    cfg.n_steps = static_cast<int>(n_steps);

    require(doc.contains("mode") && doc.at("mode").is_string(), "mode", "missing or not a string");
    const auto mode = doc.at("mode").get<std::string>();
    require(mode == "partial" || mode == "constrained", "mode", "expected partial or constrained");
    cfg.mode = mode == "partial" ? ExerciseMode::Partial : ExerciseMode::Constrained;

    if (doc.contains("sweep") && !doc.at("sweep").is_null()) {
        require(doc.at("sweep").is_object(), "sweep", "must be an object");
        cfg.sweep = parse_sweep(doc.at("sweep"));
    }

    const json& mc = section(doc, "mc");
    reject_unknown(mc, "mc", {"n_paths", "seed", "antithetic"});
    cfg.mc.n_paths = integer(mc, "mc", "n_paths");
    require(cfg.mc.n_paths >= 1, "mc.n_paths", "must be >= 1");
    require(mc.contains("seed") && mc.at("seed").is_number_unsigned(), "mc.seed", "must be an unsigned integer");
    cfg.mc.seed = mc.at("seed").get<std::uint64_t>();
    require(mc.contains("antithetic") && mc.at("antithetic").is_boolean(), "mc.antithetic", "must be a boolean");
    cfg.mc.antithetic = mc.at("antithetic").get<bool>();
    require(!cfg.mc.antithetic || cfg.mc.n_paths % 2 == 0, "mc.n_paths", "must be even with antithetic sampling");

    const json& t = section(doc, "threshold");
    reject_unknown(t, "threshold", {"a_max", "strike", "gamma", "dt", "rho_mid"});
    const long long a_max = integer(t, "threshold", "a_max");
    require(a_max >= 1 && a_max <= 100000, "threshold.a_max", "must be an integer in [1, 100000]");
    cfg.threshold.a_max = static_cast<int>(a_max);
    cfg.threshold.strike = number(t, "threshold", "strike");
    require(cfg.threshold.strike > 0.0, "threshold.strike", "must be > 0");
    cfg.threshold.gamma = number(t, "threshold", "gamma");
    require(cfg.threshold.gamma > 0.0, "threshold.gamma", "must be > 0");
    cfg.threshold.dt = number(t, "threshold", "dt");
    require(cfg.threshold.dt > 0.0, "threshold.dt", "must be > 0");
    cfg.threshold.rho_mid = number(t, "threshold", "rho_mid");
    require(cfg.threshold.rho_mid > -1.0 && cfg.threshold.rho_mid < 1.0, "threshold.rho_mid", "must lie in (-1, 1)");

    const long long threads = integer(doc, "", "threads");
    require(threads >= 1 && threads <= 1024, "threads", "must be in [1, 1024]");
    cfg.mc.threads = static_cast<int>(threads);

    require(doc.contains("output_dir") && doc.at("output_dir").is_string(), "output_dir", "missing or not a string");
    cfg.output_dir = doc.at("output_dir").get<std::string>();

    cfg.resolved = doc;
    return cfg;
}

}  // namespace esopt
