// halfway: densities, samples and validation reports from the command line.
//
//   halfway density  --u 0.5 --x 1 --y 0.01:100:200:log [--cdf] [--format json]
//   halfway density  --u 0.5 --x 1 --quantile 0.1,0.5,0.9
//   halfway sample   --method exact --u 0.5 --x 1 --n 100000 --seed 7 --out draws.csv --meta draws.json
//   halfway simulate --u 0.5 --x 1 --n 20000 --dt 1e-3 --t-max 1e4
//   halfway validate --full --seed 42 --threads 4 --report report.json
//
// Exit status: 0 success, 1 failed validation or unusable result, 2 bad usage.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "halfway/analytic.hpp"
#include "halfway/errors.hpp"
#include "halfway/samplers.hpp"
#include "halfway/validation.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

struct Grid {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
    bool log = false;
};

Grid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
    if (parts.size() != 3 && parts.size() != 4) {
        throw UsageError("--y expects min:max:count[:lin|log], got '" + text + "'");
    }
    Grid grid;
    try {
        std::size_t used = 0;
        grid.min = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
        grid.max = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
        const long long count = std::stoll(parts[2], &used);
        if (used != parts[2].size() || count < 1) throw std::invalid_argument(parts[2]);
        grid.count = static_cast<std::size_t>(count);
    } catch (const std::logic_error&) {
        throw UsageError("--y: cannot parse '" + text + "'");
    }
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            grid.log = true;
        } else if (parts[3] != "lin") {
            throw UsageError("--y spacing must be lin or log, got '" + parts[3] + "'");
        }
    }
    if (!(std::isfinite(grid.min) && std::isfinite(grid.max)) || grid.min < 0.0 || grid.max < grid.min) {
        throw UsageError("--y needs finite 0 <= min <= max");
    }
    if (grid.count == 1 && grid.min != grid.max) throw UsageError("--y with count 1 needs min == max");
    if (grid.log && grid.min <= 0.0) throw UsageError("--y log spacing needs min > 0");
    return grid;
}

std::vector<double> grid_points(const Grid& grid) {
    std::vector<double> points(grid.count);
    if (grid.count == 1) {
        points[0] = grid.min;
        return points;
    }
    const double last = static_cast<double>(grid.count - 1);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double f = static_cast<double>(i) / last;
        points[i] = grid.log ? std::exp(std::log(grid.min) + f * (std::log(grid.max) - std::log(grid.min)))
                             : grid.min + f * (grid.max - grid.min);
    }
    points.front() = grid.min;
    points.back() = grid.max;
    return points;
}

void write_table(std::ostream& out, const std::string& format, const std::string& key, const std::string& value,
                 const std::vector<double>& keys, const std::vector<double>& values, const json& meta) {
    if (format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < keys.size(); ++i) rows.push_back({keys[i], values[i]});
        json doc = meta;
        doc["columns"] = {key, value};
        doc["rows"] = std::move(rows);
        out << doc.dump(2) << '\n';
        return;
    }
    out << key << ',' << value << '\n';
    for (std::size_t i = 0; i < keys.size(); ++i) out << num(keys[i]) << ',' << num(values[i]) << '\n';
}

struct DensityArgs {
    double u = 0.0;
    double x = 0.0;
    std::string y;
    bool cdf = false;
    std::vector<double> quantiles;
    std::string format = "csv";
};

int cmd_density(const DensityArgs& args) {
    const halfway::HalfwayParams params(args.x, args.u);
    const json meta{{"u", args.u}, {"x", args.x}};
    if (!args.quantiles.empty()) {
        if (args.cdf || !args.y.empty()) throw UsageError("--quantile cannot be combined with --y or --cdf");
        std::vector<double> values;
        for (double q : args.quantiles) values.push_back(halfway::halfway_quantile(params, q));
        write_table(std::cout, args.format, "q", "quantile", args.quantiles, values, meta);
        return kExitOk;
    }
    if (args.y.empty()) throw UsageError("density needs --y or --quantile");
    const std::vector<double> ys = grid_points(parse_grid(args.y));
    std::vector<double> values;
    values.reserve(ys.size());
    for (double y : ys) values.push_back(args.cdf ? halfway::halfway_cdf(params, y) : halfway::halfway_density(params, y));
    write_table(std::cout, args.format, "y", args.cdf ? "cdf" : "p", ys, values, meta);
    return kExitOk;
}

struct SampleArgs {
    std::string method = "exact";
    double u = 0.0;
    double x = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t streams = 8;
    std::size_t threads = 1;
    double dt = 1e-3;
    std::optional<double> t_max;
    bool no_bridge = false;
    std::string out;
    std::string meta;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << content;
    if (!file.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

int cmd_sample(const SampleArgs& args) {
    const halfway::HalfwayParams params(args.x, args.u);
    const halfway::SamplingMethod method = halfway::parse_sampling_method(args.method);
    halfway::PathConfig config = halfway::PathConfig::for_start(args.x);
    config.dt = args.dt;
    if (args.t_max) config.t_max = *args.t_max;
    config.bridge_correction = !args.no_bridge;

    const halfway::SampleBatch batch =
        halfway::sample_batch(params, args.n, method, config, args.seed, args.streams, args.threads);

    std::string csv = "value\n";
    csv.reserve(batch.values.size() * 24 + 6);
    for (double v : batch.values) {
        csv += num(v);
        csv += '\n';
    }
    if (args.out.empty()) {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
    } else {
        write_file(args.out, csv);
    }

    if (!args.meta.empty()) {
        json meta{{"schema_version", halfway::kReportSchemaVersion},
                  {"version", std::string(halfway::library_version())},
                  {"method", std::string(halfway::to_string(method))},
                  {"u", args.u},
                  {"x", args.x},
                  {"seed", args.seed},
                  {"streams", args.streams},
                  {"n", batch.n_requested},
                  {"n_returned", batch.values.size()},
                  {"n_censored", batch.n_censored}};
        if (batch.path_config) {
            meta["dt"] = batch.path_config->dt;
            meta["t_max"] = batch.path_config->t_max;
            meta["bridge_correction"] = batch.path_config->bridge_correction;
        }
        write_file(args.meta, meta.dump(2) + "\n");
    }

    if (batch.values.empty()) {
        std::cerr << "error: every path was censored at t_max = " << num(config.t_max) << '\n';
        return kExitFailed;
    }
    if (batch.n_censored > 0) {
        std::cerr << batch.n_censored << " of " << batch.n_requested << " paths censored at t_max\n";
    }
    return kExitOk;
}

struct ValidateArgs {
    bool quick = false;
    bool full = false;
    std::uint64_t seed = 42;
    std::size_t threads = 1;
    std::string report;
};

int cmd_validate(const ValidateArgs& args) {
    if (args.quick && args.full) throw UsageError("--quick and --full are mutually exclusive");
    halfway::ValidationOptions options;
    options.mode = args.full ? halfway::ValidationMode::full : halfway::ValidationMode::quick;
    options.seed = args.seed;
    options.threads = args.threads;
    options.on_check = [](const halfway::CheckRecord& c) {
        std::cerr << fmt::format("{:<24} {:>12.4e} {:>2} {:<10.4e} {:>7.1f}s  {}\n", c.name, c.observed,
                                 halfway::to_string(c.comparison), c.threshold, c.runtime_seconds,
                                 c.pass ? "PASS" : "FAIL");
    };
    const halfway::ValidationReport report = halfway::run_validation(options);
    const std::string text = halfway::to_json(report).dump(2) + "\n";
    if (args.report.empty()) {
        std::cout << text;
    } else {
        write_file(args.report, text);
    }
    std::cerr << (report.overall_pass ? "overall: PASS" : "overall: FAIL") << '\n';
    return report.overall_pass ? kExitOk : kExitFailed;
}

void add_sample_options(CLI::App* cmd, SampleArgs& args) {
    cmd->add_option("--u", args.u, "time fraction in (0, 1)")->required();
    cmd->add_option("--x", args.x, "starting point, > 0")->required();
    cmd->add_option("--n", args.n, "number of draws (paths for the path method)")->required();
    cmd->add_option("--seed", args.seed, "RNG seed")->required();
    cmd->add_option("--streams", args.streams, "independent RNG streams; changes the draws")
        ->capture_default_str();
    cmd->add_option("--threads", args.threads, "worker threads; never changes the draws")->capture_default_str();
    cmd->add_option("--dt", args.dt, "path method: Euler step")->capture_default_str();
    cmd->add_option("--t-max", args.t_max, "path method: censoring horizon (default 1e6 x^2)");
    cmd->add_flag("--no-bridge", args.no_bridge, "path method: disable the bridge-crossing correction");
    cmd->add_option("--out", args.out, "CSV destination (default: standard output)");
    cmd->add_option("--meta", args.meta, "write a JSON sidecar with run metadata");
}

int run(int argc, char** argv) {
    CLI::App app{"Brownian motion observed at a fixed fraction of its hitting time of zero"};
    app.set_version_flag("--version", std::string(halfway::library_version()));
    app.require_subcommand(1);

    DensityArgs density;
    auto* density_cmd = app.add_subcommand("density", "density, CDF or quantiles on a grid");
    density_cmd->add_option("--u", density.u, "time fraction in (0, 1)")->required();
    density_cmd->add_option("--x", density.x, "starting point, > 0")->required();
    density_cmd->add_option("--y", density.y, "grid min:max:count[:lin|log]");
    density_cmd->add_flag("--cdf", density.cdf, "emit the CDF instead of the density");
    density_cmd->add_option("--quantile", density.quantiles, "comma-separated probabilities")->delimiter(',');
    density_cmd->add_option("--format", density.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "draw from the halfway law");
    sample_cmd->add_option("--method", sample.method, "exact or path")
        ->check(CLI::IsMember({"exact", "path"}))
        ->capture_default_str();
    add_sample_options(sample_cmd, sample);

    SampleArgs simulate;
    simulate.method = "path";
    auto* simulate_cmd = app.add_subcommand("simulate", "same as sample --method path");
    add_sample_options(simulate_cmd, simulate);

    ValidateArgs validate;
    auto* validate_cmd = app.add_subcommand("validate", "run the numerical and statistical checks");
    validate_cmd->add_flag("--quick", validate.quick, "analytic and quadrature checks only (default)");
    validate_cmd->add_flag("--full", validate.full, "also run every sampler check");
    validate_cmd->add_option("--seed", validate.seed, "RNG seed")->capture_default_str();
    validate_cmd->add_option("--threads", validate.threads, "worker threads")->capture_default_str();
    validate_cmd->add_option("--report", validate.report, "JSON destination (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (density_cmd->parsed()) return cmd_density(density);
        if (sample_cmd->parsed()) return cmd_sample(sample);
        if (simulate_cmd->parsed()) return cmd_sample(simulate);
        return cmd_validate(validate);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const halfway::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
