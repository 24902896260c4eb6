#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sphstein/alternatives.hpp"
#include "sphstein/fields.hpp"
#include "sphstein/harness.hpp"
#include "sphstein/null_dist.hpp"
#include "sphstein/parallel.hpp"
#include "sphstein/rng.hpp"
#include "sphstein/statistic.hpp"
#include "sphstein/tuning.hpp"

namespace {

constexpr int kExitUsage = 64;    // EX_USAGE
constexpr int kExitNoInput = 66;  // EX_NOINPUT
constexpr int kExitPartial = 2;

struct StatChoice {
    std::string id = "stein";
    double lambda = 1.0;
};

double evaluate_statistic(const StatChoice& choice, const sphstein::SampleSet& sample) {
    using namespace sphstein;
    if (choice.id == "stein")
        return sobolev_statistic(sample, CoefficientSequence::stein(sample.p(), choice.lambda));
    if (choice.id == "dksd")
        return sobolev_statistic(sample, CoefficientSequence::dksd(sample.p(), choice.lambda), true);
    if (choice.id == "softmax")
        return sobolev_statistic(sample, CoefficientSequence::softmax(sample.p(), choice.lambda));
    if (choice.id == "rayleigh") return rayleigh_statistic(sample);
    if (choice.id == "bingham") return bingham_statistic(sample);
    throw CLI::ValidationError("--statistic", "unknown statistic id '" + choice.id + "'");
}

std::string statistic_label(const StatChoice& choice) {
    sphstein::TestSpec spec;
    spec.id = choice.id;
    spec.lambda = choice.lambda;
    return spec.label();
}

void require_input_file(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        std::cerr << "input file not found: " << path << "\n";
        std::exit(kExitNoInput);
    }
}

std::vector<double> parse_vec3(const std::string& text, const std::string& flag) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 3) throw CLI::ValidationError(flag, "expected three comma-separated values");
    return v;
}

int cmd_test(const std::string& data_path, const StatChoice& choice, double alpha, int m,
             std::uint64_t seed, bool as_json, bool normalize) {
    using namespace sphstein;
    require_input_file(data_path);
    const auto sample = load_sample_csv(data_path, normalize);
    const double observed = evaluate_statistic(choice, sample);

    std::vector<double> nulls(m);
    parallel_for_index(static_cast<std::size_t>(m), [&](std::size_t r) {
        auto rng = replicate_rng(seed, r);
        nulls[r] = evaluate_statistic(choice, uniform_sample(sample.n(), sample.p(), rng));
    });
    const double pvalue = p_value_mc(observed, nulls);
    std::sort(nulls.begin(), nulls.end());
    const int rank = static_cast<int>(std::ceil((1.0 - alpha) * m));
    const double crit = nulls[std::clamp(rank, 1, m) - 1];
    const bool reject = observed > crit;

    if (as_json) {
        nlohmann::json j;
        j["statistic"] = statistic_label(choice);
        j["n"] = sample.n();
        j["p"] = sample.p();
        j["value"] = observed;
        j["critical_value"] = crit;
        j["alpha"] = alpha;
        j["m"] = m;
        j["seed"] = seed;
        j["p_value"] = pvalue;
        j["reject"] = reject;
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("statistic:       %s\n", statistic_label(choice).c_str());
        std::printf("n, p:            %d, %d\n", sample.n(), sample.p());
        std::printf("value:           %.10g\n", observed);
        std::printf("critical value:  %.10g  (alpha=%g, M=%d, seed=%llu)\n", crit, alpha, m,
                    static_cast<unsigned long long>(seed));
        std::printf("p-value:         %.10g\n", pvalue);
        std::printf("decision:        %s\n", reject ? "reject uniformity" : "do not reject");
    }
    return 0;
}

int cmd_critval(const StatChoice& choice, int n, int p, double alpha, int m, std::uint64_t seed,
                const std::string& out) {
    using namespace sphstein;
    auto table = mc_critical_value(
        [&](const SampleSet& s) { return evaluate_statistic(choice, s); }, statistic_label(choice),
        n, p, m, alpha, seed,
        (choice.id == "rayleigh" || choice.id == "bingham")
            ? std::numeric_limits<double>::quiet_NaN()
            : choice.lambda);
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    os << CriticalValueTable::csv_header() << '\n' << table.csv_row() << '\n';
    std::cout << "critical value: " << table.value << "\n";
    return 0;
}

int cmd_power(const std::string& config_path, const std::string& out) {
    using namespace sphstein;
    require_input_file(config_path);
    const auto config = ExperimentConfig::from_json_file(config_path);
    const auto table = run_power_study(config);
    emit_table(table, out);
    std::cout << "wrote " << out << " (" << table.cells.size() << " cells, "
              << table.wall_clock_s << " s)\n";
    if (table.has_errors()) {
        std::cerr << "some cells failed; see the error column\n";
        return kExitPartial;
    }
    return 0;
}

int cmd_tune(const std::string& data_path, const std::string& pilot_path, int n_target, int folds,
             const std::string& mode, double grid_min, double grid_max, double grid_step,
             std::uint64_t seed, const std::string& out) {
    using namespace sphstein;
    require_input_file(data_path);
    const auto grid = LambdaGrid::regular(grid_min, grid_max, grid_step);
    TuneResult result;
    if (mode == "pilot") {
        const auto pilot =
            pilot_path.empty() ? load_sample_csv(data_path) : (require_input_file(pilot_path),
                                                               load_sample_csv(pilot_path));
        const int target = n_target > 0 ? n_target : pilot.n();
        const int K = truncation_order(pilot.p(), grid_max);
        result = select_lambda_tilde_scored(abar(pilot, target, K), grid);
    } else if (mode == "kfold") {
        const auto sample = load_sample_csv(data_path);
        result = select_lambda_kfold_scored(sample, folds, grid, seed);
    } else {
        throw CLI::ValidationError("--mode", "must be 'pilot' or 'kfold'");
    }
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    os.precision(17);
    os << "lambda,score,selected\n";
    for (std::size_t i = 0; i < grid.values.size(); ++i)
        os << grid.values[i] << ',' << result.scores[i] << ','
           << (grid.values[i] == result.lambda ? "true" : "false") << '\n';
    std::cout << "selected lambda: " << result.lambda << "\n";
    return 0;
}

int cmd_field(const std::string& kind, double kappa, double lambda, const std::string& mu,
              const std::string& t_ref, const std::string& resolution, int n, int mc_draws,
              std::uint64_t seed, const std::string& out) {
    using namespace sphstein;
    FieldOptions options;
    if (kind == "abs_z")
        options.kind = FieldKind::abs_z;
    else if (kind == "rho_null")
        options.kind = FieldKind::rho_null;
    else if (kind == "rho_alt")
        options.kind = FieldKind::rho_alt;
    else
        throw CLI::ValidationError("--kind", "must be abs_z, rho_null or rho_alt");
    options.kappa = kappa;
    options.lambda = lambda;
    options.n = n;
    options.mu = parse_vec3(mu, "--mu");
    options.t_ref = parse_vec3(t_ref, "--t-ref");
    options.mc_draws = mc_draws;
    options.seed = seed;
    const auto x_pos = resolution.find('x');
    if (x_pos == std::string::npos)
        throw CLI::ValidationError("--resolution", "expected <nlon>x<nlat>");
    options.nlon = std::stoi(resolution.substr(0, x_pos));
    options.nlat = std::stoi(resolution.substr(x_pos + 1));
    const auto grid = SphereGrid::make(options.nlon, options.nlat);
    export_field(grid, field_grid(grid, options), out);
    std::cout << "wrote " << out << " (" << grid.size() << " points)\n";
    return 0;
}

int cmd_sample(const std::string& model_json, int n, std::uint64_t seed, const std::string& out) {
    using namespace sphstein;
    const auto model = AlternativeModel::from_json(model_json);
    auto rng = replicate_rng(seed, 0);
    write_sample_csv(out, model.sample(n, rng));
    std::cout << "wrote " << out << " (" << n << " points, " << model.label() << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"L2-Stein uniformity tests on the hypersphere"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();

    StatChoice choice;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    int m = 5000;

    auto* test = app.add_subcommand("test", "test a sample for uniformity");
    std::string data_path;
    bool as_json = false, normalize = false;
    test->add_option("--data", data_path, "CSV of unit vectors, one per row")->required();
    test->add_option("--statistic", choice.id, "stein|dksd|softmax|rayleigh|bingham")
        ->capture_default_str();
    test->add_option("--lambda", choice.lambda, "tuning parameter")->capture_default_str();
    test->add_option("--alpha", alpha, "significance level")->capture_default_str();
    test->add_option("--m", m, "null replicates")->capture_default_str();
    test->add_option("--seed", seed, "RNG seed")->capture_default_str();
    test->add_flag("--json", as_json, "machine readable output");
    test->add_flag("--normalize", normalize, "project near-unit rows onto the sphere");

    auto* critval = app.add_subcommand("critval", "Monte Carlo critical value");
    int n = 50, p = 3;
    std::string out = "out.csv";
    critval->add_option("--statistic", choice.id)->capture_default_str();
    critval->add_option("--lambda", choice.lambda)->capture_default_str();
    critval->add_option("--n", n, "sample size")->required();
    critval->add_option("--p", p, "dimension")->required();
    critval->add_option("--alpha", alpha)->capture_default_str();
    critval->add_option("--m", m)->capture_default_str();
    critval->add_option("--seed", seed)->capture_default_str();
    critval->add_option("--out", out, "output CSV")->required();

    auto* power = app.add_subcommand("power", "run a power study from a JSON config");
    std::string config_path;
    power->add_option("--config", config_path, "experiment config (JSON)")->required();
    power->add_option("--out", out, "output CSV")->required();

    auto* tune = app.add_subcommand("tune", "select lambda from data");
    std::string pilot_path, mode = "pilot";
    int n_target = 0, folds = 20;
    double grid_min = 0.1, grid_max = 30.0, grid_step = 0.1;
    tune->add_option("--data", data_path, "sample CSV")->required();
    tune->add_option("--mode", mode, "pilot|kfold")->capture_default_str();
    tune->add_option("--pilot", pilot_path, "pilot CSV (pilot mode; defaults to --data)");
    tune->add_option("--n-target", n_target, "target sample size (pilot mode)");
    tune->add_option("--folds", folds)->capture_default_str();
    tune->add_option("--grid-min", grid_min)->capture_default_str();
    tune->add_option("--grid-max", grid_max)->capture_default_str();
    tune->add_option("--grid-step", grid_step)->capture_default_str();
    tune->add_option("--seed", seed)->capture_default_str();
    tune->add_option("--out", out, "scores CSV")->required();

    auto* field = app.add_subcommand("field", "export a field grid on S^2");
    std::string kind = "abs_z", mu = "0,-1,0", t_ref = "0,0,1", resolution = "181x91";
    double kappa = 1.0, lambda = 1.0;
    int field_n = 100, mc_draws = 10000;
    field->add_option("--kind", kind, "abs_z|rho_null|rho_alt")->capture_default_str();
    field->add_option("--kappa", kappa)->capture_default_str();
    field->add_option("--lambda", lambda)->capture_default_str();
    field->add_option("--mu", mu)->capture_default_str();
    field->add_option("--t-ref", t_ref)->capture_default_str();
    field->add_option("--resolution", resolution)->capture_default_str();
    field->add_option("--n", field_n, "sqrt(n) scaling of |z|")->capture_default_str();
    field->add_option("--mc-draws", mc_draws)->capture_default_str();
    field->add_option("--seed", seed)->capture_default_str();
    field->add_option("--out", out)->required();

    auto* sample_cmd = app.add_subcommand("sample", "draw from an alternative model");
    std::string model_json = R"({"kind":"vmf","kappa":1.0,"p":3})";
    sample_cmd->add_option("--model", model_json, "model JSON")->capture_default_str();
    sample_cmd->add_option("--n", n, "number of draws")->required();
    sample_cmd->add_option("--seed", seed)->capture_default_str();
    sample_cmd->add_option("--out", out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    sphstein::set_num_threads(threads);
    try {
        if (*test) return cmd_test(data_path, choice, alpha, m, seed, as_json, normalize);
        if (*critval) return cmd_critval(choice, n, p, alpha, m, seed, out);
        if (*power) return cmd_power(config_path, out);
        if (*tune)
            return cmd_tune(data_path, pilot_path, n_target, folds, mode, grid_min, grid_max,
                            grid_step, seed, out);
        if (*field)
            return cmd_field(kind, kappa, lambda, mu, t_ref, resolution, field_n, mc_draws, seed,
                             out);
        if (*sample_cmd) return cmd_sample(model_json, n, seed, out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
