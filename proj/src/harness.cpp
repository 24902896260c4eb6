#include "sphstein/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sphstein/null_dist.hpp"
#include "sphstein/parallel.hpp"
#include "sphstein/rng.hpp"
#include "sphstein/specfun.hpp"

namespace sphstein {

namespace {

std::string trim_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// All Gegenbauer-family statistics in a battery share one gram pass.
struct Battery {
    std::vector<TestSpec> specs;
    std::vector<std::optional<CoefficientSequence>> seqs;
    std::vector<bool> v_scaled;
    int k_max = 0;

    static Battery build(const std::vector<TestSpec>& tests, int p) {
        Battery b;
        b.specs = tests;
        for (const auto& t : tests) {
            if (t.id == "stein") {
                b.seqs.emplace_back(CoefficientSequence::stein(p, t.lambda));
                b.v_scaled.push_back(false);
            } else if (t.id == "dksd") {
                b.seqs.emplace_back(CoefficientSequence::dksd(p, t.lambda));
                b.v_scaled.push_back(true);  // the V-statistic display
            } else if (t.id == "softmax") {
                b.seqs.emplace_back(CoefficientSequence::softmax(p, t.lambda));
                b.v_scaled.push_back(false);
            } else if (t.id == "rayleigh" || t.id == "bingham") {
                b.seqs.emplace_back(std::nullopt);
                b.v_scaled.push_back(false);
            } else {
                throw std::domain_error("unknown test id '" + t.id + "'");
            }
            if (b.seqs.back()) b.k_max = std::max(b.k_max, b.seqs.back()->order());
        }
        return b;
    }

    void evaluate(const SampleSet& sample, double* out) const {
        std::optional<GegenbauerGram> gram;
        if (k_max > 0) gram.emplace(gegenbauer_gram(sample, k_max));
        for (std::size_t t = 0; t < specs.size(); ++t) {
            if (seqs[t]) {
                out[t] = sobolev_statistic(*gram, *seqs[t], v_scaled[t]);
            } else if (specs[t].id == "rayleigh") {
                out[t] = rayleigh_statistic(sample);
            } else {
                out[t] = bingham_statistic(sample);
            }
        }
    }
};

}  // namespace

std::string TestSpec::label() const {
    if (id == "stein") return "T(" + trim_number(lambda) + ")";
    if (id == "dksd") return "dKSD(" + trim_number(lambda) + ")";
    if (id == "softmax") return "S(" + trim_number(lambda) + ")";
    if (id == "rayleigh") return "Rayleigh";
    if (id == "bingham") return "Bingham";
    return id;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExperimentConfig cfg;
    cfg.p = j.at("p").get<int>();
    cfg.sample_sizes = j.at("sample_sizes").get<std::vector<int>>();
    cfg.alpha = j.value("alpha", 0.05);
    cfg.m_critical = j.value("m_critical", 5000);
    cfg.m_power = j.value("m_power", 5000);
    cfg.seed = j.value("seed", 1ULL);
    if (cfg.m_critical < 100 || cfg.m_power < 100)
        throw std::domain_error("ExperimentConfig: replication counts must be >= 100");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::domain_error("ExperimentConfig: alpha must lie in (0,1)");
    for (const auto& t : j.at("tests")) {
        TestSpec spec;
        spec.id = t.at("id").get<std::string>();
        spec.lambda = t.value("lambda", 0.0);
        cfg.tests.push_back(spec);
    }
    for (auto a : j.at("alternatives")) {
        if (!a.contains("p")) a["p"] = cfg.p;
        cfg.alternatives.push_back(AlternativeModel::from_json(a.dump()));
    }
    if (cfg.tests.empty() || cfg.alternatives.empty() || cfg.sample_sizes.empty())
        throw std::domain_error("ExperimentConfig: tests, alternatives and sample_sizes required");
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

bool PowerTable::has_errors() const {
    return std::any_of(cells.begin(), cells.end(), [](const PowerCell& c) { return !c.error.empty(); });
}

std::string PowerTable::csv_header() { return "alternative,n,test,rejection_pct,mc_se_pct,best,error"; }

std::string PowerTable::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << csv_header() << '\n';
    for (const auto& c : cells) {
        os << c.alternative << ',' << c.n << ',' << c.test << ',' << c.rejection_pct << ','
           << c.mc_se_pct << ',' << (c.best ? "true" : "false") << ',' << c.error << '\n';
    }
    return os.str();
}

PowerTable PowerTable::parse_csv(const std::string& text) {
    PowerTable table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header())
        throw std::runtime_error("PowerTable::parse_csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) parts.push_back(cell);
        while (parts.size() < 7) parts.emplace_back();
        PowerCell c;
        c.alternative = parts[0];
        c.n = std::stoi(parts[1]);
        c.test = parts[2];
        c.rejection_pct = std::stod(parts[3]);
        c.mc_se_pct = std::stod(parts[4]);
        c.best = parts[5] == "true";
        c.error = parts[6];
        table.cells.push_back(std::move(c));
    }
    return table;
}

bool paired_onesided_test(std::span<const std::uint8_t> rej_a,
                          std::span<const std::uint8_t> rej_b, double level) {
    if (rej_a.size() != rej_b.size() || rej_a.size() < 30)
        throw std::domain_error("paired_onesided_test: need equal lengths >= 30");
    if (!(level > 0.0 && level < 0.5)) throw std::domain_error("paired_onesided_test: bad level");
    const std::size_t m = rej_a.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += static_cast<double>(rej_a[i]) - rej_b[i];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = static_cast<double>(rej_a[i]) - rej_b[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(m - 1);
    if (var == 0.0) return mean < 0.0;
    // normal quantile by bisection; m >= 30 makes the t/normal gap negligible
    double lo = -40.0, hi = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(-mid / std::sqrt(2.0)) < level ? lo : hi) = mid;
    }
    const double z = 0.5 * (lo + hi);
    const double t = mean / std::sqrt(var / static_cast<double>(m));
    return t < z;
}

PowerTable run_power_study(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    PowerTable table;
    table.p = config.p;
    table.alpha = config.alpha;
    table.m_critical = config.m_critical;
    table.m_power = config.m_power;
    table.seed = config.seed;

    const Battery battery = Battery::build(config.tests, config.p);
    const std::size_t n_tests = config.tests.size();

    for (int n : config.sample_sizes) {
        // critical values: one shared set of null replicates for all tests
        std::vector<double> crit(n_tests);
        std::string crit_error;
        try {
            std::vector<double> values(static_cast<std::size_t>(config.m_critical) * n_tests);
            const std::uint64_t stream = fnv1a("crit:" + std::to_string(n));
            parallel_for_index(static_cast<std::size_t>(config.m_critical), [&](std::size_t r) {
                auto rng = replicate_rng(config.seed, r, stream);
                const auto sample = uniform_sample(n, config.p, rng);
                battery.evaluate(sample, values.data() + r * n_tests);
            });
            const int rank = static_cast<int>(std::ceil((1.0 - config.alpha) * config.m_critical));
            std::vector<double> column(config.m_critical);
            for (std::size_t t = 0; t < n_tests; ++t) {
                for (int r = 0; r < config.m_critical; ++r) column[r] = values[r * n_tests + t];
                std::sort(column.begin(), column.end());
                crit[t] = column[std::clamp(rank, 1, config.m_critical) - 1];
            }
        } catch (const std::exception& e) {
            crit_error = e.what();
        }

        for (std::size_t a = 0; a < config.alternatives.size(); ++a) {
            const auto& model = config.alternatives[a];
            std::vector<std::vector<std::uint8_t>> reject(
                n_tests, std::vector<std::uint8_t>(config.m_power, 0));
            std::string cell_error = crit_error;
            if (cell_error.empty()) {
                try {
                    const std::uint64_t stream =
                        fnv1a("power:" + std::to_string(n) + ":" + model.label());
                    std::vector<double> values(static_cast<std::size_t>(config.m_power) * n_tests);
                    parallel_for_index(static_cast<std::size_t>(config.m_power), [&](std::size_t r) {
                        auto rng = replicate_rng(config.seed, r, stream);
                        const auto sample = model.sample(n, rng);
                        battery.evaluate(sample, values.data() + r * n_tests);
                    });
                    for (std::size_t t = 0; t < n_tests; ++t)
                        for (int r = 0; r < config.m_power; ++r)
                            reject[t][r] = values[r * n_tests + t] > crit[t] ? 1 : 0;
                } catch (const std::exception& e) {
                    cell_error = e.what();
                }
            }

            std::vector<double> pct(n_tests, 0.0);
            std::size_t best_idx = 0;
            for (std::size_t t = 0; t < n_tests; ++t) {
                double s = 0.0;
                for (auto v : reject[t]) s += v;
                pct[t] = 100.0 * s / config.m_power;
                if (pct[t] > pct[best_idx]) best_idx = t;
            }
            for (std::size_t t = 0; t < n_tests; ++t) {
                PowerCell cell;
                cell.alternative = model.label();
                cell.n = n;
                cell.test = config.tests[t].label();
                cell.error = cell_error;
                if (cell_error.empty()) {
                    cell.rejection_pct = pct[t];
                    const double frac = pct[t] / 100.0;
                    cell.mc_se_pct = 100.0 * std::sqrt(frac * (1.0 - frac) / config.m_power);
                    cell.best = (t == best_idx) ||
                                !paired_onesided_test(reject[t], reject[best_idx], 0.05);
                }
                table.cells.push_back(std::move(cell));
            }
        }
    }
    table.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return table;
}

void emit_table(const PowerTable& table, const std::string& path) {
    {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write table: " + path);
        out << table.to_csv();
        if (!out) throw std::runtime_error("write failed: " + path);
    }
    nlohmann::json meta;
    meta["seed"] = table.seed;
    meta["m_critical"] = table.m_critical;
    meta["m_power"] = table.m_power;
    meta["alpha"] = table.alpha;
    meta["p"] = table.p;
    meta["wall_clock_s"] = table.wall_clock_s;
    meta["version"] = "sphstein 0.1.0";
    std::ofstream out(path + ".meta.json");
    if (!out) throw std::runtime_error("cannot write sidecar: " + path + ".meta.json");
    out << meta.dump(2) << '\n';
}

}  // namespace sphstein
