#ifndef SPHSTEIN_HARNESS_HPP
#define SPHSTEIN_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sphstein/alternatives.hpp"
#include "sphstein/statistic.hpp"

namespace sphstein {

// One test column of a power study.
struct TestSpec {
    std::string id;        // stein | dksd | softmax | rayleigh | bingham
    double lambda = 0.0;   // used by the first three

    std::string label() const;
};

struct ExperimentConfig {
    int p = 3;
    std::vector<int> sample_sizes;
    double alpha = 0.05;
    int m_critical = 5000;
    int m_power = 5000;
    std::uint64_t seed = 1;
    std::vector<TestSpec> tests;
    std::vector<AlternativeModel> alternatives;

    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
};

struct PowerCell {
    std::string alternative;
    int n = 0;
    std::string test;
    double rejection_pct = 0.0;
    double mc_se_pct = 0.0;
    bool best = false;
    std::string error;  // nonempty when the cell failed
};

struct PowerTable {
    std::vector<PowerCell> cells;
    int p = 0;
    double alpha = 0.0;
    int m_critical = 0;
    int m_power = 0;
    std::uint64_t seed = 0;
    double wall_clock_s = 0.0;

    bool has_errors() const;
    static std::string csv_header();
    std::string to_csv() const;                     // byte-stable given the cells
    static PowerTable parse_csv(const std::string& text);
};

// Runs the full study: per (test, n) one MC critical value, per
// (alternative, n, test) a rejection frequency; all tests in a row consume
// the same replicate samples. Deterministic in config.seed for any worker
// count. Cell failures are recorded, not fatal.
PowerTable run_power_study(const ExperimentConfig& config);

// Paired one-sided t-test: true iff mean(a - b) is significantly negative at
// `level` (test a is worse than test b).
bool paired_onesided_test(std::span<const std::uint8_t> rej_a,
                          std::span<const std::uint8_t> rej_b, double level);

// Writes the CSV table and a JSON sidecar (<path>.meta.json) with the seed,
// replication counts and wall clock.
void emit_table(const PowerTable& table, const std::string& path);

}  // namespace sphstein

#endif
