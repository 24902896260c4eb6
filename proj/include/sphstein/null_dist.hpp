#ifndef SPHSTEIN_NULL_DIST_HPP
#define SPHSTEIN_NULL_DIST_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sphstein/sample.hpp"

namespace sphstein {

// The weighted chi-square limit T_infinity = sum_k w_k Z_{d_k} of the Stein
// statistic under uniformity, w_k = c_{k,p}(lambda) gamma_{k,p}.
struct ChiSquareMixture {
    struct Term {
        double weight;
        std::int64_t dof;
    };
    std::vector<Term> terms;

    static ChiSquareMixture stein_limit(int p, double lambda, int K);

    double mean() const;
    double variance() const;
    double sample(std::mt19937_64& rng) const;
    // M independent draws on replicate streams (seed, r); order is fixed.
    std::vector<double> sample_many(int M, std::uint64_t seed) const;
};

// Closed-form moments of T_infinity truncated at K.
std::pair<double, double> limit_moments(int p, double lambda, int K);

// E_{H0}[T_n] = sum_k c_k C_k(1) (n free; identical to D_n).
double finite_n_mean_h0(int p, double lambda, int K);

// Var_{H0}[T_n] = sum_k 2 (n-1)/n (c_k gamma_k)^2 d_k.
double finite_n_variance_h0(int n, int p, double lambda, int K);

struct CriticalValueTable {
    std::string statistic_id;
    int n = 0;
    int p = 0;
    double lambda = 0.0;  // NaN when the statistic has no tuning parameter
    double alpha = 0.0;
    int m = 0;
    std::uint64_t seed = 0;
    double value = 0.0;

    static std::string csv_header();
    std::string csv_row() const;
};

// Empirical (1-alpha) critical value of `statistic` over M uniform samples,
// using the ceil((1-alpha) M)-th order statistic. Deterministic in seed for
// any worker count (replicate r draws from stream (seed, r)).
CriticalValueTable mc_critical_value(const std::function<double(const SampleSet&)>& statistic,
                                     const std::string& statistic_id, int n, int p, int M,
                                     double alpha, std::uint64_t seed,
                                     double lambda = std::numeric_limits<double>::quiet_NaN());

// Add-one Monte Carlo p-value (1 + #{draws >= observed}) / (M + 1).
double p_value_mc(double observed, std::span<const double> null_draws);

}  // namespace sphstein

#endif
