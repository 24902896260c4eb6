#ifndef SPHSTEIN_TUNING_HPP
#define SPHSTEIN_TUNING_HPP

#include <cstdint>
#include <vector>

#include "sphstein/sample.hpp"

namespace sphstein {

struct LambdaGrid {
    std::vector<double> values;

    // {i/10 : i = 1..300}
    static LambdaGrid default_grid();
    static LambdaGrid regular(double lo, double hi, double step);
};

// Lambda-free estimates Abar_k of E[A_k] for a target sample size, built from
// an independent pilot sample of size N.
struct PilotEstimate {
    std::vector<double> abar;  // abar[k-1] holds Abar_k
    int n_target = 0;
    int N = 0;
    int p = 0;

    int order() const { return static_cast<int>(abar.size()); }
};

PilotEstimate abar(const SampleSet& pilot, int n_target, int K);

// Standardized mean shift (sum_k c_k(lambda) Abar_k - E_H0) / sd_H0.
double q_score(double lambda, const PilotEstimate& estimate);

struct TuneResult {
    double lambda = 0.0;              // selected grid point
    std::vector<double> scores;       // score per grid value
};

// Grid point maximizing q_score; ties break toward the smallest lambda.
TuneResult select_lambda_tilde_scored(const PilotEstimate& estimate, const LambdaGrid& grid);
double select_lambda_tilde(const PilotEstimate& estimate, const LambdaGrid& grid);

// K-fold selection: each fold is scored with its complement as the pilot
// (n_target = fold size), scores are averaged across folds, and the grid
// point maximizing the mean score wins (ties toward the smallest lambda).
// Deterministic given (sample, seed).
TuneResult select_lambda_kfold_scored(const SampleSet& sample, int folds, const LambdaGrid& grid,
                                      std::uint64_t seed);
double select_lambda_kfold(const SampleSet& sample, int folds, const LambdaGrid& grid,
                           std::uint64_t seed);

}  // namespace sphstein

#endif
