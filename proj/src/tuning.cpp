#include "sphstein/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sphstein/null_dist.hpp"
#include "sphstein/rng.hpp"
#include "sphstein/specfun.hpp"
#include "sphstein/statistic.hpp"

namespace sphstein {

LambdaGrid LambdaGrid::default_grid() { return regular(0.1, 30.0, 0.1); }

LambdaGrid LambdaGrid::regular(double lo, double hi, double step) {
    if (!(lo > 0.0) || !(step > 0.0) || hi < lo)
        throw std::domain_error("LambdaGrid: need 0 < lo <= hi and step > 0");
    LambdaGrid g;
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    g.values.reserve(count);
    for (int i = 0; i < count; ++i) g.values.push_back(lo + i * step);
    return g;
}

PilotEstimate abar(const SampleSet& pilot, int n_target, int K) {
    if (pilot.n() < 2) throw std::domain_error("abar: pilot needs N >= 2");
    if (K < 1) throw std::domain_error("abar: K >= 1");
    const auto gram = gegenbauer_gram(pilot, K);
    const double N = pilot.n();
    PilotEstimate est;
    est.n_target = n_target;
    est.N = pilot.n();
    est.p = pilot.p();
    est.abar.resize(K);
    for (int k = 1; k <= K; ++k) {
        const double u_stat = 2.0 * gram.pair_sum[k] / (N * (N - 1.0));
        est.abar[k - 1] = (n_target - 1.0) * u_stat + gram.ck_one[k];
    }
    return est;
}

namespace {

struct GridTables {
    std::vector<std::vector<double>> c;  // per grid value: c_k, k = 1..K
    std::vector<double> mean0;           // E_H0[T]
    std::vector<double> sd0;             // sd_H0[T] at a reference n
    double var_n_factor = 1.0;           // 2 (n-1)/n baked into sd0
};

GridTables build_tables(const LambdaGrid& grid, int p, int K, int n_for_var) {
    if (grid.values.empty()) throw std::domain_error("lambda grid is empty");
    GridTables t;
    t.c.reserve(grid.values.size());
    const auto one = gegenbauer_at_one(K, p);
    for (double lambda : grid.values) {
        std::vector<double> ck(K);
        double mean = 0.0, var = 0.0;
        for (int k = 1; k <= K; ++k) {
            ck[k - 1] = c_kp(k, p, lambda);
            mean += ck[k - 1] * one[k];
            const double w = ck[k - 1] * gamma_kp(k, p);
            var += 2.0 * (n_for_var - 1.0) / n_for_var * w * w * static_cast<double>(dim_kp(k, p));
        }
        if (!(var > 0.0))
            throw std::runtime_error("q_score: null variance is zero on the grid");
        t.c.push_back(std::move(ck));
        t.mean0.push_back(mean);
        t.sd0.push_back(std::sqrt(var));
    }
    return t;
}

int argmax_smallest_tie(const std::vector<double>& scores) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(scores.size()); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

}  // namespace

double q_score(double lambda, const PilotEstimate& estimate) {
    const int K = estimate.order();
    const int n = std::max(estimate.n_target, 2);
    const auto one = gegenbauer_at_one(K, estimate.p);
    double shifted = 0.0, mean = 0.0, var = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double ck = c_kp(k, estimate.p, lambda);
        shifted += ck * estimate.abar[k - 1];
        mean += ck * one[k];
        const double w = ck * gamma_kp(k, estimate.p);
        var += 2.0 * (n - 1.0) / n * w * w * static_cast<double>(dim_kp(k, estimate.p));
    }
    if (!(var > 0.0)) throw std::runtime_error("q_score: null variance is zero");
    return (shifted - mean) / std::sqrt(var);
}

TuneResult select_lambda_tilde_scored(const PilotEstimate& estimate, const LambdaGrid& grid) {
    const int K = estimate.order();
    const auto tables = build_tables(grid, estimate.p, K, std::max(estimate.n_target, 2));
    TuneResult result;
    result.scores.resize(grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        double s = 0.0;
        for (int k = 1; k <= K; ++k) s += tables.c[i][k - 1] * estimate.abar[k - 1];
        result.scores[i] = (s - tables.mean0[i]) / tables.sd0[i];
    }
    result.lambda = grid.values[argmax_smallest_tie(result.scores)];
    return result;
}

double select_lambda_tilde(const PilotEstimate& estimate, const LambdaGrid& grid) {
    return select_lambda_tilde_scored(estimate, grid).lambda;
}

TuneResult select_lambda_kfold_scored(const SampleSet& sample, int folds, const LambdaGrid& grid,
                                      std::uint64_t seed) {
    const int n = sample.n();
    const int p = sample.p();
    if (folds < 2) throw std::domain_error("select_lambda_kfold: need folds >= 2");
    if (n < folds) throw std::domain_error("select_lambda_kfold: need n >= folds");

    const double grid_max = *std::max_element(grid.values.begin(), grid.values.end());
    const int K = truncation_order(p, grid_max);

    // Deterministic shuffled partition; fold f owns a contiguous slice of the
    // permutation, first (n mod folds) folds take the extra point.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto rng = replicate_rng(seed, 0, /*stream=*/11);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> fold_of(n);
    std::vector<int> fold_size(folds, 0);
    {
        const int base = n / folds, extra = n % folds;
        int pos = 0;
        for (int f = 0; f < folds; ++f) {
            const int size = base + (f < extra ? 1 : 0);
            for (int s = 0; s < size; ++s) fold_of[perm[pos++]] = f;
            fold_size[f] = size;
        }
    }

    // One O(n^2 K) pass: per-row sums R_k[i] and within-fold sums W_k[f]
    // give every complement's pair sums by inclusion-exclusion.
    const std::size_t stride = static_cast<std::size_t>(K) + 1;
    std::vector<double> row_sum(stride * n, 0.0);
    std::vector<double> fold_sum(stride * folds, 0.0);
    std::vector<double> total(stride, 0.0);
    std::vector<double> cbuf(stride);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double u = 0.0;
            for (int d = 0; d < p; ++d) u += sample.row(i)[d] * sample.row(j)[d];
            gegenbauer_all(K, p, std::clamp(u, -1.0, 1.0), cbuf.data());
            for (int k = 1; k <= K; ++k) {
                row_sum[i * stride + k] += cbuf[k];
                row_sum[j * stride + k] += cbuf[k];
                total[k] += 2.0 * cbuf[k];
                if (fold_of[i] == fold_of[j]) fold_sum[fold_of[i] * stride + k] += 2.0 * cbuf[k];
            }
        }
    }
    std::vector<double> fold_row(stride * folds, 0.0);  // sum over i in fold of R_k[i]
    for (int i = 0; i < n; ++i)
        for (int k = 1; k <= K; ++k) fold_row[fold_of[i] * stride + k] += row_sum[i * stride + k];

    const auto one = gegenbauer_at_one(K, p);
    const auto tables = build_tables(grid, p, K, std::max(2, n / folds));
    TuneResult result;
    result.scores.assign(grid.values.size(), 0.0);
    for (int f = 0; f < folds; ++f) {
        const int nc = n - fold_size[f];
        if (nc < 2) throw std::domain_error("select_lambda_kfold: complement smaller than 2 points");
        const int n_t = std::max(2, fold_size[f]);
        std::vector<double> ab(K);
        for (int k = 1; k <= K; ++k) {
            const double comp = total[k] + fold_sum[f * stride + k] - 2.0 * fold_row[f * stride + k];
            const double u_stat = comp / (static_cast<double>(nc) * (nc - 1.0));
            ab[k - 1] = (n_t - 1.0) * u_stat + one[k];
        }
        const double var_adj = std::sqrt((2.0 * (n_t - 1.0) / n_t) /
                                         (2.0 * (std::max(2, n / folds) - 1.0) / std::max(2, n / folds)));
        for (std::size_t g = 0; g < grid.values.size(); ++g) {
            double s = 0.0;
            for (int k = 1; k <= K; ++k) s += tables.c[g][k - 1] * ab[k - 1];
            result.scores[g] += (s - tables.mean0[g]) / (tables.sd0[g] * var_adj);
        }
    }
    for (double& s : result.scores) s /= folds;
    result.lambda = grid.values[argmax_smallest_tie(result.scores)];
    return result;
}

double select_lambda_kfold(const SampleSet& sample, int folds, const LambdaGrid& grid,
                           std::uint64_t seed) {
    return select_lambda_kfold_scored(sample, folds, grid, seed).lambda;
}

}  // namespace sphstein
