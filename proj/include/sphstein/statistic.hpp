#ifndef SPHSTEIN_STATISTIC_HPP
#define SPHSTEIN_STATISTIC_HPP

#include <string>
#include <vector>

#include "sphstein/sample.hpp"

namespace sphstein {

// Gegenbauer weight of the L2-Stein statistic T_n(lambda), k >= 1.
double c_kp(int k, int p, double lambda);

// Gegenbauer weight of the second-order directional KSD with the vMF kernel.
double c_dksd(int k, int p, double lambda);

// Gegenbauer weight of the softmax statistic (up to a lambda-only constant).
double softmax_weight(int k, int p, double lambda);

// Smallest K >= 8 with c_{K,p}(lambda) C_K(1) below tol times the partial sum
// of c_k C_k(1); throws std::range_error past K = 400.
int truncation_order(int p, double lambda, double tol = 1e-12);

enum class Family { stein, dksd, softmax, custom };

// A truncated sequence of nonnegative Gegenbauer weights b_1..b_K.
struct CoefficientSequence {
    Family family = Family::custom;
    double lambda = 0.0;
    int p = 0;
    std::vector<double> b;  // b[k-1] holds b_k

    int order() const { return static_cast<int>(b.size()); }

    static CoefficientSequence stein(int p, double lambda, double tol = 1e-12);
    static CoefficientSequence dksd(int p, double lambda, double tol = 1e-12);
    static CoefficientSequence softmax(int p, double lambda, double tol = 1e-12);
    static CoefficientSequence custom_weights(int p, std::vector<double> weights);
};

// Pair sums A_k = (1/n) sum_{i,j} C_k(X_i' X_j), computed once per sample and
// reused across coefficient sequences (one O(n^2 K) pass).
struct GegenbauerGram {
    int n = 0;
    int p = 0;
    std::vector<double> pair_sum;  // k = 0..K: sum over i < j of C_k(X_i' X_j)
    std::vector<double> ck_one;    // C_k(1)

    int order() const { return static_cast<int>(pair_sum.size()) - 1; }
    double a(int k) const { return (2.0 * pair_sum[k] + n * ck_one[k]) / n; }
    double a_offdiag(int k) const { return 2.0 * pair_sum[k] / n; }
};

GegenbauerGram gegenbauer_gram(const SampleSet& sample, int K);

// sum_k b_k A_k. With v_scaling the value is divided by n, matching the
// V-statistic (1/n^2) convention used for the dKSD display.
double sobolev_statistic(const GegenbauerGram& gram, const CoefficientSequence& coeffs,
                         bool v_scaling = false);
double sobolev_statistic(const SampleSet& sample, const CoefficientSequence& coeffs,
                         bool v_scaling = false);

// T_n(lambda) evaluated through the Gegenbauer rearrangement.
double stein_statistic(const SampleSet& sample, double lambda);

// Off-diagonal part T_n(lambda) - D_n(lambda), free of the diagonal terms
// (no cancellation at large lambda).
double stein_statistic_offdiag(const SampleSet& sample, double lambda);

// Diagonal contribution D_n(lambda) = sum_k c_k C_k(1); sample independent.
double d_n(int p, double lambda, int K);

// Direct evaluation of the defining integral for p = 2 by a 4096-point
// trapezoid rule over the circle; independent oracle for the series path.
double t_n_bruteforce_p2(const SampleSet& sample, double lambda);

// Classical closed forms.
double rayleigh_statistic(const SampleSet& sample);  // n p |mean|^2
double bingham_statistic(const SampleSet& sample);   // n p(p+2)/2 (tr S^2 - 1/p)
double max_pair_dot(const SampleSet& sample);        // max_{i<j} X_i' X_j

}  // namespace sphstein

#endif
