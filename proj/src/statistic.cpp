#include "sphstein/statistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphstein/parallel.hpp"
#include "sphstein/specfun.hpp"

namespace sphstein {

double c_kp(int k, int p, double lambda) {
    if (k < 1) throw std::domain_error("c_kp: k must be >= 1 (constant term is absent)");
    if (p < 2) throw std::domain_error("c_kp: p must be >= 2");
    if (!(lambda > 0.0)) throw std::domain_error("c_kp: lambda must be positive");
    if (p == 2) {
        const double i = bessel_i(k, lambda);
        const double k2 = static_cast<double>(k) * k;
        return 2.0 * k2 * k2 * i * i;
    }
    const double alpha = 0.5 * (p - 2);
    const double base = std::exp(log_gamma(alpha)) * k * (k + p - 2.0) * bessel_i(alpha + k, lambda);
    return std::exp((p - 3.0) * std::log(2.0) + (2.0 - p) * std::log(lambda)) * (p - 2.0) *
           (k + alpha) * base * base;
}

double c_dksd(int k, int p, double lambda) {
    if (k < 1) throw std::domain_error("c_dksd: k must be >= 1");
    const double kk = static_cast<double>(k) * (k + p - 2.0);
    return m_kp(k, p, lambda) * kk * kk;
}

double softmax_weight(int k, int p, double lambda) {
    if (k < 1) throw std::domain_error("softmax_weight: k must be >= 1");
    return m_kp(k, p, lambda);
}

namespace {

constexpr int kTruncationCap = 400;

template <class WeightFn>
int truncation_order_generic(int p, double tol, WeightFn&& w) {
    if (!(tol > 0.0)) throw std::domain_error("truncation_order: tol must be positive");
    const auto one = gegenbauer_at_one(kTruncationCap, p);
    double total = 0.0;
    double last = 0.0;
    int k = 0;
    for (k = 1; k <= kTruncationCap; ++k) {
        last = w(k) * one[k];
        total += last;
        if (k >= 8 && total > 0.0 && last < tol * total) return k;
    }
    throw std::range_error("truncation_order: no convergence by K = 400");
}

}  // namespace

int truncation_order(int p, double lambda, double tol) {
    return truncation_order_generic(p, tol, [&](int k) { return c_kp(k, p, lambda); });
}

CoefficientSequence CoefficientSequence::stein(int p, double lambda, double tol) {
    const int K = truncation_order(p, lambda, tol);
    CoefficientSequence s{Family::stein, lambda, p, {}};
    s.b.resize(K);
    for (int k = 1; k <= K; ++k) s.b[k - 1] = c_kp(k, p, lambda);
    return s;
}

CoefficientSequence CoefficientSequence::dksd(int p, double lambda, double tol) {
    const int K = truncation_order_generic(p, tol, [&](int k) { return c_dksd(k, p, lambda); });
    CoefficientSequence s{Family::dksd, lambda, p, {}};
    s.b.resize(K);
    for (int k = 1; k <= K; ++k) s.b[k - 1] = c_dksd(k, p, lambda);
    return s;
}

CoefficientSequence CoefficientSequence::softmax(int p, double lambda, double tol) {
    const int K = truncation_order_generic(p, tol, [&](int k) { return softmax_weight(k, p, lambda); });
    CoefficientSequence s{Family::softmax, lambda, p, {}};
    s.b.resize(K);
    for (int k = 1; k <= K; ++k) s.b[k - 1] = softmax_weight(k, p, lambda);
    return s;
}

CoefficientSequence CoefficientSequence::custom_weights(int p, std::vector<double> weights) {
    if (weights.empty()) throw std::domain_error("CoefficientSequence: need K >= 1");
    for (double w : weights)
        if (!(w >= 0.0)) throw std::domain_error("CoefficientSequence: weights must be >= 0");
    CoefficientSequence s{Family::custom, 0.0, p, std::move(weights)};
    return s;
}

namespace {

constexpr int kBlock = 64;

// Accumulates sum over j in [j0, j1) of C_k(x_i . x_j) into acc[0..K].
// The Gegenbauer recurrence runs over the whole block at once so the inner
// loops vectorize.
void accumulate_row_block(const double* xi, const double* rows, int j0, int j1, int p, int K,
                          double* acc) {
    double u[kBlock], y0[kBlock], y1[kBlock], y2[kBlock];
    const int m = j1 - j0;
    for (int b = 0; b < m; ++b) {
        const double* xj = rows + static_cast<std::size_t>(j0 + b) * p;
        double s = 0.0;
        for (int d = 0; d < p; ++d) s += xi[d] * xj[d];
        u[b] = std::clamp(s, -1.0, 1.0);
    }
    acc[0] += m;
    if (K == 0) return;
    if (p == 2) {
        double s1 = 0.0;
        for (int b = 0; b < m; ++b) {
            y0[b] = 1.0;
            y1[b] = u[b];
            s1 += u[b];
        }
        acc[1] += s1;
        for (int k = 2; k <= K; ++k) {
            double sk = 0.0;
            for (int b = 0; b < m; ++b) {
                y2[b] = 2.0 * u[b] * y1[b] - y0[b];
                sk += y2[b];
            }
            acc[k] += sk;
            std::swap_ranges(y0, y0 + m, y1);
            std::swap_ranges(y1, y1 + m, y2);
        }
        return;
    }
    const double alpha = 0.5 * (p - 2);
    double s1 = 0.0;
    for (int b = 0; b < m; ++b) {
        y0[b] = 1.0;
        y1[b] = 2.0 * alpha * u[b];
        s1 += y1[b];
    }
    acc[1] += s1;
    for (int k = 2; k <= K; ++k) {
        const double a1 = 2.0 * (k + alpha - 1.0) / k;
        const double a2 = (k + 2.0 * alpha - 2.0) / k;
        double sk = 0.0;
        for (int b = 0; b < m; ++b) {
            y2[b] = a1 * u[b] * y1[b] - a2 * y0[b];
            sk += y2[b];
        }
        acc[k] += sk;
        std::swap_ranges(y0, y0 + m, y1);
        std::swap_ranges(y1, y1 + m, y2);
    }
}

}  // namespace

GegenbauerGram gegenbauer_gram(const SampleSet& sample, int K) {
    if (K < 1) throw std::domain_error("gegenbauer_gram: K must be >= 1");
    const int n = sample.n();
    const int p = sample.p();
    const double* rows = sample.data().data();

    GegenbauerGram gram;
    gram.n = n;
    gram.p = p;
    gram.ck_one = gegenbauer_at_one(K, p);
    gram.pair_sum.assign(static_cast<std::size_t>(K) + 1, 0.0);

    // Row sums land in per-row slots; the final reduction runs serially in row
    // order, so the result does not depend on the worker count.
    const std::size_t stride = static_cast<std::size_t>(K) + 1;
    std::vector<double> row_acc(stride * n, 0.0);
    auto row_job = [&](std::size_t i) {
        const double* xi = rows + i * p;
        double* acc = row_acc.data() + i * stride;
        for (int j0 = static_cast<int>(i) + 1; j0 < n; j0 += kBlock)
            accumulate_row_block(xi, rows, j0, std::min(j0 + kBlock, n), p, K, acc);
    };
    // Small grams are cheaper single threaded; MC loops parallelize outside.
    if (static_cast<long long>(n) * n * K > 64LL * 1000 * 1000)
        parallel_for_index(static_cast<std::size_t>(n), row_job);
    else
        for (int i = 0; i < n; ++i) row_job(i);

    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= K; ++k) gram.pair_sum[k] += row_acc[i * stride + k];
    return gram;
}

double sobolev_statistic(const GegenbauerGram& gram, const CoefficientSequence& coeffs,
                         bool v_scaling) {
    if (coeffs.p != gram.p)
        throw std::domain_error("sobolev_statistic: coefficient/sample dimension mismatch");
    if (coeffs.order() > gram.order())
        throw std::domain_error("sobolev_statistic: gram truncation too short for coefficients");
    double t = 0.0;
    for (int k = 1; k <= coeffs.order(); ++k) t += coeffs.b[k - 1] * gram.a(k);
    return v_scaling ? t / gram.n : t;
}

double sobolev_statistic(const SampleSet& sample, const CoefficientSequence& coeffs,
                         bool v_scaling) {
    return sobolev_statistic(gegenbauer_gram(sample, std::max(1, coeffs.order())), coeffs, v_scaling);
}

double stein_statistic(const SampleSet& sample, double lambda) {
    return sobolev_statistic(sample, CoefficientSequence::stein(sample.p(), lambda));
}

double stein_statistic_offdiag(const SampleSet& sample, double lambda) {
    const auto coeffs = CoefficientSequence::stein(sample.p(), lambda);
    const auto gram = gegenbauer_gram(sample, coeffs.order());
    double t = 0.0;
    for (int k = 1; k <= coeffs.order(); ++k) t += coeffs.b[k - 1] * gram.a_offdiag(k);
    return t;
}

double d_n(int p, double lambda, int K) {
    const auto one = gegenbauer_at_one(K, p);
    double s = 0.0;
    for (int k = 1; k <= K; ++k) s += c_kp(k, p, lambda) * one[k];
    return s;
}

double t_n_bruteforce_p2(const SampleSet& sample, double lambda) {
    if (sample.p() != 2) throw std::domain_error("t_n_bruteforce_p2: p must be 2");
    const int n = sample.n();
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i) phi[i] = std::atan2(sample.row(i)[1], sample.row(i)[0]);
    constexpr int grid = 4096;
    double integral = 0.0;
    for (int g = 0; g < grid; ++g) {
        const double theta = 2.0 * M_PI * g / grid;
        double mean = 0.0;
        for (int j = 0; j < n; ++j) {
            const double c = std::cos(theta - phi[j]);
            const double s = std::sin(theta - phi[j]);
            mean += (lambda * lambda * s * s - lambda * c) * std::exp(lambda * c);
        }
        mean /= n;
        integral += mean * mean;
    }
    return n * integral / grid;  // d nu_1 = d theta / (2 pi), periodic trapezoid
}

double rayleigh_statistic(const SampleSet& sample) {
    const int n = sample.n();
    const int p = sample.p();
    double norm2 = 0.0;
    for (int d = 0; d < p; ++d) {
        double m = 0.0;
        for (int i = 0; i < n; ++i) m += sample.row(i)[d];
        m /= n;
        norm2 += m * m;
    }
    return n * p * norm2;
}

double bingham_statistic(const SampleSet& sample) {
    const int n = sample.n();
    const int p = sample.p();
    std::vector<double> scatter(static_cast<std::size_t>(p) * p, 0.0);
    for (int i = 0; i < n; ++i) {
        auto x = sample.row(i);
        for (int r = 0; r < p; ++r)
            for (int c = 0; c < p; ++c) scatter[static_cast<std::size_t>(r) * p + c] += x[r] * x[c];
    }
    double trace_sq = 0.0;
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) {
            const double s = scatter[static_cast<std::size_t>(r) * p + c] / n;
            trace_sq += s * s;
        }
    return 0.5 * n * p * (p + 2.0) * (trace_sq - 1.0 / p);
}

double max_pair_dot(const SampleSet& sample) {
    const int n = sample.n();
    if (n < 2) throw std::domain_error("max_pair_dot: need n >= 2");
    const int p = sample.p();
    double best = -1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int d = 0; d < p; ++d) s += sample.row(i)[d] * sample.row(j)[d];
            best = std::max(best, s);
        }
    return best;
}

}  // namespace sphstein
