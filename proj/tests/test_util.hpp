#ifndef SPHSTEIN_TEST_UTIL_HPP
#define SPHSTEIN_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace testutil {

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps; good enough for
// the small PSD checks in the tests.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        if (off < 1e-24) break;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double apq = a[i * n + j];
                if (std::abs(apq) < 1e-18) continue;
                const double app = a[i * n + i], aqq = a[j * n + j];
                const double theta = 0.5 * (aqq - app) / apq;
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double aik = a[i * n + k], ajk = a[j * n + k];
                    a[i * n + k] = c * aik - s * ajk;
                    a[j * n + k] = s * aik + c * ajk;
                }
                for (int k = 0; k < n; ++k) {
                    const double aki = a[k * n + i], akj = a[k * n + j];
                    a[k * n + i] = c * aki - s * akj;
                    a[k * n + j] = s * aki + c * akj;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

// Two-sample Kolmogorov distance between an empirical sample and a reference
// CDF given as a callable.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
    }
    return d;
}

// Kolmogorov distance between two empirical samples.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    return d;
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;      // of one observation
    double se = 0.0;      // of the mean
};

inline MeanSd mean_sd(const std::vector<double>& v) {
    MeanSd out;
    for (double x : v) out.mean += x;
    out.mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
    out.se = out.sd / std::sqrt(static_cast<double>(v.size()));
    return out;
}

}  // namespace testutil

#endif
