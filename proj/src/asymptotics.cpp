#include "sphstein/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "sphstein/parallel.hpp"
#include "sphstein/rng.hpp"
#include "sphstein/specfun.hpp"
#include "sphstein/statistic.hpp"

namespace sphstein {

AlternativeHarmonics harmonics_for(const AlternativeModel& model, int K) {
    AlternativeHarmonics h;
    h.p = model.p();
    h.beta = beta_all(model, K);
    if (model.kind() == AltKind::uniform) {
        h.mu.assign(model.p(), 0.0);
        h.mu[0] = 1.0;
    } else {
        h.mu.assign(model.axis().begin(), model.axis().end());
    }
    return h;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double z_value(const AlternativeHarmonics& h, double lambda, std::span<const double> s) {
    const int K = h.order();
    const double u = dot(h.mu, s);
    std::vector<double> c(static_cast<std::size_t>(K) + 1);
    gegenbauer_all(K, h.p, u, c.data());
    double z = 0.0;
    for (int k = 1; k <= K; ++k)
        z += h.beta[k] * m_kp(k, h.p, lambda) * gamma_kp(k, h.p) * (-static_cast<double>(k)) *
             (k + h.p - 2.0) * c[k];
    return z;
}

double tau_rotsym(const AlternativeHarmonics& h, double lambda) {
    const int K = h.order();
    const auto one = gegenbauer_at_one(K, h.p);
    double tau = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double bg = h.beta[k] * gamma_kp(k, h.p);
        tau += bg * bg * c_kp(k, h.p, lambda) * one[k];
    }
    return tau;
}

double psi(int p, double lambda, std::span<const double> t, std::span<const double> x, int K) {
    const double u = dot(t, x);
    std::vector<double> c(static_cast<std::size_t>(K) + 1);
    gegenbauer_all(K, p, u, c.data());
    double v = 0.0;
    for (int k = 1; k <= K; ++k)
        v += m_kp(k, p, lambda) * (-static_cast<double>(k)) * (k + p - 2.0) * c[k];
    return v;
}

double kernel_K(int p, double lambda, double u, int K) {
    if (std::abs(u) > 1.0 + 1e-12) throw std::domain_error("kernel_K: |dot| must be <= 1");
    std::vector<double> c(static_cast<std::size_t>(K) + 1);
    gegenbauer_all(K, p, u, c.data());
    double v = 0.0;
    for (int k = 1; k <= K; ++k) v += c_kp(k, p, lambda) * c[k];
    return v;
}

double kernel_Kprime_mc(const AlternativeHarmonics& h, const AlternativeModel& model,
                        double lambda, std::span<const double> s, std::span<const double> t, int M,
                        std::uint64_t seed) {
    if (M < 1) throw std::domain_error("kernel_Kprime_mc: M >= 1");
    const int K = h.order();
    auto rng = replicate_rng(seed, 0, /*stream=*/7);
    const auto draws = model.sample(M, rng);
    double acc = 0.0;
    for (int i = 0; i < M; ++i) {
        const auto x = draws.row(i);
        acc += psi(h.p, lambda, s, x, K) * psi(h.p, lambda, t, x, K);
    }
    return acc / M - z_value(h, lambda, s) * z_value(h, lambda, t);
}

double xi_diag(const AlternativeHarmonics& h, int k1, int k2, std::span<const double> s) {
    if (k1 < 0 || k2 < 0) throw std::domain_error("xi_diag: degrees must be >= 0");
    const double u = dot(h.mu, s);
    const int top = k1 + k2;
    std::vector<double> c(static_cast<std::size_t>(top) + 1);
    gegenbauer_all(top, h.p, u, c.data());
    double v = 0.0;
    for (int ell = 0; ell <= std::min(k1, k2); ++ell) {
        const int m = k1 + k2 - 2 * ell;
        const double beta = (m <= h.order()) ? h.beta[m] : 0.0;  // exponentially small tail
        v += linearization_coeff(k1, k2, ell, h.p) * beta * gamma_kp(m, h.p) * c[m];
    }
    return v;
}

double sigma2_rotsym(const AlternativeHarmonics& h, double lambda) {
    const int K = h.order();
    const int p = h.p;
    const auto one = gegenbauer_at_one(2 * K, p);
    std::vector<double> weight(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 1; k <= K; ++k)
        weight[k] = gamma_kp(k, p) * c_kp(k, p, lambda) * h.beta[k];

    // E[C_{k1}(mu'X) C_{k2}(mu'X)] by linearization, evaluated at u = 1.
    double series = 0.0;
    for (int k1 = 1; k1 <= K; ++k1) {
        if (weight[k1] == 0.0) continue;
        for (int k2 = 1; k2 <= K; ++k2) {
            if (weight[k2] == 0.0) continue;
            double xi = 0.0;
            for (int ell = 0; ell <= std::min(k1, k2); ++ell) {
                const int m = k1 + k2 - 2 * ell;
                const double beta = (m <= K) ? h.beta[m] : 0.0;
                if (beta == 0.0) continue;
                xi += linearization_coeff(k1, k2, ell, p) * beta * gamma_kp(m, p) * one[m];
            }
            series += weight[k1] * weight[k2] * xi;
        }
    }
    const double tau = tau_rotsym(h, lambda);
    const double sigma2 = 4.0 * (series - tau * tau);
    if (sigma2 < -1e-8)
        throw std::runtime_error("sigma2_rotsym: negative value, truncation too aggressive");
    return std::max(0.0, sigma2);
}

double power_approx(double c_n, int n, double tau, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("power_approx: sigma must be positive");
    if (n < 1) throw std::domain_error("power_approx: n must be >= 1");
    return 1.0 - normal_cdf(std::sqrt(static_cast<double>(n)) / sigma * (c_n / n - tau));
}

}  // namespace sphstein
