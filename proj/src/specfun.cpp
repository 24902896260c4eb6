#include "sphstein/specfun.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace sphstein {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

}  // namespace

double log_gamma(double x) {
    require(std::isfinite(x) && x > 0.0, "log_gamma: x must be positive and finite");
    // Lanczos approximation, g = 7, 9 coefficients.
    static const double coef[9] = {
        0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
        771.32342877765313,    -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection keeps the series argument away from the poles
        return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
    }
    double z = x - 1.0;
    double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (z + i);
    double t = z + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double bessel_i(double nu, double x) {
    require(std::isfinite(nu) && nu >= 0.0, "bessel_i: order must be >= 0");
    require(std::isfinite(x) && x >= 0.0, "bessel_i: argument must be >= 0");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x > 700.0) {
        std::ostringstream os;
        os << "bessel_i: argument " << x << " exceeds supported range (<= 700)";
        throw std::range_error(os.str());
    }
    // I_nu(x) = sum_m (x/2)^{nu+2m} / (m! Gamma(nu+m+1)); the prefactor is
    // assembled in log space, successive terms by recursion.
    const double h = 0.5 * x;
    double term = std::exp(nu * std::log(h) - log_gamma(nu + 1.0));
    double sum = term;
    const double h2 = h * h;
    for (int m = 1; m < 4000; ++m) {
        term *= h2 / (static_cast<double>(m) * (nu + m));
        sum += term;
        if (term < 1e-16 * sum) return sum;
    }
    return sum;
}

double gegenbauer(int k, int p, double u) {
    require(k >= 0, "gegenbauer: degree must be >= 0");
    require(p >= 2, "gegenbauer: dimension must be >= 2");
    require(std::abs(u) <= 1.0 + 1e-12, "gegenbauer: |u| must be <= 1");
    u = std::clamp(u, -1.0, 1.0);
    if (k == 0) return 1.0;
    if (p == 2) return std::cos(k * std::acos(u));
    const double alpha = 0.5 * (p - 2);
    double c0 = 1.0;
    double c1 = 2.0 * alpha * u;
    if (k == 1) return c1;
    double ck = c1;
    for (int j = 2; j <= k; ++j) {
        ck = (2.0 * u * (j + alpha - 1.0) * c1 - (j + 2.0 * alpha - 2.0) * c0) / j;
        c0 = c1;
        c1 = ck;
    }
    return ck;
}

void gegenbauer_all(int k_max, int p, double u, double* out) {
    require(k_max >= 0, "gegenbauer_all: k_max must be >= 0");
    require(p >= 2, "gegenbauer_all: dimension must be >= 2");
    require(std::abs(u) <= 1.0 + 1e-12, "gegenbauer_all: |u| must be <= 1");
    u = std::clamp(u, -1.0, 1.0);
    out[0] = 1.0;
    if (k_max == 0) return;
    if (p == 2) {
        out[1] = u;
        for (int k = 2; k <= k_max; ++k) out[k] = 2.0 * u * out[k - 1] - out[k - 2];
        return;
    }
    const double alpha = 0.5 * (p - 2);
    out[1] = 2.0 * alpha * u;
    for (int k = 2; k <= k_max; ++k)
        out[k] = (2.0 * u * (k + alpha - 1.0) * out[k - 1] - (k + 2.0 * alpha - 2.0) * out[k - 2]) / k;
}

std::vector<double> gegenbauer_at_one(int k_max, int p) {
    require(k_max >= 0 && p >= 2, "gegenbauer_at_one: bad arguments");
    std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 1.0);
    if (p == 2) return out;  // cos(k * 0) = 1
    const double two_alpha = static_cast<double>(p - 2);
    for (int k = 1; k <= k_max; ++k)
        out[k] = out[k - 1] * (two_alpha + k - 1.0) / k;  // C_k(1) = (2a)_k / k!
    return out;
}

double gamma_kp(int k, int p) {
    require(k >= 0, "gamma_kp: k must be >= 0");
    require(p >= 2, "gamma_kp: p must be >= 2");
    if (p == 2) return k == 0 ? 1.0 : 0.5;
    return static_cast<double>(p - 2) / (2.0 * k + p - 2.0);
}

namespace {

std::int64_t binom_checked(std::int64_t n, std::int64_t r) {
    if (n < 0 || r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::int64_t out = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        // out * (n - r + i) may overflow; go through 128 bits
        __int128 t = static_cast<__int128>(out) * (n - r + i);
        t /= i;
        if (t > INT64_MAX) throw std::range_error("dim_kp: result exceeds 64-bit range");
        out = static_cast<std::int64_t>(t);
    }
    return out;
}

}  // namespace

std::int64_t dim_kp(int k, int p) {
    require(k >= 0, "dim_kp: k must be >= 0");
    require(p >= 2, "dim_kp: p must be >= 2");
    std::int64_t a = binom_checked(p + k - 3, p - 2);
    std::int64_t b = binom_checked(p + k - 2, p - 2);
    if (a > INT64_MAX - b) throw std::range_error("dim_kp: result exceeds 64-bit range");
    return a + b;
}

double surface_measure(int m) {
    require(m >= 1, "surface_measure: m must be >= 1");
    const double half = 0.5 * (m + 1);
    return 2.0 * std::exp(half * std::log(M_PI) - log_gamma(half));
}

double m_kp(int k, int p, double lambda) {
    require(k >= 0, "m_kp: k must be >= 0");
    require(p >= 2, "m_kp: p must be >= 2");
    require(std::isfinite(lambda) && lambda > 0.0, "m_kp: lambda must be positive");
    if (p == 2) return (k == 0 ? 1.0 : 2.0) * bessel_i(k, lambda);
    const double alpha = 0.5 * (p - 2);
    const double pre = std::exp(alpha * (std::log(2.0) - std::log(lambda)) + log_gamma(alpha));
    return pre * (k + alpha) * bessel_i(alpha + k, lambda);
}

namespace {

// log of the Pochhammer symbol (a)_m for a > 0, m >= 0
double log_poch(double a, int m) {
    if (m == 0) return 0.0;
    return log_gamma(a + m) - log_gamma(a);
}

}  // namespace

double linearization_coeff(int k1, int k2, int ell, int p) {
    require(k1 >= 0 && k2 >= 0, "linearization_coeff: degrees must be >= 0");
    require(p >= 2, "linearization_coeff: p must be >= 2");
    if (ell < 0 || ell > std::min(k1, k2))
        throw std::domain_error("linearization_coeff: ell out of range");
    if (p == 2) {
        double v = 0.0;
        if (ell == 0) v += 0.5;
        if (ell == std::min(k1, k2)) v += 0.5;
        return v;
    }
    const double a = 0.5 * (p - 2);
    const double s = k1 + k2;
    double lg = log_gamma(s - 2.0 * ell + 1.0)  // (k1+k2-2l)!
                - log_gamma(ell + 1.0) - log_gamma(k1 - ell + 1.0) - log_gamma(k2 - ell + 1.0)
                + log_poch(a, ell) + log_poch(a, k1 - ell) + log_poch(a, k2 - ell)
                + log_poch(2.0 * a, k1 + k2 - ell)
                - log_poch(a, k1 + k2 - ell) - log_poch(2.0 * a, k1 + k2 - 2 * ell);
    const double ratio = (s + a - 2.0 * ell) / (s + a - ell);
    return ratio * std::exp(lg);
}

const QuadratureRule& gauss_legendre(int n) {
    if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
    static std::mutex mu;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration from the Chebyshev-angle initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    auto [pos, inserted] = cache.emplace(n, std::move(rule));
    (void)inserted;
    return pos->second;
}

}  // namespace sphstein
