#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "sphstein/specfun.hpp"

using namespace sphstein;

namespace {

// <f, g>_{L^{2,p}} evaluated in the theta variable, where the weight
// (1-u^2)^{(p-3)/2} du becomes sin^{p-2}(theta) dtheta.
double inner_l2p(const std::function<double(double)>& f, const std::function<double(double)>& g,
                 int p, int nodes = 400) {
    const auto& rule = gauss_legendre(nodes);
    double s = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double theta = 0.5 * M_PI * (rule.nodes[i] + 1.0);
        const double u = std::cos(theta);
        s += rule.weights[i] * f(u) * g(u) * std::pow(std::sin(theta), p - 2);
    }
    return 0.5 * M_PI * s;
}

// I_1(1) by an extended-precision brute-force series.
long double bessel_i11_reference() {
    long double term = 0.5L;  // m = 0: (1/2)^1 / (0! 1!)
    long double sum = term;
    for (int m = 1; m <= 200; ++m) {
        term *= 0.25L / (static_cast<long double>(m) * (m + 1));
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_SUITE_BEGIN("specfun");

TEST_CASE("log_gamma matches known values") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(log_gamma(0.5) == doctest::Approx(std::log(std::sqrt(M_PI))).epsilon(1e-13));
    CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-13));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("log_gamma stays within 1e-12 relative of libm on [0.5, 200]") {
    for (double x = 0.5; x <= 200.0; x += 0.7) {
        const double ours = log_gamma(x);
        const double ref = std::lgamma(x);
        CHECK(std::abs(ours - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("bessel_i basic values") {
    CHECK(bessel_i(0.0, 1e-14) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bessel_i(0.5, 1.0) ==
          doctest::Approx(std::sqrt(2.0 / M_PI) * std::sinh(1.0)).epsilon(1e-12));
    CHECK(bessel_i(1.0, 1.0) ==
          doctest::Approx(static_cast<double>(bessel_i11_reference())).epsilon(1e-13));
    CHECK_THROWS_AS(bessel_i(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_i(0.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_i(0.0, 800.0), std::range_error);
}

TEST_CASE("bessel_i agrees with the standard library on the working range") {
    for (double nu : {0.0, 0.5, 1.0, 2.5, 7.0, 15.5}) {
        for (double x : {0.1, 0.5, 1.0, 4.0, 15.0, 60.0}) {
            const double ref = std::cyl_bessel_i(nu, x);
            CHECK(bessel_i(nu, x) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("bessel recurrence I_{v-1} - I_{v+1} = (2v/x) I_v") {
    for (double nu : {1.0, 2.5, 6.0}) {
        for (double x : {0.3, 2.0, 11.0, 45.0}) {
            const double lhs = bessel_i(nu - 1.0, x) - bessel_i(nu + 1.0, x);
            const double rhs = 2.0 * nu / x * bessel_i(nu, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("gegenbauer low-order values") {
    CHECK(gegenbauer(0, 5, 0.3) == 1.0);
    CHECK(gegenbauer(1, 3, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(gegenbauer(2, 3, 0.5) == doctest::Approx(-0.125).epsilon(1e-14));
    CHECK(gegenbauer(3, 2, 0.2) == doctest::Approx(std::cos(3.0 * std::acos(0.2))).epsilon(1e-13));
    CHECK_THROWS_AS(gegenbauer(2, 3, 1.5), std::domain_error);
}

TEST_CASE("gegenbauer_all matches the scalar evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int p : {2, 3, 4, 5}) {
        for (int rep = 0; rep < 20; ++rep) {
            const double u = unif(rng);
            double buf[13];
            gegenbauer_all(12, p, u, buf);
            for (int k = 0; k <= 12; ++k)
                CHECK(buf[k] == doctest::Approx(gegenbauer(k, p, u)).epsilon(1e-11));
        }
    }
}

TEST_CASE("gamma_kp branches") {
    CHECK(gamma_kp(0, 2) == 1.0);
    CHECK(gamma_kp(3, 2) == 0.5);
    CHECK(gamma_kp(1, 3) == doctest::Approx(1.0 / 3.0));
    CHECK(gamma_kp(2, 4) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("dim_kp closed forms") {
    CHECK(dim_kp(0, 2) == 1);
    CHECK(dim_kp(0, 7) == 1);
    for (int k = 1; k <= 12; ++k) CHECK(dim_kp(k, 2) == 2);
    for (int k = 0; k <= 10; ++k) CHECK(dim_kp(k, 3) == 2 * k + 1);
    CHECK(dim_kp(1, 5) == 5);
    CHECK_THROWS_AS(dim_kp(400, 150), std::range_error);
}

TEST_CASE("dim_kp gamma identity d_k gamma_k = C_k(1)") {
    for (int p : {2, 3, 4, 5, 7}) {
        const auto one = gegenbauer_at_one(12, p);
        for (int k = 1; k <= 12; ++k)
            CHECK(static_cast<double>(dim_kp(k, p)) * gamma_kp(k, p) ==
                  doctest::Approx(one[k]).epsilon(1e-12));
    }
}

TEST_CASE("surface_measure") {
    CHECK(surface_measure(1) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
    CHECK(surface_measure(2) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
    CHECK(surface_measure(3) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));
}

TEST_CASE("m_kp branches and the quadrature oracle") {
    CHECK(m_kp(0, 2, 1.3) == doctest::Approx(bessel_i(0, 1.3)).epsilon(1e-13));
    CHECK(m_kp(3, 4, 1e-12) == doctest::Approx(0.0).epsilon(1e-20));
    for (int p : {2, 3, 4, 6}) {
        for (int k : {0, 1, 2, 5}) {
            for (double lambda : {0.5, 1.5, 4.0}) {
                auto f = [&](double u) { return std::exp(lambda * u); };
                auto ck = [&](double u) { return gegenbauer(k, p, u); };
                const double oracle = inner_l2p(f, ck, p) / inner_l2p(ck, ck, p);
                CHECK(m_kp(k, p, lambda) == doctest::Approx(oracle).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("linearization coefficients") {
    CHECK(linearization_coeff(4, 0, 0, 5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(linearization_coeff(1, 1, 0, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(linearization_coeff(1, 1, 1, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(linearization_coeff(2, 3, 2, 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(linearization_coeff(2, 3, 3, 3), std::domain_error);
}

TEST_CASE("linearization product identity") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int p : {2, 3, 4, 5}) {
        for (int k1 = 0; k1 <= 6; ++k1) {
            for (int k2 = 0; k2 <= 6; ++k2) {
                for (int rep = 0; rep < 50; ++rep) {
                    const double u = unif(rng);
                    const double product = gegenbauer(k1, p, u) * gegenbauer(k2, p, u);
                    double expansion = 0.0;
                    for (int ell = 0; ell <= std::min(k1, k2); ++ell)
                        expansion += linearization_coeff(k1, k2, ell, p) *
                                     gegenbauer(k1 + k2 - 2 * ell, p, u);
                    CHECK(std::abs(product - expansion) <=
                          1e-9 * std::max(1.0, std::abs(product)));
                }
            }
        }
    }
}

TEST_CASE("gegenbauer orthogonality under the L^{2,p} weight") {
    for (int p : {2, 3, 4, 5}) {
        std::vector<double> norms(11);
        for (int k = 0; k <= 10; ++k) {
            auto ck = [&](double u) { return gegenbauer(k, p, u); };
            norms[k] = inner_l2p(ck, ck, p);
        }
        for (int j = 0; j <= 10; ++j) {
            for (int k = j + 1; k <= 10; ++k) {
                auto cj = [&](double u) { return gegenbauer(j, p, u); };
                auto ck = [&](double u) { return gegenbauer(k, p, u); };
                const double cross = inner_l2p(cj, ck, p) / std::sqrt(norms[j] * norms[k]);
                CHECK(std::abs(cross) <= 1e-10);
            }
        }
    }
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    const auto& rule = gauss_legendre(12);
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 8);
    CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
    double w = 0.0;
    for (double v : rule.weights) w += v;
    CHECK(w == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_SUITE_END();
