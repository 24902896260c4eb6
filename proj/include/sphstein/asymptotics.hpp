#ifndef SPHSTEIN_ASYMPTOTICS_HPP
#define SPHSTEIN_ASYMPTOTICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sphstein/alternatives.hpp"

namespace sphstein {

// Gegenbauer coefficients beta_0..beta_K of a rotationally symmetric density
// about the axis mu.
struct AlternativeHarmonics {
    int p = 0;
    std::vector<double> beta;  // beta[k], k = 0..K
    std::vector<double> mu;

    int order() const { return static_cast<int>(beta.size()) - 1; }
};

// Builds harmonics for a rotationally symmetric model (vMF closed form, else
// quadrature projection).
AlternativeHarmonics harmonics_for(const AlternativeModel& model, int K);

// Standard normal CDF through erfc.
double normal_cdf(double x);

// Mean field z(s) = sum_k beta_k m_k gamma_k (-k)(k+p-2) C_k(mu's).
double z_value(const AlternativeHarmonics& h, double lambda, std::span<const double> s);

// Almost-sure limit of T_n/n: sum_k (beta_k gamma_k)^2 c_k C_k(1).
double tau_rotsym(const AlternativeHarmonics& h, double lambda);

// Psi(t, x) = sum_k m_k (-k)(k+p-2) C_k(t'x), truncated at K.
double psi(int p, double lambda, std::span<const double> t, std::span<const double> x, int K);

// Null covariance kernel K(s,t) = sum_k c_k C_k(s't), truncated at K.
double kernel_K(int p, double lambda, double dot, int K);

// Monte Carlo estimate of the fixed-alternative covariance kernel
// K'(s,t) = E[Psi(s,X) Psi(t,X)] - z(s) z(t) over M model draws.
double kernel_Kprime_mc(const AlternativeHarmonics& h, const AlternativeModel& model,
                        double lambda, std::span<const double> s, std::span<const double> t, int M,
                        std::uint64_t seed);

// Closed form xi_{k1,k2}(s,s) = E[C_{k1}(s'X) C_{k2}(s'X)] through the
// linearization formula.
double xi_diag(const AlternativeHarmonics& h, int k1, int k2, std::span<const double> s);

// Asymptotic variance of sqrt(n)(T_n/n - tau) via the linearized double
// series; truncation shared with the harmonics order.
double sigma2_rotsym(const AlternativeHarmonics& h, double lambda);

// Power approximation 1 - Phi(sqrt(n)/sigma (c_n/n - tau)).
double power_approx(double c_n, int n, double tau, double sigma);

}  // namespace sphstein

#endif
