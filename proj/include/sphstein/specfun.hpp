#ifndef SPHSTEIN_SPECFUN_HPP
#define SPHSTEIN_SPECFUN_HPP

#include <cstdint>
#include <vector>

// Special functions and combinatorial constants for Gegenbauer expansions on
// the sphere S^{p-1}. Everything here is a pure function of its arguments.

namespace sphstein {

// Natural log of the gamma function, x > 0.
double log_gamma(double x);

// Modified Bessel function of the first kind I_nu(x) via the ascending power
// series, nu >= 0, 0 < x <= 700. Terms are added until they fall below
// 1e-16 times the running sum.
double bessel_i(double nu, double x);

// Gegenbauer polynomial C_k^{(p-2)/2}(u) on [-1,1]. For p = 2 this is the
// Chebyshev branch cos(k acos u).
double gegenbauer(int k, int p, double u);

// Fills out[0..k_max] with C_0..C_{k_max} at u using the three-term
// recurrence (Chebyshev recurrence when p = 2).
void gegenbauer_all(int k_max, int p, double u, double* out);

// C_k^{(p-2)/2}(1) for k = 0..k_max.
std::vector<double> gegenbauer_at_one(int k_max, int p);

// gamma_{k,p}: (1 + 1{k=0})/2 for p = 2, (p-2)/(2k+p-2) for p > 2.
double gamma_kp(int k, int p);

// Dimension of the degree-k space of spherical harmonics on S^{p-1}:
// binom(p+k-3, p-2) + binom(p+k-2, p-2), exact integer arithmetic.
std::int64_t dim_kp(int k, int p);

// Surface measure omega_m = 2 pi^{(m+1)/2} / Gamma((m+1)/2) of S^m.
double surface_measure(int m);

// Gegenbauer coefficient m_{k,p}(lambda) of the expansion of e^{lambda u}.
double m_kp(int k, int p, double lambda);

// Linearization coefficient L^{(p)}_{k1,k2}(ell) in
//   C_{k1} C_{k2} = sum_ell L(ell) C_{k1+k2-2 ell},  0 <= ell <= min(k1,k2).
double linearization_coeff(int k1, int k2, int ell, int p);

// Gauss-Legendre nodes/weights on [-1,1]; results are cached per n.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const QuadratureRule& gauss_legendre(int n);

}  // namespace sphstein

#endif
