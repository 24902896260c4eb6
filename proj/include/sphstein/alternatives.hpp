#ifndef SPHSTEIN_ALTERNATIVES_HPP
#define SPHSTEIN_ALTERNATIVES_HPP

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sphstein/sample.hpp"

namespace sphstein {

struct RotationPlane {
    int i = 1;  // 1-based axis indices, i < j
    int j = 2;
    double alpha = 0.0;
};

// Identity except for the 2x2 rotation block on rows/columns (i, j).
std::vector<double> rotation_matrix(const RotationPlane& plane, int p);

enum class AltKind {
    uniform,
    vmf,
    cauchy_like,
    watson,
    small_circle,
    vmf_mixture_poles,
    small_circle_mixture,
    proj_normal_mixture,
    multi_vmf,
};

// Inverse-CDF sampler for the axial coordinate t of a rotationally symmetric
// law: density of t is proportional to g(t) (1-t^2)^{(p-3)/2}, handled on a
// 4096-interval theta grid (t = cos theta) where the weight is smooth.
class ZonalSampler {
  public:
    ZonalSampler() = default;
    ZonalSampler(const std::function<double(double)>& g, int p);
    double draw_t(std::mt19937_64& rng) const;

  private:
    std::vector<double> theta_;
    std::vector<double> cdf_;
};

// A sampleable distribution on S^{p-1} with density w.r.t. the uniform
// probability measure. Construction precomputes normalizers and inverse-CDF
// grids; instances are immutable afterwards.
class AlternativeModel {
  public:
    static AlternativeModel uniform(int p);
    static AlternativeModel vmf(int p, double kappa);
    static AlternativeModel cauchy_like(int p, double kappa);
    static AlternativeModel watson(int p, double kappa);
    static AlternativeModel small_circle(int p, double kappa, double nu);
    static AlternativeModel vmf_mixture_poles(int p, double q);      // vMF(2, +-e1)
    static AlternativeModel small_circle_mixture(int p, int k);      // k copies of SC(10,0)
    static AlternativeModel proj_normal_mixture(int p, int k);       // k rotated projected normals
    static AlternativeModel multi_vmf(int p, double kappa);          // 2p vMF at +-e_j

    static AlternativeModel from_json(const std::string& text);
    std::string to_json() const;
    std::string label() const;

    AltKind kind() const { return kind_; }
    int p() const { return p_; }
    double kappa() const { return kappa_; }
    double nu() const { return nu_; }
    double mix_q() const { return q_; }
    int components() const { return components_; }

    double density(std::span<const double> x) const;
    SampleSet sample(int n, std::mt19937_64& rng) const;

    bool rotationally_symmetric() const;
    // Unnormalized angular profile g and its normalizer Z such that
    // g(mu'x)/Z integrates to one against nu_{p-1}; rot-sym kinds only.
    double angular(double t) const;
    double angular_normalizer() const;
    std::span<const double> axis() const { return axis_; }

  private:
    AlternativeModel() = default;
    void finalize_rotsym();

    AltKind kind_ = AltKind::uniform;
    int p_ = 0;
    double kappa_ = 0.0;
    double nu_ = 0.0;
    double q_ = 0.0;
    int components_ = 1;
    std::vector<double> axis_;
    double normalizer_ = 1.0;
    ZonalSampler zonal_;
    std::vector<std::vector<double>> rotations_;      // per mixture component
    std::vector<std::vector<double>> component_axes_; // multi_vmf / vmf mixture
};

// Closed-form Gegenbauer coefficient of the vMF density.
double beta_k_vmf(int k, int p, double kappa);

// Projection coefficient beta_k of the normalized angular profile onto C_k in
// L^{2,p}, by Gauss-Legendre quadrature in the theta variable. Node doubling
// must move the value by less than 1e-8 relative, else throws.
double beta_k_numeric(const std::function<double(double)>& g, int k, int p);

// beta_0..beta_K for a rotationally symmetric model (closed form for vMF).
std::vector<double> beta_all(const AlternativeModel& model, int K);

}  // namespace sphstein

#endif
