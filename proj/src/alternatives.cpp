#include "sphstein/alternatives.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sphstein/specfun.hpp"

namespace sphstein {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::domain_error(what);
}

std::vector<double> basis_vector(int p, int index1, double sign = 1.0) {
    std::vector<double> e(p, 0.0);
    e[index1 - 1] = sign;
    return e;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// (omega_{p-2}/omega_{p-1}) int_0^pi f(cos t) sin^{p-2} t dt, n-node GL.
double zonal_integral(const std::function<double(double)>& f, int p, int nodes) {
    const auto& rule = gauss_legendre(nodes);
    const double ratio = surface_measure(p - 2 >= 1 ? p - 2 : 1) / surface_measure(p - 1);
    // omega_0 (the 0-sphere counting measure) is 2; surface_measure covers m>=1
    const double w0 = (p == 2) ? 2.0 / surface_measure(1) : ratio;
    double s = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double theta = 0.5 * M_PI * (rule.nodes[i] + 1.0);
        const double st = std::sin(theta);
        s += rule.weights[i] * f(std::cos(theta)) * std::pow(st, p - 2);
    }
    return w0 * 0.5 * M_PI * s;
}

double vmf_constant(int p, double kappa) {
    // kappa^{(p-2)/2} omega_{p-1} / ((2 pi)^{p/2} I_{(p-2)/2}(kappa))
    const double alpha = 0.5 * (p - 2);
    return std::exp(alpha * std::log(kappa)) * surface_measure(p - 1) /
           (std::pow(2.0 * M_PI, 0.5 * p) * bessel_i(alpha, kappa));
}

double cauchy_rho(double kappa) { return (2.0 * kappa + 1.0 - std::sqrt(4.0 * kappa + 1.0)) / (2.0 * kappa); }

constexpr double kProjNormMeanShift = 4.0;
constexpr double kProjNormLastVar = 10.0;

}  // namespace

std::vector<double> rotation_matrix(const RotationPlane& plane, int p) {
    require(p >= 2, "rotation_matrix: p must be >= 2");
    require(plane.i >= 1 && plane.j <= p && plane.i < plane.j,
            "rotation_matrix: need 1 <= i < j <= p");
    std::vector<double> q(static_cast<std::size_t>(p) * p, 0.0);
    for (int d = 0; d < p; ++d) q[static_cast<std::size_t>(d) * p + d] = 1.0;
    const int a = plane.i - 1, b = plane.j - 1;
    const double c = std::cos(plane.alpha), s = std::sin(plane.alpha);
    q[static_cast<std::size_t>(a) * p + a] = c;
    q[static_cast<std::size_t>(a) * p + b] = -s;
    q[static_cast<std::size_t>(b) * p + a] = s;
    q[static_cast<std::size_t>(b) * p + b] = c;
    return q;
}

ZonalSampler::ZonalSampler(const std::function<double(double)>& g, int p) {
    constexpr int kIntervals = 4096;
    theta_.resize(kIntervals + 1);
    cdf_.resize(kIntervals + 1);
    std::vector<double> dens(kIntervals + 1);
    for (int i = 0; i <= kIntervals; ++i) {
        theta_[i] = M_PI * i / kIntervals;
        const double st = std::sin(theta_[i]);
        dens[i] = g(std::cos(theta_[i])) * std::pow(st, p - 2);
        if (!(dens[i] >= 0.0) || !std::isfinite(dens[i]))
            throw std::runtime_error("ZonalSampler: angular density not finite/nonnegative");
    }
    cdf_[0] = 0.0;
    for (int i = 1; i <= kIntervals; ++i)
        cdf_[i] = cdf_[i - 1] + 0.5 * (dens[i - 1] + dens[i]) * (theta_[i] - theta_[i - 1]);
    const double total = cdf_.back();
    if (!(total > 0.0)) throw std::runtime_error("ZonalSampler: angular density integrates to zero");
    for (double& c : cdf_) c /= total;
}

double ZonalSampler::draw_t(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return std::cos(theta_.front());
    if (it == cdf_.end()) return std::cos(theta_.back());
    const std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
    const double c0 = cdf_[hi - 1], c1 = cdf_[hi];
    const double w = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
    return std::cos(theta_[hi - 1] + w * (theta_[hi] - theta_[hi - 1]));
}

void AlternativeModel::finalize_rotsym() {
    normalizer_ = zonal_integral([this](double t) { return angular(t); }, p_, 400);
    if (!(normalizer_ > 0.0) || !std::isfinite(normalizer_))
        throw std::runtime_error("AlternativeModel: angular normalizer is not positive/finite");
    zonal_ = ZonalSampler([this](double t) { return angular(t); }, p_);
}

AlternativeModel AlternativeModel::uniform(int p) {
    require(p >= 2, "uniform: p >= 2");
    AlternativeModel m;
    m.kind_ = AltKind::uniform;
    m.p_ = p;
    return m;
}

AlternativeModel AlternativeModel::vmf(int p, double kappa) {
    require(p >= 2 && kappa > 0.0, "vmf: need p >= 2, kappa > 0");
    AlternativeModel m;
    m.kind_ = AltKind::vmf;
    m.p_ = p;
    m.kappa_ = kappa;
    m.axis_ = basis_vector(p, 1);
    m.finalize_rotsym();
    return m;
}

AlternativeModel AlternativeModel::cauchy_like(int p, double kappa) {
    require(p >= 2 && kappa > 0.0, "cauchy_like: need p >= 2, kappa > 0");
    AlternativeModel m;
    m.kind_ = AltKind::cauchy_like;
    m.p_ = p;
    m.kappa_ = kappa;
    m.axis_ = basis_vector(p, 1);
    m.finalize_rotsym();
    return m;
}

AlternativeModel AlternativeModel::watson(int p, double kappa) {
    require(p >= 2 && kappa > 0.0, "watson: need p >= 2, kappa > 0");
    AlternativeModel m;
    m.kind_ = AltKind::watson;
    m.p_ = p;
    m.kappa_ = kappa;
    m.axis_ = basis_vector(p, 1);
    m.finalize_rotsym();
    return m;
}

AlternativeModel AlternativeModel::small_circle(int p, double kappa, double nu) {
    require(p >= 2 && kappa > 0.0, "small_circle: need p >= 2, kappa > 0");
    require(nu >= 0.0 && nu <= 1.0, "small_circle: nu in [0,1]");
    AlternativeModel m;
    m.kind_ = AltKind::small_circle;
    m.p_ = p;
    m.kappa_ = kappa;
    m.nu_ = nu;
    m.axis_ = basis_vector(p, 1);
    m.finalize_rotsym();
    return m;
}

AlternativeModel AlternativeModel::vmf_mixture_poles(int p, double q) {
    require(p >= 2 && q > 0.0 && q < 1.0, "vmf_mixture_poles: need p >= 2, 0 < q < 1");
    AlternativeModel m;
    m.kind_ = AltKind::vmf_mixture_poles;
    m.p_ = p;
    m.kappa_ = 2.0;
    m.q_ = q;
    m.component_axes_ = {basis_vector(p, 1, +1.0), basis_vector(p, 1, -1.0)};
    m.normalizer_ = zonal_integral([&](double t) { return std::exp(m.kappa_ * t); }, p, 400);
    m.zonal_ = ZonalSampler([&](double t) { return std::exp(m.kappa_ * t); }, p);
    return m;
}

AlternativeModel AlternativeModel::small_circle_mixture(int p, int k) {
    require(p >= 3 && k >= 1, "small_circle_mixture: need p >= 3, k >= 1");
    AlternativeModel m;
    m.kind_ = AltKind::small_circle_mixture;
    m.p_ = p;
    m.kappa_ = 10.0;
    m.nu_ = 0.0;
    m.components_ = k;
    m.axis_ = basis_vector(p, 1);
    for (int j = 1; j <= k; ++j)
        m.rotations_.push_back(rotation_matrix({2, 3, 2.0 * M_PI * j / k}, p));
    m.normalizer_ = zonal_integral([&](double t) { return std::exp(-m.kappa_ * t * t); }, p, 400);
    m.zonal_ = ZonalSampler([&](double t) { return std::exp(-m.kappa_ * t * t); }, p);
    return m;
}

AlternativeModel AlternativeModel::proj_normal_mixture(int p, int k) {
    require(p >= 2 && k >= 1, "proj_normal_mixture: need p >= 2, k >= 1");
    AlternativeModel m;
    m.kind_ = AltKind::proj_normal_mixture;
    m.p_ = p;
    m.components_ = k;
    for (int j = 1; j <= k; ++j)
        m.rotations_.push_back(rotation_matrix({1, 2, 2.0 * M_PI * j / k}, p));
    return m;
}

AlternativeModel AlternativeModel::multi_vmf(int p, double kappa) {
    require(p >= 2 && kappa > 0.0, "multi_vmf: need p >= 2, kappa > 0");
    AlternativeModel m;
    m.kind_ = AltKind::multi_vmf;
    m.p_ = p;
    m.kappa_ = kappa;
    for (int j = 1; j <= p; ++j) {
        m.component_axes_.push_back(basis_vector(p, j, +1.0));
        m.component_axes_.push_back(basis_vector(p, j, -1.0));
    }
    m.normalizer_ = zonal_integral([&](double t) { return std::exp(kappa * t); }, p, 400);
    m.zonal_ = ZonalSampler([&](double t) { return std::exp(kappa * t); }, p);
    return m;
}

bool AlternativeModel::rotationally_symmetric() const {
    switch (kind_) {
        case AltKind::uniform:
        case AltKind::vmf:
        case AltKind::cauchy_like:
        case AltKind::watson:
        case AltKind::small_circle:
            return true;
        default:
            return false;
    }
}

double AlternativeModel::angular(double t) const {
    switch (kind_) {
        case AltKind::uniform:
            return 1.0;
        case AltKind::vmf:
            return std::exp(kappa_ * t);
        case AltKind::cauchy_like: {
            // Poisson-kernel profile; the mean resultant length equals rho.
            const double rho = cauchy_rho(kappa_);
            return std::pow((1.0 - rho * rho) / (1.0 - 2.0 * t * rho + rho * rho), 0.5 * p_);
        }
        case AltKind::watson:
            return std::exp(kappa_ * t * t);
        case AltKind::small_circle:
            return std::exp(-kappa_ * (t - nu_) * (t - nu_));
        default:
            throw std::domain_error("angular: model is not rotationally symmetric");
    }
}

double AlternativeModel::angular_normalizer() const {
    if (!rotationally_symmetric()) throw std::domain_error("angular_normalizer: not rot-sym");
    return kind_ == AltKind::uniform ? 1.0 : normalizer_;
}

namespace {

// Density of the normalized Gaussian N(shift e1, diag(1,..,1,last_var)) push
// forward onto the sphere, w.r.t. nu_{p-1}.
double proj_normal_density(std::span<const double> x, int p) {
    double a = 0.0, b = 0.0;
    for (int d = 0; d < p; ++d) {
        const double inv = (d == p - 1) ? 1.0 / kProjNormLastVar : 1.0;
        a += x[d] * inv * x[d];
        b += x[d] * inv * ((d == 0) ? kProjNormMeanShift : 0.0);
    }
    const double c = kProjNormMeanShift * kProjNormMeanShift;  // m' Sigma^{-1} m, m = 4 e1
    const double r_star = b / a;
    const double width = 1.0 / std::sqrt(a);
    const double lo = std::max(0.0, r_star - 12.0 * width);
    const double hi = std::max(lo + 24.0 * width, r_star + 12.0 * width);
    const auto& rule = gauss_legendre(200);
    // factor exp(-q_min) out of the integral to keep the exponent small
    const double q0 = 0.5 * (a * r_star * r_star - 2.0 * b * r_star + c);
    const double q_min = (r_star >= lo) ? q0 : 0.5 * (a * lo * lo - 2.0 * b * lo + c);
    double integral = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double r = 0.5 * (hi - lo) * (rule.nodes[i] + 1.0) + lo;
        const double q = 0.5 * (a * r * r - 2.0 * b * r + c);
        integral += rule.weights[i] * std::pow(r, p - 1) * std::exp(q_min - q);
    }
    integral *= 0.5 * (hi - lo);
    const double log_norm = std::log(surface_measure(p - 1)) - 0.5 * p * std::log(2.0 * M_PI) -
                            0.5 * std::log(kProjNormLastVar);
    return std::exp(log_norm - q_min) * integral;
}

}  // namespace

double AlternativeModel::density(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == p_, "density: point dimension mismatch");
    switch (kind_) {
        case AltKind::uniform:
            return 1.0;
        case AltKind::vmf:
            return vmf_constant(p_, kappa_) * std::exp(kappa_ * dot(axis_, x));
        case AltKind::cauchy_like:
        case AltKind::watson:
        case AltKind::small_circle:
            return angular(dot(axis_, x)) / normalizer_;
        case AltKind::vmf_mixture_poles: {
            const double c = vmf_constant(p_, kappa_);
            const double t = x[0];  // axis is e1
            return (1.0 - q_) * c * std::exp(kappa_ * t) + q_ * c * std::exp(-kappa_ * t);
        }
        case AltKind::small_circle_mixture: {
            double s = 0.0;
            std::vector<double> y(p_);
            for (const auto& rot : rotations_) {
                // f(R(-alpha) x): apply the transpose of the stored rotation
                for (int r = 0; r < p_; ++r) {
                    double v = 0.0;
                    for (int c = 0; c < p_; ++c) v += rot[static_cast<std::size_t>(c) * p_ + r] * x[c];
                    y[r] = v;
                }
                s += std::exp(-kappa_ * y[0] * y[0]) / normalizer_;
            }
            return s / components_;
        }
        case AltKind::proj_normal_mixture: {
            double s = 0.0;
            std::vector<double> y(p_);
            for (const auto& rot : rotations_) {
                for (int r = 0; r < p_; ++r) {
                    double v = 0.0;
                    for (int c = 0; c < p_; ++c) v += rot[static_cast<std::size_t>(c) * p_ + r] * x[c];
                    y[r] = v;
                }
                s += proj_normal_density(y, p_);
            }
            return s / components_;
        }
        case AltKind::multi_vmf: {
            const double c = vmf_constant(p_, kappa_);
            double s = 0.0;
            for (const auto& mu : component_axes_) s += c * std::exp(kappa_ * dot(mu, x));
            return s / static_cast<double>(component_axes_.size());
        }
    }
    throw std::logic_error("density: unreachable");
}

namespace {

// Completes the tangent-normal decomposition x = t mu + sqrt(1-t^2) xi.
void tangent_normal_point(std::span<const double> mu, double t, std::mt19937_64& rng, double* out,
                          int p) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double nrm = 0.0;
    do {
        for (int d = 0; d < p; ++d) out[d] = gauss(rng);
        double proj = 0.0;
        for (int d = 0; d < p; ++d) proj += out[d] * mu[d];
        nrm = 0.0;
        for (int d = 0; d < p; ++d) {
            out[d] -= proj * mu[d];
            nrm += out[d] * out[d];
        }
    } while (nrm == 0.0);
    nrm = std::sqrt(nrm);
    const double scale = std::sqrt(std::max(0.0, 1.0 - t * t)) / nrm;
    for (int d = 0; d < p; ++d) out[d] = t * mu[d] + scale * out[d];
    // one renormalization pass kills accumulated roundoff
    nrm = 0.0;
    for (int d = 0; d < p; ++d) nrm += out[d] * out[d];
    nrm = std::sqrt(nrm);
    for (int d = 0; d < p; ++d) out[d] /= nrm;
}

}  // namespace

SampleSet AlternativeModel::sample(int n, std::mt19937_64& rng) const {
    require(n >= 1, "sample: n >= 1");
    if (kind_ == AltKind::uniform) return uniform_sample(n, p_, rng);
    std::vector<double> data(static_cast<std::size_t>(n) * p_);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, components_ - 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        double* x = data.data() + static_cast<std::size_t>(i) * p_;
        switch (kind_) {
            case AltKind::vmf:
            case AltKind::cauchy_like:
            case AltKind::watson:
            case AltKind::small_circle:
                tangent_normal_point(axis_, zonal_.draw_t(rng), rng, x, p_);
                break;
            case AltKind::vmf_mixture_poles: {
                const auto& mu = component_axes_[unif(rng) < q_ ? 1 : 0];
                tangent_normal_point(mu, zonal_.draw_t(rng), rng, x, p_);
                break;
            }
            case AltKind::multi_vmf: {
                std::uniform_int_distribution<int> pick_axis(0, static_cast<int>(component_axes_.size()) - 1);
                tangent_normal_point(component_axes_[pick_axis(rng)], zonal_.draw_t(rng), rng, x, p_);
                break;
            }
            case AltKind::small_circle_mixture: {
                const auto& rot = rotations_[pick(rng)];
                std::vector<double> z(p_);
                tangent_normal_point(axis_, zonal_.draw_t(rng), rng, z.data(), p_);
                for (int r = 0; r < p_; ++r) {
                    double v = 0.0;
                    for (int c = 0; c < p_; ++c) v += rot[static_cast<std::size_t>(r) * p_ + c] * z[c];
                    x[r] = v;
                }
                break;
            }
            case AltKind::proj_normal_mixture: {
                const auto& rot = rotations_[pick(rng)];
                std::vector<double> y(p_);
                for (int d = 0; d < p_; ++d) {
                    const double sd = (d == p_ - 1) ? std::sqrt(kProjNormLastVar) : 1.0;
                    y[d] = ((d == 0) ? kProjNormMeanShift : 0.0) + sd * gauss(rng);
                }
                double nrm = 0.0;
                for (int d = 0; d < p_; ++d) nrm += y[d] * y[d];
                nrm = std::sqrt(nrm);
                for (int r = 0; r < p_; ++r) {
                    double v = 0.0;
                    for (int c = 0; c < p_; ++c) v += rot[static_cast<std::size_t>(r) * p_ + c] * y[c];
                    x[r] = v / nrm;
                }
                break;
            }
            default:
                throw std::logic_error("sample: unreachable");
        }
    }
    return SampleSet(n, p_, std::move(data));
}

namespace {

std::string trim_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::string AlternativeModel::label() const {
    switch (kind_) {
        case AltKind::uniform: return "Unif";
        case AltKind::vmf: return "vMF(" + trim_number(kappa_) + ")";
        case AltKind::cauchy_like: return "Ca(" + trim_number(kappa_) + ")";
        case AltKind::watson: return "W(" + trim_number(kappa_) + ")";
        case AltKind::small_circle:
            return "SC(" + trim_number(kappa_) + "," + trim_number(nu_) + ")";
        case AltKind::vmf_mixture_poles: return "vMFM(" + trim_number(q_) + ")";
        case AltKind::small_circle_mixture: return "SCM(" + std::to_string(components_) + ")";
        case AltKind::proj_normal_mixture: return "projNM(" + std::to_string(components_) + ")";
        case AltKind::multi_vmf: return "MvMF(" + trim_number(kappa_) + ")";
    }
    return "?";
}

AlternativeModel AlternativeModel::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    const int p = j.at("p").get<int>();
    if (kind == "uniform") return uniform(p);
    if (kind == "vmf") return vmf(p, j.at("kappa").get<double>());
    if (kind == "cauchy") return cauchy_like(p, j.at("kappa").get<double>());
    if (kind == "watson") return watson(p, j.at("kappa").get<double>());
    if (kind == "small_circle")
        return small_circle(p, j.at("kappa").get<double>(), j.at("nu").get<double>());
    if (kind == "vmfm") return vmf_mixture_poles(p, j.at("q").get<double>());
    if (kind == "scm") return small_circle_mixture(p, j.at("components").get<int>());
    if (kind == "projnm") return proj_normal_mixture(p, j.at("components").get<int>());
    if (kind == "mvmf") return multi_vmf(p, j.at("kappa").get<double>());
    throw std::domain_error("from_json: unknown alternative kind '" + kind + "'");
}

std::string AlternativeModel::to_json() const {
    nlohmann::json j;
    j["p"] = p_;
    switch (kind_) {
        case AltKind::uniform: j["kind"] = "uniform"; break;
        case AltKind::vmf: j["kind"] = "vmf"; j["kappa"] = kappa_; break;
        case AltKind::cauchy_like: j["kind"] = "cauchy"; j["kappa"] = kappa_; break;
        case AltKind::watson: j["kind"] = "watson"; j["kappa"] = kappa_; break;
        case AltKind::small_circle:
            j["kind"] = "small_circle"; j["kappa"] = kappa_; j["nu"] = nu_; break;
        case AltKind::vmf_mixture_poles: j["kind"] = "vmfm"; j["q"] = q_; break;
        case AltKind::small_circle_mixture:
            j["kind"] = "scm"; j["components"] = components_; break;
        case AltKind::proj_normal_mixture:
            j["kind"] = "projnm"; j["components"] = components_; break;
        case AltKind::multi_vmf: j["kind"] = "mvmf"; j["kappa"] = kappa_; break;
    }
    return j.dump();
}

double beta_k_vmf(int k, int p, double kappa) {
    require(k >= 0 && p >= 2 && kappa > 0.0, "beta_k_vmf: bad arguments");
    return vmf_constant(p, kappa) * m_kp(k, p, kappa);
}

double beta_k_numeric(const std::function<double(double)>& g, int k, int p) {
    require(k >= 0 && p >= 2, "beta_k_numeric: bad arguments");
    const double z = zonal_integral(g, p, 400);
    if (!(z > 0.0)) throw std::runtime_error("beta_k_numeric: profile integrates to zero");
    auto project = [&](int nodes) {
        const double num = zonal_integral(
            [&](double t) { return g(t) * gegenbauer(k, p, t) / z; }, p, nodes);
        return num / (gamma_kp(k, p) * gegenbauer(k, p, 1.0));
    };
    const double coarse = project(200);
    const double fine = project(400);
    const double scale = std::max({std::abs(coarse), std::abs(fine), 1e-300});
    if (std::abs(fine - coarse) > 1e-8 * scale && std::abs(fine - coarse) > 1e-13)
        throw std::runtime_error("beta_k_numeric: quadrature did not converge on node doubling");
    return fine;
}

std::vector<double> beta_all(const AlternativeModel& model, int K) {
    if (!model.rotationally_symmetric())
        throw std::domain_error("beta_all: model is not rotationally symmetric");
    std::vector<double> betas(static_cast<std::size_t>(K) + 1, 0.0);
    if (model.kind() == AltKind::uniform) {
        betas[0] = 1.0;
        return betas;
    }
    if (model.kind() == AltKind::vmf) {
        for (int k = 0; k <= K; ++k) betas[k] = beta_k_vmf(k, model.p(), model.kappa());
        return betas;
    }
    for (int k = 0; k <= K; ++k)
        betas[k] = beta_k_numeric([&](double t) { return model.angular(t); }, k, model.p());
    return betas;
}

}  // namespace sphstein
