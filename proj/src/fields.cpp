#include "sphstein/fields.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sphstein/alternatives.hpp"
#include "sphstein/asymptotics.hpp"
#include "sphstein/parallel.hpp"
#include "sphstein/rng.hpp"
#include "sphstein/specfun.hpp"
#include "sphstein/statistic.hpp"

namespace sphstein {

namespace {

constexpr int kFieldOrder = 100;

std::vector<double> unit(std::vector<double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    if (!(s > 0.0)) throw std::domain_error("fields: zero direction vector");
    s = std::sqrt(s);
    for (double& x : v) x /= s;
    return v;
}

}  // namespace

std::pair<double, double> hammer_project(double lon, double lat) {
    if (!(lon >= -M_PI - 1e-12 && lon <= M_PI + 1e-12))
        throw std::domain_error("hammer_project: lon must lie in [-pi, pi]");
    if (!(lat >= -M_PI_2 - 1e-12 && lat <= M_PI_2 + 1e-12))
        throw std::domain_error("hammer_project: lat must lie in [-pi/2, pi/2]");
    const double d = std::sqrt(1.0 + std::cos(lat) * std::cos(0.5 * lon));
    return {2.0 * std::sqrt(2.0) * std::cos(lat) * std::sin(0.5 * lon) / d,
            std::sqrt(2.0) * std::sin(lat) / d};
}

SphereGrid SphereGrid::make(int nlon, int nlat) {
    if (nlon < 2 || nlat < 2) throw std::domain_error("SphereGrid: need at least 2x2");
    SphereGrid g;
    g.nlon = nlon;
    g.nlat = nlat;
    g.lon.reserve(static_cast<std::size_t>(nlon) * nlat);
    g.lat.reserve(static_cast<std::size_t>(nlon) * nlat);
    g.points.reserve(static_cast<std::size_t>(nlon) * nlat * 3);
    for (int j = 0; j < nlat; ++j) {
        const double lat = -M_PI_2 + M_PI * j / (nlat - 1);
        for (int i = 0; i < nlon; ++i) {
            const double lon = -M_PI + 2.0 * M_PI * (i + 1) / nlon;  // (-pi, pi]
            g.lon.push_back(lon);
            g.lat.push_back(lat);
            g.points.push_back(std::cos(lat) * std::cos(lon));
            g.points.push_back(std::cos(lat) * std::sin(lon));
            g.points.push_back(std::sin(lat));
        }
    }
    return g;
}

std::vector<double> field_grid(const SphereGrid& grid, const FieldOptions& options) {
    if (options.mu.size() != 3 || options.t_ref.size() != 3)
        throw std::domain_error("field_grid: direction vectors must be 3-dimensional (p = 3)");
    const int p = 3;
    const auto mu = unit(options.mu);
    const auto t_ref = unit(options.t_ref);
    const int size = grid.size();
    std::vector<double> out(size);

    auto point = [&](int i) {
        return std::span<const double>(grid.points.data() + 3 * static_cast<std::size_t>(i), 3);
    };

    switch (options.kind) {
        case FieldKind::abs_z: {
            const auto model = AlternativeModel::vmf(p, options.kappa);
            AlternativeHarmonics h = harmonics_for(model, kFieldOrder);
            h.mu = mu;
            const double scale = std::sqrt(static_cast<double>(options.n));
            parallel_for_index(static_cast<std::size_t>(size), [&](std::size_t i) {
                out[i] = scale * std::abs(z_value(h, options.lambda, point(static_cast<int>(i))));
            });
            return out;
        }
        case FieldKind::rho_null: {
            const double diag = kernel_K(p, options.lambda, 1.0, kFieldOrder);
            parallel_for_index(static_cast<std::size_t>(size), [&](std::size_t i) {
                auto s = point(static_cast<int>(i));
                double u = 0.0;
                for (int d = 0; d < 3; ++d) u += s[d] * t_ref[d];
                out[i] = kernel_K(p, options.lambda, std::clamp(u, -1.0, 1.0), kFieldOrder) / diag;
            });
            return out;
        }
        case FieldKind::rho_alt: {
            const auto model = AlternativeModel::vmf(p, options.kappa);
            AlternativeHarmonics h = harmonics_for(model, kFieldOrder);
            h.mu = mu;
            // One shared set of draws; the vMF sampler is axis e1, so rotate
            // the draws onto mu via the density's rotation invariance: sample
            // about e1 then map e1 -> mu with a Householder-like frame.
            auto rng = replicate_rng(options.seed, 0, /*stream=*/13);
            const auto base = AlternativeModel::vmf(p, options.kappa).sample(options.mc_draws, rng);
            // frame: reflect e1 onto mu
            std::vector<double> draws(base.data());
            {
                std::vector<double> v = {1.0 - mu[0], -mu[1], -mu[2]};  // e1 - mu
                double vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
                if (vv > 1e-24) {
                    for (int i = 0; i < options.mc_draws; ++i) {
                        double* x = draws.data() + 3 * static_cast<std::size_t>(i);
                        const double proj = 2.0 * (x[0] * v[0] + x[1] * v[1] + x[2] * v[2]) / vv;
                        for (int d = 0; d < 3; ++d) x[d] -= proj * v[d];
                    }
                }
            }
            // Psi(t_ref, X_m) once per draw
            std::vector<double> w(kFieldOrder + 1, 0.0);
            for (int k = 1; k <= kFieldOrder; ++k)
                w[k] = m_kp(k, p, options.lambda) * (-static_cast<double>(k)) * (k + p - 2.0);
            auto psi_at = [&](std::span<const double> t, const double* x) {
                double u = t[0] * x[0] + t[1] * x[1] + t[2] * x[2];
                double c[kFieldOrder + 1];
                gegenbauer_all(kFieldOrder, p, std::clamp(u, -1.0, 1.0), c);
                double v = 0.0;
                for (int k = 1; k <= kFieldOrder; ++k) v += w[k] * c[k];
                return v;
            };
            std::vector<double> psi_ref(options.mc_draws);
            double diag_ref_acc = 0.0;
            for (int m = 0; m < options.mc_draws; ++m) {
                psi_ref[m] = psi_at(t_ref, draws.data() + 3 * static_cast<std::size_t>(m));
                diag_ref_acc += psi_ref[m] * psi_ref[m];
            }
            const double z_ref = z_value(h, options.lambda, t_ref);
            const double var_ref = diag_ref_acc / options.mc_draws - z_ref * z_ref;
            parallel_for_index(static_cast<std::size_t>(size), [&](std::size_t i) {
                auto s = point(static_cast<int>(i));
                double cross = 0.0, diag = 0.0;
                for (int m = 0; m < options.mc_draws; ++m) {
                    const double ps = psi_at(s, draws.data() + 3 * static_cast<std::size_t>(m));
                    cross += ps * psi_ref[m];
                    diag += ps * ps;
                }
                const double zs = z_value(h, options.lambda, s);
                const double kprime_st = cross / options.mc_draws - zs * z_ref;
                const double kprime_ss = diag / options.mc_draws - zs * zs;
                out[i] = kprime_st / std::sqrt(std::max(kprime_ss, 1e-300) * std::max(var_ref, 1e-300));
            });
            return out;
        }
    }
    throw std::logic_error("field_grid: unreachable");
}

void export_field(const SphereGrid& grid, const std::vector<double>& values,
                  const std::string& path) {
    if (static_cast<int>(values.size()) != grid.size())
        throw std::domain_error("export_field: value count does not match grid");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write field: " + path);
    out.precision(17);
    out << "lon,lat,hammer_x,hammer_y,value\n";
    for (int i = 0; i < grid.size(); ++i) {
        const auto [hx, hy] = hammer_project(grid.lon[i], grid.lat[i]);
        out << grid.lon[i] << ',' << grid.lat[i] << ',' << hx << ',' << hy << ',' << values[i]
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sphstein
