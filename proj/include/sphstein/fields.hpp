#ifndef SPHSTEIN_FIELDS_HPP
#define SPHSTEIN_FIELDS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sphstein {

// Equal-area Hammer projection of (lon, lat) into the 2 sqrt(2) x sqrt(2)
// ellipse; lon in [-pi, pi], lat in [-pi/2, pi/2].
std::pair<double, double> hammer_project(double lon, double lat);

// Regular lon/lat grid on S^2, lon in (-pi, pi], lat in [-pi/2, pi/2].
struct SphereGrid {
    int nlon = 0;
    int nlat = 0;
    std::vector<double> lon;     // per point, row-major over (lat, lon)
    std::vector<double> lat;
    std::vector<double> points;  // 3 per point

    int size() const { return nlon * nlat; }
    static SphereGrid make(int nlon, int nlat);
};

enum class FieldKind { abs_z, rho_null, rho_alt };

struct FieldOptions {
    FieldKind kind = FieldKind::abs_z;
    double kappa = 1.0;                    // vMF concentration of the alternative
    double lambda = 1.0;
    int n = 100;                           // sqrt(n) scale of the z field
    std::vector<double> mu = {0.0, -1.0, 0.0};
    std::vector<double> t_ref = {0.0, 0.0, 1.0};
    int nlon = 181;
    int nlat = 91;
    int mc_draws = 10000;                  // rho_alt only
    std::uint64_t seed = 1;
};

// Series truncated at 100 terms throughout.
std::vector<double> field_grid(const SphereGrid& grid, const FieldOptions& options);

void export_field(const SphereGrid& grid, const std::vector<double>& values,
                  const std::string& path);

}  // namespace sphstein

#endif
