#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sphstein/alternatives.hpp"
#include "sphstein/asymptotics.hpp"
#include "sphstein/fields.hpp"
#include "sphstein/null_dist.hpp"
#include "sphstein/parallel.hpp"
#include "sphstein/rng.hpp"
#include "sphstein/specfun.hpp"
#include "sphstein/statistic.hpp"
#include "sphstein/tuning.hpp"

namespace py = pybind11;
using namespace sphstein;

namespace {

SampleSet sample_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected an (n, p) array");
    const int n = static_cast<int>(arr.shape(0));
    const int p = static_cast<int>(arr.shape(1));
    std::vector<double> data(arr.data(), arr.data() + static_cast<std::size_t>(n) * p);
    return SampleSet(n, p, std::move(data));
}

py::array_t<double> array_from_sample(const SampleSet& s) {
    py::array_t<double> out({s.n(), s.p()});
    std::copy(s.data().begin(), s.data().end(), out.mutable_data());
    return out;
}

CoefficientSequence sequence_for(const std::string& family, int p, double lambda) {
    if (family == "stein") return CoefficientSequence::stein(p, lambda);
    if (family == "dksd") return CoefficientSequence::dksd(p, lambda);
    if (family == "softmax") return CoefficientSequence::softmax(p, lambda);
    throw std::invalid_argument("family must be stein, dksd or softmax");
}

}  // namespace

PYBIND11_MODULE(_sphstein, m) {
    m.doc() = "L2-Stein uniformity tests on the hypersphere";

    m.def("set_num_threads", &set_num_threads, py::arg("n"));

    // special functions
    m.def("log_gamma", &log_gamma, py::arg("x"));
    m.def("bessel_i", &bessel_i, py::arg("nu"), py::arg("x"));
    m.def("gegenbauer", &gegenbauer, py::arg("k"), py::arg("p"), py::arg("u"));
    m.def("gamma_kp", &gamma_kp, py::arg("k"), py::arg("p"));
    m.def("dim_kp", &dim_kp, py::arg("k"), py::arg("p"));
    m.def("surface_measure", &surface_measure, py::arg("m"));
    m.def("m_kp", &m_kp, py::arg("k"), py::arg("p"), py::arg("lambda_"));
    m.def("linearization_coeff", &linearization_coeff, py::arg("k1"), py::arg("k2"),
          py::arg("ell"), py::arg("p"));

    // statistics
    m.def("c_kp", &c_kp, py::arg("k"), py::arg("p"), py::arg("lambda_"));
    m.def("c_dksd", &c_dksd, py::arg("k"), py::arg("p"), py::arg("lambda_"));
    m.def("softmax_weight", &softmax_weight, py::arg("k"), py::arg("p"), py::arg("lambda_"));
    m.def("truncation_order", &truncation_order, py::arg("p"), py::arg("lambda_"),
          py::arg("tol") = 1e-12);
    m.def(
        "statistic",
        [](py::array_t<double> x, const std::string& family, double lambda, bool v_scaling) {
            const auto sample = sample_from_array(std::move(x));
            if (family == "rayleigh") return rayleigh_statistic(sample);
            if (family == "bingham") return bingham_statistic(sample);
            return sobolev_statistic(sample, sequence_for(family, sample.p(), lambda), v_scaling);
        },
        py::arg("x"), py::arg("family") = "stein", py::arg("lambda_") = 1.0,
        py::arg("v_scaling") = false,
        "Evaluate a uniformity statistic on an (n, p) array of unit vectors");
    m.def("d_n", &d_n, py::arg("p"), py::arg("lambda_"), py::arg("K"));
    m.def(
        "max_pair", [](py::array_t<double> x) { return max_pair_dot(sample_from_array(std::move(x))); },
        py::arg("x"));

    // null distribution
    m.def("limit_moments", &limit_moments, py::arg("p"), py::arg("lambda_"), py::arg("K"));
    m.def("finite_n_mean_h0", &finite_n_mean_h0, py::arg("p"), py::arg("lambda_"), py::arg("K"));
    m.def("finite_n_variance_h0", &finite_n_variance_h0, py::arg("n"), py::arg("p"),
          py::arg("lambda_"), py::arg("K"));
    m.def(
        "critical_value",
        [](const std::string& family, double lambda, int n, int p, int M, double alpha,
           std::uint64_t seed) {
            const auto cv = mc_critical_value(
                [&](const SampleSet& s) {
                    if (family == "rayleigh") return rayleigh_statistic(s);
                    if (family == "bingham") return bingham_statistic(s);
                    return sobolev_statistic(s, sequence_for(family, p, lambda),
                                             family == "dksd");
                },
                family, n, p, M, alpha, seed, lambda);
            return cv.value;
        },
        py::arg("family"), py::arg("lambda_"), py::arg("n"), py::arg("p"), py::arg("M") = 5000,
        py::arg("alpha") = 0.05, py::arg("seed") = 1);
    m.def(
        "p_value",
        [](double observed, std::vector<double> draws) {
            return p_value_mc(observed, std::span<const double>(draws));
        },
        py::arg("observed"), py::arg("null_draws"));

    // alternatives
    m.def(
        "sample",
        [](const std::string& model_json, int n, std::uint64_t seed) {
            const auto model = AlternativeModel::from_json(model_json);
            auto rng = replicate_rng(seed, 0);
            return array_from_sample(model.sample(n, rng));
        },
        py::arg("model_json"), py::arg("n"), py::arg("seed") = 1,
        "Draw n points from an alternative model described by JSON");
    m.def(
        "density",
        [](const std::string& model_json, py::array_t<double> x) {
            const auto model = AlternativeModel::from_json(model_json);
            const auto pts = sample_from_array(std::move(x));
            py::array_t<double> out(pts.n());
            for (int i = 0; i < pts.n(); ++i) out.mutable_at(i) = model.density(pts.row(i));
            return out;
        },
        py::arg("model_json"), py::arg("x"));
    m.def("beta_k_vmf", &beta_k_vmf, py::arg("k"), py::arg("p"), py::arg("kappa"));

    // asymptotics
    m.def(
        "tau_sigma2",
        [](const std::string& model_json, double lambda, int K) {
            const auto model = AlternativeModel::from_json(model_json);
            const auto h = harmonics_for(model, K);
            return std::make_pair(tau_rotsym(h, lambda), sigma2_rotsym(h, lambda));
        },
        py::arg("model_json"), py::arg("lambda_"), py::arg("K") = 40);
    m.def("power_approx", &power_approx, py::arg("c_n"), py::arg("n"), py::arg("tau"),
          py::arg("sigma"));

    // tuning
    m.def(
        "select_lambda",
        [](py::array_t<double> pilot, int n_target, double grid_min, double grid_max,
           double grid_step) {
            const auto sample = sample_from_array(std::move(pilot));
            const auto grid = LambdaGrid::regular(grid_min, grid_max, grid_step);
            const int K = truncation_order(sample.p(), grid_max);
            return select_lambda_tilde(abar(sample, n_target, K), grid);
        },
        py::arg("pilot"), py::arg("n_target"), py::arg("grid_min") = 0.1,
        py::arg("grid_max") = 30.0, py::arg("grid_step") = 0.1);
    m.def(
        "select_lambda_kfold",
        [](py::array_t<double> x, int folds, std::uint64_t seed, double grid_min, double grid_max,
           double grid_step) {
            const auto sample = sample_from_array(std::move(x));
            return select_lambda_kfold(sample, folds, LambdaGrid::regular(grid_min, grid_max, grid_step),
                                       seed);
        },
        py::arg("x"), py::arg("folds") = 20, py::arg("seed") = 1, py::arg("grid_min") = 0.1,
        py::arg("grid_max") = 30.0, py::arg("grid_step") = 0.1);

    // fields
    m.def(
        "field",
        [](const std::string& kind, double kappa, double lambda, std::vector<double> mu,
           std::vector<double> t_ref, int nlon, int nlat, int n, int mc_draws,
           std::uint64_t seed) {
            FieldOptions options;
            if (kind == "abs_z")
                options.kind = FieldKind::abs_z;
            else if (kind == "rho_null")
                options.kind = FieldKind::rho_null;
            else if (kind == "rho_alt")
                options.kind = FieldKind::rho_alt;
            else
                throw std::invalid_argument("kind must be abs_z, rho_null or rho_alt");
            options.kappa = kappa;
            options.lambda = lambda;
            options.mu = std::move(mu);
            options.t_ref = std::move(t_ref);
            options.nlon = nlon;
            options.nlat = nlat;
            options.n = n;
            options.mc_draws = mc_draws;
            options.seed = seed;
            const auto grid = SphereGrid::make(nlon, nlat);
            const auto values = field_grid(grid, options);
            py::dict out;
            out["lon"] = py::array_t<double>(grid.lon.size(), grid.lon.data());
            out["lat"] = py::array_t<double>(grid.lat.size(), grid.lat.data());
            out["value"] = py::array_t<double>(values.size(), values.data());
            return out;
        },
        py::arg("kind"), py::arg("kappa") = 1.0, py::arg("lambda_") = 1.0,
        py::arg("mu") = std::vector<double>{0.0, -1.0, 0.0},
        py::arg("t_ref") = std::vector<double>{0.0, 0.0, 1.0}, py::arg("nlon") = 181,
        py::arg("nlat") = 91, py::arg("n") = 100, py::arg("mc_draws") = 10000, py::arg("seed") = 1);
    m.def("hammer_project", &hammer_project, py::arg("lon"), py::arg("lat"));
}
