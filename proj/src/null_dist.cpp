#include "sphstein/null_dist.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sphstein/parallel.hpp"
#include "sphstein/rng.hpp"
#include "sphstein/specfun.hpp"
#include "sphstein/statistic.hpp"

namespace sphstein {

ChiSquareMixture ChiSquareMixture::stein_limit(int p, double lambda, int K) {
    ChiSquareMixture mix;
    mix.terms.reserve(K);
    for (int k = 1; k <= K; ++k)
        mix.terms.push_back({c_kp(k, p, lambda) * gamma_kp(k, p), dim_kp(k, p)});
    return mix;
}

double ChiSquareMixture::mean() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight * static_cast<double>(t.dof);
    return s;
}

double ChiSquareMixture::variance() const {
    double s = 0.0;
    for (const auto& t : terms) s += 2.0 * t.weight * t.weight * static_cast<double>(t.dof);
    return s;
}

double ChiSquareMixture::sample(std::mt19937_64& rng) const {
    double s = 0.0;
    for (const auto& t : terms) {
        if (t.weight == 0.0) continue;
        std::gamma_distribution<double> chi2(0.5 * static_cast<double>(t.dof), 2.0);
        s += t.weight * chi2(rng);
    }
    return s;
}

std::vector<double> ChiSquareMixture::sample_many(int M, std::uint64_t seed) const {
    std::vector<double> out(M);
    parallel_for_index(static_cast<std::size_t>(M), [&](std::size_t r) {
        auto rng = replicate_rng(seed, r);
        out[r] = sample(rng);
    });
    return out;
}

std::pair<double, double> limit_moments(int p, double lambda, int K) {
    const auto mix = ChiSquareMixture::stein_limit(p, lambda, K);
    return {mix.mean(), mix.variance()};
}

double finite_n_mean_h0(int p, double lambda, int K) { return d_n(p, lambda, K); }

double finite_n_variance_h0(int n, int p, double lambda, int K) {
    if (n < 2) throw std::domain_error("finite_n_variance_h0: need n >= 2");
    double s = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double w = c_kp(k, p, lambda) * gamma_kp(k, p);
        s += 2.0 * (n - 1.0) / n * w * w * static_cast<double>(dim_kp(k, p));
    }
    return s;
}

std::string CriticalValueTable::csv_header() {
    return "statistic,n,p,lambda,alpha,M,seed,critical_value";
}

std::string CriticalValueTable::csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << statistic_id << ',' << n << ',' << p << ',';
    if (std::isnan(lambda))
        os << "";
    else
        os << lambda;
    os << ',' << alpha << ',' << m << ',' << seed << ',' << value;
    return os.str();
}

CriticalValueTable mc_critical_value(const std::function<double(const SampleSet&)>& statistic,
                                     const std::string& statistic_id, int n, int p, int M,
                                     double alpha, std::uint64_t seed, double lambda) {
    if (M < 100) throw std::domain_error("mc_critical_value: need M >= 100");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("mc_critical_value: alpha in (0,1)");
    std::vector<double> draws(M);
    parallel_for_index(static_cast<std::size_t>(M), [&](std::size_t r) {
        auto rng = replicate_rng(seed, r);
        const auto sample = uniform_sample(n, p, rng);
        try {
            draws[r] = statistic(sample);
        } catch (const std::exception& e) {
            throw std::runtime_error("statistic failed on null replicate " + std::to_string(r) +
                                     ": " + e.what());
        }
    });
    std::sort(draws.begin(), draws.end());
    const int rank = static_cast<int>(std::ceil((1.0 - alpha) * M));  // 1-based order statistic
    CriticalValueTable table;
    table.statistic_id = statistic_id;
    table.n = n;
    table.p = p;
    table.lambda = lambda;
    table.alpha = alpha;
    table.m = M;
    table.seed = seed;
    table.value = draws[std::clamp(rank, 1, M) - 1];
    return table;
}

double p_value_mc(double observed, std::span<const double> null_draws) {
    if (null_draws.empty()) throw std::domain_error("p_value_mc: need at least one null draw");
    std::size_t count = 0;
    for (double d : null_draws)
        if (d >= observed) ++count;
    return (1.0 + static_cast<double>(count)) / (static_cast<double>(null_draws.size()) + 1.0);
}

}  // namespace sphstein
