#ifndef SPHSTEIN_SAMPLE_HPP
#define SPHSTEIN_SAMPLE_HPP

#include <random>
#include <span>
#include <string>
#include <vector>

namespace sphstein {

// n unit vectors on S^{p-1}, stored row-major.
class SampleSet {
  public:
    SampleSet(int n, int p, std::vector<double> data);

    int n() const { return n_; }
    int p() const { return p_; }
    std::span<const double> row(int i) const { return {data_.data() + static_cast<std::size_t>(i) * p_, static_cast<std::size_t>(p_)}; }
    const std::vector<double>& data() const { return data_; }

    // Applies Q (p x p, row-major) on the left of every observation.
    SampleSet rotated(const std::vector<double>& q) const;

  private:
    int n_;
    int p_;
    std::vector<double> data_;
};

// i.i.d. uniform draws on S^{p-1}: normalized standard Gaussian vectors.
SampleSet uniform_sample(int n, int p, std::mt19937_64& rng);

// Reads one unit vector per CSV row. Rows whose norm deviates from 1 by more
// than 1e-6 are rejected unless normalize is set; offending row numbers are
// listed in the thrown message.
SampleSet load_sample_csv(const std::string& path, bool normalize = false);

void write_sample_csv(const std::string& path, const SampleSet& sample);

}  // namespace sphstein

#endif
