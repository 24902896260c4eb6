#include "sphstein/sample.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sphstein {

SampleSet::SampleSet(int n, int p, std::vector<double> data) : n_(n), p_(p), data_(std::move(data)) {
    if (n < 1) throw std::domain_error("SampleSet: need n >= 1");
    if (p < 2) throw std::domain_error("SampleSet: need p >= 2");
    if (data_.size() != static_cast<std::size_t>(n) * p)
        throw std::domain_error("SampleSet: data size does not match n*p");
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int d = 0; d < p; ++d) {
            double v = data_[static_cast<std::size_t>(i) * p + d];
            s += v * v;
        }
        if (std::abs(std::sqrt(s) - 1.0) > 1e-9)
            throw std::domain_error("SampleSet: row " + std::to_string(i + 1) + " is not a unit vector");
    }
}

SampleSet SampleSet::rotated(const std::vector<double>& q) const {
    if (q.size() != static_cast<std::size_t>(p_) * p_)
        throw std::domain_error("SampleSet::rotated: matrix must be p x p");
    std::vector<double> out(data_.size());
    for (int i = 0; i < n_; ++i) {
        const double* x = data_.data() + static_cast<std::size_t>(i) * p_;
        double* y = out.data() + static_cast<std::size_t>(i) * p_;
        for (int r = 0; r < p_; ++r) {
            double s = 0.0;
            for (int c = 0; c < p_; ++c) s += q[static_cast<std::size_t>(r) * p_ + c] * x[c];
            y[r] = s;
        }
        // renormalize to absorb roundoff from the product
        double nrm = 0.0;
        for (int d = 0; d < p_; ++d) nrm += y[d] * y[d];
        nrm = std::sqrt(nrm);
        for (int d = 0; d < p_; ++d) y[d] /= nrm;
    }
    return SampleSet(n_, p_, std::move(out));
}

SampleSet uniform_sample(int n, int p, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> data(static_cast<std::size_t>(n) * p);
    for (int i = 0; i < n; ++i) {
        double* x = data.data() + static_cast<std::size_t>(i) * p;
        double nrm = 0.0;
        do {
            nrm = 0.0;
            for (int d = 0; d < p; ++d) {
                x[d] = gauss(rng);
                nrm += x[d] * x[d];
            }
        } while (nrm == 0.0);
        nrm = std::sqrt(nrm);
        for (int d = 0; d < p; ++d) x[d] /= nrm;
    }
    return SampleSet(n, p, std::move(data));
}

SampleSet load_sample_csv(const std::string& path, bool normalize) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file: " + path);
    std::vector<double> data;
    std::vector<int> bad_rows;
    int p = -1, row = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        ++row;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": row " + std::to_string(row) + " has a non-numeric entry");
            }
        }
        if (p < 0) {
            p = static_cast<int>(vals.size());
            if (p < 2) throw std::runtime_error(path + ": rows must have at least 2 columns");
        } else if (static_cast<int>(vals.size()) != p) {
            throw std::runtime_error(path + ": row " + std::to_string(row) + " has inconsistent column count");
        }
        double nrm = 0.0;
        for (double v : vals) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (std::abs(nrm - 1.0) > 1e-6) {
            if (normalize && nrm > 0.0) {
                for (double& v : vals) v /= nrm;
            } else {
                bad_rows.push_back(row);
            }
        } else if (nrm != 1.0 && nrm > 0.0) {
            for (double& v : vals) v /= nrm;  // absorb roundoff within tolerance
        }
        data.insert(data.end(), vals.begin(), vals.end());
    }
    if (!bad_rows.empty()) {
        std::ostringstream os;
        os << path << ": rows not on the unit sphere (pass --normalize to project):";
        for (int r : bad_rows) os << ' ' << r;
        throw std::runtime_error(os.str());
    }
    if (row == 0) throw std::runtime_error(path + ": no data rows");
    return SampleSet(row, p, std::move(data));
}

void write_sample_csv(const std::string& path, const SampleSet& sample) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write sample file: " + path);
    out.precision(17);
    for (int i = 0; i < sample.n(); ++i) {
        auto r = sample.row(i);
        for (int d = 0; d < sample.p(); ++d) {
            if (d) out << ',';
            out << r[d];
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sphstein
