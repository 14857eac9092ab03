#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "levy/rng.hpp"
#include "levy/stats.hpp"
#include "levy/su2.hpp"

namespace levy {

class KernelNotPsd : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Gaussian field with covariance K(x, y) = 1/2 (d(x, x0) + d(y, x0) - d(x, y))
/// on a finite point set. points[0] is the base point x0.
template <class T>
struct FieldSample {
    std::vector<T> points;
    Eigen::MatrixXd distances;
    Eigen::MatrixXd kernel;
    Eigen::MatrixXd chol;        // lower triangular, row/column 0 identically zero
    double jitter_used = 0.0;    // relative to the largest diagonal entry
    Eigen::MatrixXd values;      // m x R, one realization per column

    int size() const { return static_cast<int>(points.size()); }
    int realizations() const { return static_cast<int>(values.cols()); }
};

inline constexpr double kCoincidenceTol = 1e-12;

/// Assemble K and factor it. The base point is ordered first and its zero
/// row/column is pinned, so only the trailing block is factored. Jitter
/// (times the largest diagonal entry) escalates by decades from `jitter` up
/// to 1e-7; throws KernelNotPsd if every attempt fails.
template <class T, class Metric>
FieldSample<T> build_field(std::span<const T> points, const T& x0, const Metric& d,
                           double jitter = 1e-10) {
    if (!(jitter > 0.0)) {
        throw std::invalid_argument("build_field: jitter must be positive");
    }
    FieldSample<T> fs;
    fs.points.push_back(x0);
    for (const auto& p : points) {
        if (d(p, x0) > kCoincidenceTol) {
            fs.points.push_back(p);
        }
    }
    const int m = fs.size();
    fs.distances = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double v = d(fs.points[i], fs.points[j]);
            if (v <= kCoincidenceTol) {
                throw std::invalid_argument("build_field: points must be distinct");
            }
            fs.distances(i, j) = fs.distances(j, i) = v;
        }
    }
    fs.kernel.resize(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            fs.kernel(i, j) = 0.5 * (fs.distances(i, 0) + fs.distances(j, 0) - fs.distances(i, j));
        }
    }
    fs.kernel.row(0).setZero();
    fs.kernel.col(0).setZero();
    fs.chol = Eigen::MatrixXd::Zero(m, m);
    if (m == 1) {
        return fs;
    }

    const Eigen::MatrixXd block = fs.kernel.bottomRightCorner(m - 1, m - 1);
    const double max_diag = block.diagonal().maxCoeff();
    for (double level = jitter;; level *= 10.0) {
        Eigen::MatrixXd a = block;
        a.diagonal().array() += level * max_diag;
        const Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() == Eigen::Success) {
            fs.chol.bottomRightCorner(m - 1, m - 1) = llt.matrixL();
            fs.jitter_used = level;
            return fs;
        }
        if (level >= 1e-7 * (1.0 - 1e-9)) {
            break;
        }
    }
    throw KernelNotPsd("kernel not PSD: Cholesky failed with jitter up to 1e-7");
}

inline FieldSample<SU2Element> build_field_su2(std::span<const SU2Element> points,
                                               const SU2Element& x0, double jitter = 1e-10) {
    return build_field(points, x0,
                       [](const SU2Element& a, const SU2Element& b) { return dist_su2(a, b); },
                       jitter);
}

/// R realizations; realization r is chol * z with z drawn from rng.split(r).
template <class T>
void sample_field(FieldSample<T>& fs, int realizations, const RngStream& rng) {
    if (realizations < 1) {
        throw std::invalid_argument("sample_field: need at least one realization");
    }
    const int m = fs.size();
    fs.values = Eigen::MatrixXd::Zero(m, realizations);
    if (m == 1) {
        return;
    }
    const auto lower = fs.chol.bottomRightCorner(m - 1, m - 1).template triangularView<Eigen::Lower>();
    Eigen::VectorXd z(m - 1);
    for (int r = 0; r < realizations; ++r) {
        RngStream local = rng.split(static_cast<std::uint64_t>(r));
        for (int i = 0; i < m - 1; ++i) {
            z(i) = local.normal();
        }
        fs.values.col(r).tail(m - 1) = lower * z;
        fs.values(0, r) = 0.0;
    }
}

struct VariogramEntry {
    int i = 0;
    int j = 0;
    double distance = 0.0;
    double estimate = 0.0;   // mean of (X_i - X_j)^2 over realizations
    double std_error = 0.0;  // sample standard error of that mean

    bool covers(double sigmas = 3.0) const {
        return std::abs(estimate - distance) <= sigmas * std_error;
    }
};

template <class T>
VariogramEntry variogram_pair(const FieldSample<T>& fs, int i, int j) {
    const int r = fs.realizations();
    if (r < 2) {
        throw std::invalid_argument("variogram: need at least two realizations");
    }
    RunningStats acc;
    for (int k = 0; k < r; ++k) {
        const double diff = fs.values(i, k) - fs.values(j, k);
        acc.add(diff * diff);
    }
    return {i, j, fs.distances(i, j), acc.mean(), acc.stderr_of_mean()};
}

/// Estimates of E|X_i - X_j|^2 for every pair i < j. Requires R >= 100.
template <class T>
std::vector<VariogramEntry> empirical_variogram(const FieldSample<T>& fs) {
    if (fs.realizations() < 100) {
        throw std::invalid_argument("empirical_variogram: need at least 100 realizations");
    }
    std::vector<VariogramEntry> out;
    for (int i = 0; i < fs.size(); ++i) {
        for (int j = i + 1; j < fs.size(); ++j) {
            out.push_back(variogram_pair(fs, i, j));
        }
    }
    return out;
}

inline double variogram_coverage(std::span<const VariogramEntry> entries, double sigmas = 3.0) {
    if (entries.empty()) {
        return 1.0;
    }
    std::size_t hit = 0;
    for (const auto& e : entries) {
        hit += e.covers(sigmas) ? 1 : 0;
    }
    return static_cast<double>(hit) / static_cast<double>(entries.size());
}

}  // namespace levy
