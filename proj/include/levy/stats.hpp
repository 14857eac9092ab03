#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace levy {

/// Streaming mean and variance (Welford), mergeable across chunks.
class RunningStats {
  public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    void merge(const RunningStats& o) {
        if (o.n_ == 0) {
            return;
        }
        const auto n = n_ + o.n_;
        const double d = o.mean_ - mean_;
        mean_ += d * static_cast<double>(o.n_) / static_cast<double>(n);
        m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) /
                           static_cast<double>(n);
        n_ = n;
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double stderr_of_mean() const {
        return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

  private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// P(K > lambda) for the limiting Kolmogorov distribution.
inline double kolmogorov_survival(double lambda) {
    if (lambda < 0.2) {
        return 1.0;
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-17) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

namespace detail {
inline double ks_p_value(double d, double effective_n) {
    const double sn = std::sqrt(effective_n);
    return kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d);
}
}  // namespace detail

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
template <class Cdf>
KsResult ks_test(std::vector<double> sample, const Cdf& cdf) {
    if (sample.empty()) {
        throw std::invalid_argument("ks_test: empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, detail::ks_p_value(d, n)};
}

/// Two-sample Kolmogorov-Smirnov test.
inline KsResult ks_test_two_sample(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty()) {
        throw std::invalid_argument("ks_test_two_sample: empty sample");
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return {d, detail::ks_p_value(d, nx * ny / (nx + ny))};
}

/// Histogram density estimate on [lo, hi] with equal-width bins.
inline std::vector<double> histogram_density(std::span<const double> sample, double lo, double hi,
                                             int bins) {
    std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
    const double width = (hi - lo) / bins;
    for (double x : sample) {
        if (x < lo || x > hi) {
            continue;
        }
        auto b = static_cast<int>((x - lo) / width);
        b = std::min(b, bins - 1);
        h[static_cast<std::size_t>(b)] += 1.0;
    }
    for (double& v : h) {
        v /= static_cast<double>(sample.size()) * width;
    }
    return h;
}

}  // namespace levy
