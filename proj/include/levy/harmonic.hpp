#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "levy/quadrature.hpp"
#include "levy/rng.hpp"
#include "levy/son.hpp"
#include "levy/stats.hpp"
#include "levy/su2.hpp"

namespace levy {

enum class GroupTag { SU2, SO3 };

inline std::string_view to_string(GroupTag g) { return g == GroupTag::SU2 ? "su2" : "so3"; }

/// Dimension of the l-th irreducible representation.
inline int rep_dimension(GroupTag g, int l) { return g == GroupTag::SU2 ? l + 1 : 2 * l + 1; }

/// Character of the l-th irreducible representation as a function of the
/// angle t in [0, pi] (geodesic distance to the identity).
inline double chi(GroupTag g, int l, double t) {
    if (l < 0) {
        throw std::invalid_argument("chi: l must be non-negative");
    }
    if (g == GroupTag::SO3) {
        double s = 1.0;
        for (int m = 1; m <= l; ++m) {
            s += 2.0 * std::cos(m * t);
        }
        return s;
    }
    // reflect about pi/2 so that (l + 1) t stays well conditioned near pi
    double sign = 1.0;
    if (t > 0.5 * std::numbers::pi) {
        t = std::numbers::pi - t;
        sign = l % 2 == 1 ? -1.0 : 1.0;
    }
    const double st = std::sin(t);
    if (std::abs(st) < 1e-8) {
        return sign * (l + 1);
    }
    return sign * std::sin((l + 1) * t) / st;
}

/// Law of the angle t = d(g, e) under Haar measure.
inline double angle_density(GroupTag g, double t) {
    if (t < 0.0 || t > std::numbers::pi) {
        return 0.0;
    }
    if (g == GroupTag::SO3) {
        return (1.0 - std::cos(t)) / std::numbers::pi;
    }
    const double s = std::sin(t);
    return 2.0 / std::numbers::pi * s * s;
}

inline double angle_cdf(GroupTag g, double t) {
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= std::numbers::pi) {
        return 1.0;
    }
    if (g == GroupTag::SO3) {
        return (t - std::sin(t)) / std::numbers::pi;
    }
    return (t - std::sin(t) * std::cos(t)) / std::numbers::pi;
}

/// Density of tr g for Haar-distributed g in SO(3), supported on [-1, 3]
/// with an integrable singularity at -1.
inline double trace_density_so3(double y) {
    if (y <= -1.0 || y > 3.0) {
        return 0.0;
    }
    return std::sqrt(3.0 - y) / std::sqrt(y + 1.0) / (2.0 * std::numbers::pi);
}

/// CDF of the trace, via tr g = 1 + 2 cos t.
inline double trace_cdf_so3(double y) {
    if (y <= -1.0) {
        return 0.0;
    }
    if (y >= 3.0) {
        return 1.0;
    }
    return 1.0 - angle_cdf(GroupTag::SO3, std::acos(std::clamp(0.5 * (y - 1.0), -1.0, 1.0)));
}

/// Closed-form coefficient of chi_l in the expansion of d(., e).
inline double alpha_closed(GroupTag g, int l) {
    if (l < 0) {
        throw std::invalid_argument("alpha_closed: l must be non-negative");
    }
    constexpr double pi = std::numbers::pi;
    if (g == GroupTag::SU2) {
        if (l == 0) {
            return pi / 2.0;
        }
        if (l % 2 == 0) {
            return 0.0;
        }
        const double m = l;
        return -8.0 / pi * (m + 1.0) / (m * m * (m + 2.0) * (m + 2.0));
    }
    if (l == 0) {
        return pi / 2.0 + 2.0 / pi;
    }
    double s = 1.0;
    for (int m = 1; m <= l; ++m) {
        const double mm = static_cast<double>(m) * m;
        if (m % 2 == 1) {
            s -= 2.0 / mm;
        } else {
            s += 2.0 * (mm + 1.0) / ((mm - 1.0) * (mm - 1.0));
        }
    }
    return 2.0 / pi * s;
}

/// The same coefficient by adaptive quadrature of t chi_l(t) p(t) over [0, pi].
inline double alpha_quadrature(GroupTag g, int l, double tol = 1e-10) {
    if (l < 0) {
        throw std::invalid_argument("alpha_quadrature: l must be non-negative");
    }
    const auto integrand = [g, l](double t) { return t * chi(g, l, t) * angle_density(g, t); };
    return adaptive_simpson(integrand, 0.0, std::numbers::pi, tol, std::max(8, 4 * (l + 1))).value;
}

/// Angle of a group element, i.e. its distance to the identity.
inline double group_angle(const SU2Element& g) { return angle_su2(g); }
inline double group_angle(const SOnElement& g) { return rotation_angle_so3(g); }

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo estimate of d_l * E[phi(g h^-1) chi_l(g) chi_l(h)] for
/// independent Haar g, h, where phi is a class function given through the
/// angle. With phi = d(., e) this equals alpha_l.
///
/// Samples are split into `chunks` pieces drawn from rng.split(k); the result
/// depends on (rng, n, chunks) only, not on scheduling.
template <class ClassFn>
MonteCarloEstimate alpha_monte_carlo_fn(GroupTag g, int l, std::int64_t n, const RngStream& rng,
                                        const ClassFn& phi_of_angle, int chunks = 1) {
    if (l < 0) {
        throw std::invalid_argument("alpha_monte_carlo: l must be non-negative");
    }
    if (n < 1000) {
        throw std::invalid_argument("alpha_monte_carlo: need at least 1000 samples");
    }
    if (chunks < 1) {
        throw std::invalid_argument("alpha_monte_carlo: chunks must be positive");
    }
    const double dim = rep_dimension(g, l);
    std::vector<RunningStats> partial(static_cast<std::size_t>(chunks));
    const auto work = [&](int k) {
        RngStream local = rng.split(static_cast<std::uint64_t>(k));
        const std::int64_t count = n / chunks + (k < n % chunks ? 1 : 0);
        RunningStats acc;
        for (std::int64_t i = 0; i < count; ++i) {
            double tg = 0.0, th = 0.0, trel = 0.0;
            if (g == GroupTag::SU2) {
                const SU2Element x = haar_su2(local);
                const SU2Element y = haar_su2(local);
                tg = group_angle(x);
                th = group_angle(y);
                trel = group_angle(x * y.inverse());
            } else {
                const SOnElement x = haar_so3_via_ad(local);
                const SOnElement y = haar_so3_via_ad(local);
                tg = group_angle(x);
                th = group_angle(y);
                trel = group_angle(x * y.inverse());
            }
            acc.add(dim * phi_of_angle(trel) * chi(g, l, tg) * chi(g, l, th));
        }
        partial[static_cast<std::size_t>(k)] = acc;
    };
    if (chunks == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (int k = 0; k < chunks; ++k) {
            pool.emplace_back(work, k);
        }
    }
    RunningStats total;
    for (const auto& p : partial) {
        total.merge(p);
    }
    return {total.mean(), total.stderr_of_mean()};
}

inline MonteCarloEstimate alpha_monte_carlo(GroupTag g, int l, std::int64_t n, const RngStream& rng,
                                            int chunks = 1) {
    return alpha_monte_carlo_fn(g, l, n, rng, [](double t) { return t; }, chunks);
}

/// Truncated character expansion sum_{l <= lmax} alpha_l chi_l(t).
inline double partial_sum(GroupTag g, int lmax, double t) {
    double s = 0.0;
    for (int l = 0; l <= lmax; ++l) {
        s += alpha_closed(g, l) * chi(g, l, t);
    }
    return s;
}

/// Squared L^2(Haar) distance between the truncated expansion and d(., e).
inline double partial_sum_l2_error(GroupTag g, int lmax, double tol = 1e-12) {
    std::vector<double> alpha(static_cast<std::size_t>(lmax) + 1);
    for (int l = 0; l <= lmax; ++l) {
        alpha[static_cast<std::size_t>(l)] = alpha_closed(g, l);
    }
    const auto residual = [&](double t) {
        double s = 0.0;
        for (int l = 0; l <= lmax; ++l) {
            s += alpha[static_cast<std::size_t>(l)] * chi(g, l, t);
        }
        return (s - t) * (s - t) * angle_density(g, t);
    };
    return adaptive_simpson(residual, 0.0, std::numbers::pi, tol, std::max(8, 4 * (lmax + 1))).value;
}

enum class CoefficientMethod { Closed, Quadrature, MonteCarlo };

inline std::string_view to_string(CoefficientMethod m) {
    switch (m) {
        case CoefficientMethod::Closed: return "closed";
        case CoefficientMethod::Quadrature: return "quadrature";
        case CoefficientMethod::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

struct CoefficientEntry {
    int l = 0;
    double alpha = 0.0;
    CoefficientMethod method = CoefficientMethod::Closed;
    std::optional<double> std_error;
};

struct CoefficientTable {
    GroupTag group = GroupTag::SO3;
    std::vector<CoefficientEntry> entries;

    std::optional<CoefficientEntry> find(int l, CoefficientMethod m) const {
        for (const auto& e : entries) {
            if (e.l == l && e.method == m) {
                return e;
            }
        }
        return std::nullopt;
    }
};

struct CoefficientOptions {
    int lmax = 50;
    double tol = 1e-10;
    std::int64_t mc_samples = 0;  // 0 disables the Monte Carlo column
    int chunks = 1;
};

/// All three routes for l = 0..lmax. Monte Carlo for degree l uses rng.split(l).
inline CoefficientTable coefficient_table(GroupTag g, const CoefficientOptions& opt,
                                          const RngStream& rng) {
    CoefficientTable table{g, {}};
    for (int l = 0; l <= opt.lmax; ++l) {
        table.entries.push_back({l, alpha_closed(g, l), CoefficientMethod::Closed, std::nullopt});
        table.entries.push_back(
            {l, alpha_quadrature(g, l, opt.tol), CoefficientMethod::Quadrature, std::nullopt});
        if (opt.mc_samples > 0) {
            const auto mc = alpha_monte_carlo(g, l, opt.mc_samples,
                                              rng.split(static_cast<std::uint64_t>(l)), opt.chunks);
            table.entries.push_back({l, mc.estimate, CoefficientMethod::MonteCarlo, mc.std_error});
        }
    }
    return table;
}

}  // namespace levy
