#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "levy/harmonic.hpp"
#include "levy/quadrature.hpp"

using namespace levy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
constexpr double pi = std::numbers::pi;

namespace {

// Fixed-step composite Simpson, independent of the adaptive code path.
template <class F>
double composite_simpson(const F& f, double a, double b, int panels = 20000) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Characters from their defining trigonometric forms.
double chi_so3_ratio(int l, double t) { return std::sin((2 * l + 1) * t / 2) / std::sin(t / 2); }

}  // namespace

TEST_CASE("character values") {
    for (double t : {0.0, 0.4, 2.0, pi}) CHECK(chi(GroupTag::SO3, 0, t) == 1.0);
    for (int l = 0; l <= 10; ++l) {
        CHECK(chi(GroupTag::SO3, l, 0.0) == 2 * l + 1);
        CHECK(chi(GroupTag::SU2, l, 0.0) == l + 1);
        CHECK(chi(GroupTag::SU2, l, pi) == (l % 2 ? -1.0 : 1.0) * (l + 1));
        for (double t : {0.3, 1.1, 2.4}) {
            CHECK_THAT(chi(GroupTag::SO3, l, t), WithinAbs(chi_so3_ratio(l, t), 1e-12));
        }
        // continuity across the limit branch
        CHECK_THAT(chi(GroupTag::SU2, l, 2e-8), WithinAbs(l + 1.0, 1e-9));
        CHECK_THAT(chi(GroupTag::SU2, l, pi - 2e-8), WithinAbs(chi(GroupTag::SU2, l, pi), 1e-9));
    }
    CHECK_THAT(chi(GroupTag::SU2, 1, pi / 2), WithinAbs(0.0, 1e-15));
    CHECK(rep_dimension(GroupTag::SU2, 4) == 5);
    CHECK(rep_dimension(GroupTag::SO3, 4) == 9);
    CHECK_THROWS_AS(chi(GroupTag::SO3, -1, 0.0), std::invalid_argument);
}

TEST_CASE("SU(2) characters restricted to SO(3)") {
    // chi^{SU2}_{2l}(t/2) = chi^{SO3}_l(t): even representations factor through Ad
    for (int l = 0; l <= 6; ++l) {
        for (double t : {0.5, 1.9, 3.0}) {
            CHECK_THAT(chi(GroupTag::SU2, 2 * l, t / 2), WithinAbs(chi(GroupTag::SO3, l, t), 1e-12));
        }
    }
}

TEST_CASE("angle densities") {
    CHECK(angle_density(GroupTag::SO3, 0.0) == 0.0);
    CHECK_THAT(angle_density(GroupTag::SO3, pi), WithinAbs(2.0 / pi, 1e-15));
    CHECK(angle_density(GroupTag::SO3, -0.1) == 0.0);
    CHECK(angle_density(GroupTag::SU2, 3.5) == 0.0);
    for (auto g : {GroupTag::SO3, GroupTag::SU2}) {
        const double mass =
            adaptive_simpson([g](double t) { return angle_density(g, t); }, 0.0, pi, 1e-12).value;
        CHECK_THAT(mass, WithinAbs(1.0, 1e-10));
        for (double t : {0.5, 1.5, 2.5}) {
            const double cdf = composite_simpson([g](double s) { return angle_density(g, s); }, 0.0, t);
            CHECK_THAT(angle_cdf(g, t), WithinAbs(cdf, 1e-12));
        }
    }
}

TEST_CASE("trace density of SO(3)") {
    CHECK(trace_density_so3(3.0) == 0.0);
    CHECK(trace_density_so3(4.0) == 0.0);
    CHECK(trace_density_so3(-1.5) == 0.0);
    CHECK_THAT(trace_density_so3(1.0), WithinAbs(1.0 / (2.0 * pi), 1e-15));

    // y = -1 + u^2 below y = 1 and y = 3 - v^2 above it remove both endpoint singularities
    const double r2 = std::sqrt(2.0);
    const double lower = adaptive_simpson(
        [](double u) { return u == 0.0 ? 1.0 / pi * 2.0 : trace_density_so3(-1.0 + u * u) * 2.0 * u; },
        0.0, r2, 1e-12).value;
    const double upper = adaptive_simpson(
        [](double v) { return trace_density_so3(3.0 - v * v) * 2.0 * v; }, 0.0, r2, 1e-12).value;
    CHECK_THAT(lower + upper, WithinAbs(1.0, 1e-8));

    for (double y : {-0.5, 0.0, 1.0, 2.5}) {
        const double u = std::sqrt(y + 1.0);
        const double mass = composite_simpson(
            [](double s) { return s == 0.0 ? 2.0 / pi : trace_density_so3(-1.0 + s * s) * 2.0 * s; },
            0.0, u);
        CHECK_THAT(trace_cdf_so3(y), WithinAbs(mass, 1e-10));
    }
}

TEST_CASE("closed-form coefficients") {
    CHECK_THAT(alpha_closed(GroupTag::SO3, 2), WithinAbs(2.0 / (9.0 * pi), 1e-15));
    CHECK_THAT(alpha_closed(GroupTag::SO3, 2), WithinAbs(0.0707355, 1e-7));
    CHECK_THAT(alpha_closed(GroupTag::SU2, 1), WithinAbs(-16.0 / (9.0 * pi), 1e-15));
    CHECK(alpha_closed(GroupTag::SU2, 4) == 0.0);

    const double so3_l1 = composite_simpson(
        [](double t) { return t * (1.0 + 2.0 * std::cos(t)) * (1.0 - std::cos(t)) / pi; }, 0.0, pi);
    CHECK_THAT(so3_l1, WithinAbs(-2.0 / pi, 1e-12));
    CHECK_THAT(alpha_closed(GroupTag::SO3, 1), WithinAbs(so3_l1, 1e-12));

    const double su2_l0 =
        composite_simpson([](double t) { return t * 2.0 / pi * std::sin(t) * std::sin(t); }, 0.0, pi);
    CHECK_THAT(su2_l0, WithinAbs(pi / 2.0, 1e-12));
    CHECK_THAT(alpha_closed(GroupTag::SU2, 0), WithinAbs(su2_l0, 1e-12));
    CHECK_THAT(alpha_closed(GroupTag::SO3, 0), WithinAbs(pi / 2.0 + 2.0 / pi, 1e-15));
}

TEST_CASE("quadrature coefficients") {
    CHECK_THAT(alpha_quadrature(GroupTag::SO3, 2), WithinAbs(2.0 / (9.0 * pi), 1e-9));
    CHECK_THAT(alpha_quadrature(GroupTag::SO3, 0), WithinAbs(pi / 2.0 + 2.0 / pi, 1e-9));
    CHECK_THAT(alpha_quadrature(GroupTag::SU2, 2), WithinAbs(0.0, 1e-9));
}

TEST_CASE("closed form and quadrature agree up to degree 50") {
    for (auto g : {GroupTag::SO3, GroupTag::SU2}) {
        for (int l = 0; l <= 50; ++l) {
            INFO("group " << to_string(g) << " l " << l);
            REQUIRE_THAT(alpha_quadrature(g, l), WithinAbs(alpha_closed(g, l), 1e-8));
        }
    }
}

TEST_CASE("coefficient sign patterns") {
    for (int l = 1; l <= 50; ++l) {
        if (l % 2 == 0) {
            CHECK(alpha_closed(GroupTag::SO3, l) > 0.0);
            CHECK(alpha_closed(GroupTag::SU2, l) == 0.0);
        } else {
            CHECK(alpha_closed(GroupTag::SO3, l) <= 0.0);
            CHECK(alpha_closed(GroupTag::SU2, l) < 0.0);
        }
    }
}

TEST_CASE("characters are orthonormal for the angle law") {
    for (auto g : {GroupTag::SO3, GroupTag::SU2}) {
        for (int l = 0; l <= 20; ++l) {
            for (int k = l; k <= 20; ++k) {
                const double ip = adaptive_simpson(
                    [&](double t) { return chi(g, l, t) * chi(g, k, t) * angle_density(g, t); },
                    0.0, pi, 1e-11, 64).value;
                REQUIRE_THAT(ip, WithinAbs(l == k ? 1.0 : 0.0, 1e-8));
            }
        }
    }
}

TEST_CASE("Monte Carlo coefficient estimates") {
    const RngStream rng(2024);
    const auto so3 = alpha_monte_carlo(GroupTag::SO3, 2, 1000000, rng.split(1));
    CHECK(std::abs(so3.estimate - 2.0 / (9.0 * pi)) <= 3.0 * so3.std_error);
    const auto su2 = alpha_monte_carlo(GroupTag::SU2, 1, 1000000, rng.split(2));
    CHECK(std::abs(su2.estimate + 16.0 / (9.0 * pi)) <= 3.0 * su2.std_error);

    for (int l : {1, 2, 3}) {
        const auto one = alpha_monte_carlo_fn(GroupTag::SO3, l, 200000, rng.split(10 + l),
                                              [](double) { return 1.0; });
        CHECK(std::abs(one.estimate) <= 3.0 * one.std_error);
    }
    CHECK_THROWS_AS(alpha_monte_carlo(GroupTag::SO3, 2, 999, rng), std::invalid_argument);
}

TEST_CASE("Monte Carlo chunking is deterministic") {
    const RngStream rng(5, 9);
    const auto a = alpha_monte_carlo(GroupTag::SU2, 3, 20000, rng, 4);
    const auto b = alpha_monte_carlo(GroupTag::SU2, 3, 20000, rng, 4);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("partial sums of the character expansion") {
    for (double t : {0.0, 1.0, pi}) CHECK_THAT(partial_sum(GroupTag::SU2, 0, t), WithinAbs(pi / 2, 1e-15));
    CHECK_THAT(partial_sum(GroupTag::SO3, 50, pi / 2), WithinAbs(pi / 2, 0.05));
    for (auto g : {GroupTag::SO3, GroupTag::SU2}) {
        double prev = INFINITY;
        for (int lmax : {0, 1, 3, 7, 15}) {
            const double e = partial_sum_l2_error(g, lmax);
            // oracle: Parseval, ||t||^2 - sum alpha_l^2
            double parseval = adaptive_simpson([g](double t) { return t * t * angle_density(g, t); },
                                               0.0, pi, 1e-13).value;
            for (int l = 0; l <= lmax; ++l) parseval -= alpha_closed(g, l) * alpha_closed(g, l);
            CHECK_THAT(e, WithinAbs(parseval, 1e-9));
            CHECK(e < prev);
            prev = e;
        }
    }
}

TEST_CASE("character Gram matrices are positive semidefinite") {
    RngStream rng(99);
    for (int l : {1, 2, 5}) {
        std::vector<SU2Element> su;
        std::vector<SOnElement> so;
        for (int i = 0; i < 40; ++i) {
            su.push_back(haar_su2(rng));
            so.push_back(haar_son(3, rng));
        }
        Eigen::MatrixXd gs(40, 40), go(40, 40);
        for (int i = 0; i < 40; ++i) {
            for (int j = 0; j < 40; ++j) {
                gs(i, j) = chi(GroupTag::SU2, l, group_angle(su[i] * su[j].inverse()));
                go(i, j) = chi(GroupTag::SO3, l, group_angle(so[i] * so[j].inverse()));
            }
        }
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gs).eigenvalues()(0) >= -1e-8);
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(go).eigenvalues()(0) >= -1e-8);
    }
}

TEST_CASE("coefficient table carries all three methods") {
    CoefficientOptions opt;
    opt.lmax = 3;
    opt.mc_samples = 5000;
    const auto table = coefficient_table(GroupTag::SO3, opt, RngStream(1));
    CHECK(table.entries.size() == 12);
    const auto mc = table.find(2, CoefficientMethod::MonteCarlo);
    REQUIRE(mc);
    CHECK(mc->std_error.has_value());
    CHECK_THAT(table.find(2, CoefficientMethod::Quadrature)->alpha, WithinAbs(2.0 / (9.0 * pi), 1e-9));
    CHECK_FALSE(table.find(4, CoefficientMethod::Closed));
}
