// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.
// All randomness derives from seed 0 with a distinct stream per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "levy/levy.hpp"

using namespace levy;

namespace {

constexpr double pi = std::numbers::pi;
const RngStream kRoot(0);

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. alpha_2 on SO(3) by three routes.
Outcome alpha2_so3() {
    const auto t0 = std::chrono::steady_clock::now();
    const double target = 2.0 / (9.0 * pi);
    const double closed = alpha_closed(GroupTag::SO3, 2);
    const double quad = alpha_quadrature(GroupTag::SO3, 2, 1e-10);
    const auto mc = alpha_monte_carlo(GroupTag::SO3, 2, 1000000, kRoot.split(1));
    const double secs = seconds_since(t0);
    const bool ok = std::abs(closed - target) <= 1e-9 && std::abs(quad - target) <= 1e-9 &&
                    std::abs(closed - quad) <= 1e-8 &&
                    std::abs(mc.estimate - target) <= 3.0 * mc.std_error && secs < 30.0;
    return {ok, fmt("closed=%.10f quad=%.10f mc=%.6f+-%.6f target=%.10f (%.1fs)", closed, quad,
                    mc.estimate, mc.std_error, target, secs)};
}

// 2. SO(3) sign pattern for l <= 50.
Outcome so3_signs() {
    int bad_sign = 0, bad_agree = 0;
    double min_even = INFINITY, max_odd = -INFINITY;
    for (int l = 1; l <= 50; ++l) {
        const double c = alpha_closed(GroupTag::SO3, l);
        const double q = alpha_quadrature(GroupTag::SO3, l, 1e-10);
        bad_agree += std::abs(c - q) > 1e-8;
        if (l % 2 == 0) {
            bad_sign += !(c > 0.0 && q > 0.0);
            min_even = std::min(min_even, c);
        } else {
            bad_sign += !(c <= 0.0);
            max_odd = std::max(max_odd, c);
        }
    }
    return {bad_sign == 0 && bad_agree == 0,
            fmt("sign violations=%d, closed/quadrature disagreements=%d, min even=%.3e, max odd=%.3e",
                bad_sign, bad_agree, min_even, max_odd)};
}

// 3. SU(2) coefficients for l <= 50.
Outcome su2_coefficients() {
    int bad = 0;
    double worst_even = 0.0;
    for (int l = 1; l <= 50; ++l) {
        const double c = alpha_closed(GroupTag::SU2, l);
        const double q = alpha_quadrature(GroupTag::SU2, l, 1e-10);
        if (l % 2 == 0) {
            worst_even = std::max(worst_even, std::abs(q));
            bad += std::abs(q) > 1e-9;
        }
        bad += !(c <= 0.0) || q > 1e-9 || std::abs(c - q) > 1e-8;
    }
    const double a1 = alpha_quadrature(GroupTag::SU2, 1, 1e-10);
    const double target = -16.0 / (9.0 * pi);
    const bool ok = bad == 0 && std::abs(a1 - target) <= 1e-9 &&
                    std::abs(alpha_closed(GroupTag::SU2, 1) - target) <= 1e-9;
    return {ok, fmt("alpha_1 quad=%.12f target=%.12f, max |even alpha|=%.2e, violations=%d", a1,
                    target, worst_even, bad)};
}

// 4. KS tests of Haar samples against the angle and trace laws.
Outcome density_laws() {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream so(kRoot.split(4)), su(kRoot.split(40));
    std::vector<double> angle, trace, su_angle;
    for (int i = 0; i < 100000; ++i) {
        const auto g = haar_son(3, so);
        angle.push_back(rotation_angle_so3(g));
        trace.push_back(g.matrix().trace());
        su_angle.push_back(angle_su2(haar_su2(su)));
    }
    const auto ka = ks_test(angle, [](double t) { return angle_cdf(GroupTag::SO3, t); });
    const auto kt = ks_test(trace, trace_cdf_so3);
    const auto ks = ks_test(su_angle, [](double t) { return angle_cdf(GroupTag::SU2, t); });
    const double secs = seconds_since(t0);
    const bool ok = ka.p_value > 0.01 && kt.p_value > 0.01 && ks.p_value > 0.01 && secs < 60.0;
    return {ok, fmt("p(SO3 angle)=%.3f p(SO3 trace)=%.3f p(SU2 angle)=%.3f (%.1fs)", ka.p_value,
                    kt.p_value, ks.p_value, secs)};
}

// 5. Witness certificates on SO(3), transferred to SO(4) and SO(7).
Outcome witnesses() {
    int found = 0, verified = 0, single_trial = 0;
    double worst_transfer = 0.0, min_value = INFINITY;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const RngStream rng(seed);
        try {
            // same call the CLI makes for `witness --group so3 --points 100 --seed <seed>`
            const auto cert = find_witness(GroupSpec::so3(), 100, 10, rng);
            single_trial += cert.trial == 0 && cert.method == "eigen";
            if (cert.value <= 1e-6) continue;
            ++found;
            min_value = std::min(min_value, cert.value);
            const auto parsed =
                certificate_from_json(Json::parse(canonical_json(certificate_to_json(cert))));
            if (!verify_certificate(parsed)) continue;
            bool transfer_ok = true;
            for (int n : {4, 7}) {
                const auto t = transfer_witness(parsed, n);
                const double diff = std::abs(t.value - cert.value);
                worst_transfer = std::max(worst_transfer, diff);
                transfer_ok = transfer_ok && diff <= 1e-10 && verify_certificate(t);
            }
            verified += transfer_ok;
        } catch (const WitnessNotFound&) {
        }
    }
    return {verified >= 95,
            fmt("found=%d/100 verified+transferred=%d, first-trial successes=%d, min value=%.4f, "
                "max transfer drift=%.2e",
                found, verified, single_trial, min_value, worst_transfer)};
}

// 6. SU(2) audits.
Outcome su2_audits() {
    int bad = 0;
    double worst_centered = -INFINITY, worst_k = INFINITY;
    for (int a = 0; a < 100; ++a) {
        RngStream rng = kRoot.split(600 + a);
        std::vector<SU2Element> pts;
        for (int i = 0; i < 100; ++i) pts.push_back(haar_su2(rng));
        const auto audit = gram_audit<SU2Element>(
            pts, [](const SU2Element& x, const SU2Element& y) { return dist_su2(x, y); },
            SU2Element::identity());
        worst_centered = std::max(worst_centered, audit.max_centered_eig);
        worst_k = std::min(worst_k, audit.min_kernel_eig);
        bad += !(audit.min_kernel_eig >= -1e-8 && audit.max_centered_eig <= 1e-8 &&
                 lemma_equivalence_check(audit));
    }
    return {bad == 0, fmt("failing audits=%d, max centered eig=%.2e, min K eig=%.2e", bad,
                          worst_centered, worst_k)};
}

// 7. Variogram of the simulated field.
Outcome field_law() {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream rng = kRoot.split(7);
    std::vector<SU2Element> pts;
    for (int i = 0; i < 49; ++i) pts.push_back(haar_su2(rng));
    auto fs = build_field_su2(pts, SU2Element::identity());
    sample_field(fs, 10000, kRoot.split(70));
    const auto vg = empirical_variogram(fs);
    const double coverage = variogram_coverage(vg);
    const bool pinned = fs.values.row(0).cwiseAbs().maxCoeff() == 0.0;
    const double secs = seconds_since(t0);
    return {coverage >= 0.95 && pinned && fs.size() == 50 && secs < 120.0,
            fmt("points=%d pairs=%zu coverage=%.4f base pinned=%s (%.1fs)", fs.size(), vg.size(),
                coverage, pinned ? "yes" : "no", secs)};
}

// 8. Double-integral identity for l = 1..8 on both groups.
Outcome double_integral_identity() {
    int bad = 0;
    double worst = 0.0;
    for (auto g : {GroupTag::SO3, GroupTag::SU2}) {
        for (int l = 1; l <= 8; ++l) {
            const auto mc = alpha_monte_carlo(g, l, 1000000,
                                              kRoot.split(800 + 10 * (g == GroupTag::SU2) + l));
            const double z = std::abs(mc.estimate - alpha_closed(g, l)) / mc.std_error;
            worst = std::max(worst, z);
            bad += z > 3.0;
        }
    }
    return {bad == 0, fmt("degrees outside 3 stderr=%d/16, worst |z|=%.2f", bad, worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 alpha_2(SO3) = 2/(9 pi) by closed form, quadrature and Monte Carlo", alpha2_so3},
        {"AC2 SO3 coefficient signs for l <= 50", so3_signs},
        {"AC3 SU2 coefficients for l <= 50", su2_coefficients},
        {"AC4 KS tests of Haar angle/trace laws", density_laws},
        {"AC5 SO3 witness certificates and SO(4)/SO(7) transfer", witnesses},
        {"AC6 SU2 positive definiteness audits", su2_audits},
        {"AC7 SU2 Brownian field variogram", field_law},
        {"AC8 double-integral identity times d_l vs closed form", double_integral_identity},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
