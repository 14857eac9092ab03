#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "levy/rng.hpp"

namespace levy {

/// Element of SU(2), the matrix [[a, b], [-conj(b), conj(a)]] with
/// a = a1 + i a2, b = b1 + i b2 and |a|^2 + |b|^2 = 1. The quadruple is also
/// the corresponding point of the unit sphere S^3 in R^4.
struct SU2Element {
    double a1 = 1.0;
    double a2 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;

    static SU2Element identity() { return {}; }

    double norm() const { return std::sqrt(a1 * a1 + a2 * a2 + b1 * b1 + b2 * b2); }

    bool is_unit(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }

    SU2Element inverse() const { return {a1, -a2, -b1, -b2}; }

    SU2Element operator-() const { return {-a1, -a2, -b1, -b2}; }

    friend bool operator==(const SU2Element&, const SU2Element&) = default;
};

/// Matrix product of the 2x2 complex representatives.
inline SU2Element operator*(const SU2Element& g, const SU2Element& h) {
    // a' = a c - b conj(d),  b' = a d + b conj(c)
    return {g.a1 * h.a1 - g.a2 * h.a2 - g.b1 * h.b1 - g.b2 * h.b2,
            g.a1 * h.a2 + g.a2 * h.a1 + g.b1 * h.b2 - g.b2 * h.b1,
            g.a1 * h.b1 - g.a2 * h.b2 + g.b1 * h.a1 + g.b2 * h.a2,
            g.a1 * h.b2 + g.a2 * h.b1 - g.b1 * h.a2 + g.b2 * h.a1};
}

/// Checked construction; rejects quadruples off the unit sphere.
inline SU2Element make_su2(double a1, double a2, double b1, double b2, double tol = 1e-12) {
    SU2Element g{a1, a2, b1, b2};
    if (!g.is_unit(tol)) {
        throw std::invalid_argument("SU2Element: |a|^2 + |b|^2 must equal 1");
    }
    return g;
}

using S3Point = std::array<double, 4>;

inline S3Point phi(const SU2Element& g) { return {g.a1, g.a2, g.b1, g.b2}; }

inline SU2Element phi_inverse(const S3Point& x) { return make_su2(x[0], x[1], x[2], x[3]); }

/// Hyperspherical coordinates: a1 = cos(theta), a2 = sin(theta) cos(phi),
/// b1 = sin(theta) sin(phi) cos(psi), b2 = sin(theta) sin(phi) sin(psi).
struct PolarCoords {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, pi]
    double psi = 0.0;    // [0, 2 pi)
};

/// At theta in {0, pi} the remaining angles are reported as 0; likewise psi
/// when phi is in {0, pi}.
inline PolarCoords polar(const SU2Element& g) {
    PolarCoords p;
    const double rb = std::hypot(g.b1, g.b2);
    const double r = std::hypot(g.a2, rb);
    p.theta = std::atan2(r, g.a1);
    if (r == 0.0) {
        return p;
    }
    p.phi = std::atan2(rb, g.a2);
    if (rb == 0.0) {
        return p;
    }
    p.psi = std::atan2(g.b2, g.b1);
    if (p.psi < 0.0) {
        p.psi += 2.0 * std::numbers::pi;
    }
    return p;
}

inline SU2Element from_polar(const PolarCoords& p) {
    const double st = std::sin(p.theta);
    const double sp = std::sin(p.phi);
    return {std::cos(p.theta), st * std::cos(p.phi), st * sp * std::cos(p.psi),
            st * sp * std::sin(p.psi)};
}

/// Haar measure on SU(2): a normalized standard Gaussian 4-vector.
inline SU2Element haar_su2(RngStream& rng) {
    for (;;) {
        const double x[4] = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
        if (r > 0.0) {
            return {x[0] / r, x[1] / r, x[2] / r, x[3] / r};
        }
    }
}

/// Geodesic angle of g on S^3 from the identity, in [0, pi].
///
/// Equal to arccos(a1); evaluated as atan2 of the complementary norm so that
/// the result keeps full precision near 0 and pi.
inline double angle_su2(const SU2Element& g) {
    const double r = std::sqrt(g.a2 * g.a2 + g.b1 * g.b1 + g.b2 * g.b2);
    return std::atan2(r, g.a1);
}

/// Bi-invariant distance for the metric -1/2 tr(XY) on su(2).
inline double dist_su2(const SU2Element& g, const SU2Element& h) {
    return angle_su2(g * h.inverse());
}

}  // namespace levy
