#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "levy/rng.hpp"
#include "levy/su2.hpp"

namespace levy {

inline constexpr double kOrthogonalityTol = 1e-10;

/// Element of SO(n): a real orthogonal n x n matrix with unit determinant.
class SOnElement {
  public:
    /// Throws std::invalid_argument unless g^T g = I and det g = 1 within tol.
    explicit SOnElement(Eigen::MatrixXd m, double tol = kOrthogonalityTol) : m_(std::move(m)) {
        if (m_.rows() < 2 || m_.rows() != m_.cols()) {
            throw std::invalid_argument("SOnElement: matrix must be square with n >= 2");
        }
        const double orth =
            (m_.transpose() * m_ - Eigen::MatrixXd::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
        if (!(orth <= tol)) {
            throw std::invalid_argument("SOnElement: matrix is not orthogonal (deviation " +
                                        std::to_string(orth) + ")");
        }
        if (!(std::abs(m_.determinant() - 1.0) <= tol)) {
            throw std::invalid_argument("SOnElement: determinant is not 1");
        }
    }

    static SOnElement identity(int n) { return SOnElement(Eigen::MatrixXd::Identity(n, n)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXd& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    SOnElement inverse() const { return SOnElement(m_.transpose(), kUnchecked); }

    friend SOnElement operator*(const SOnElement& g, const SOnElement& h) {
        if (g.dim() != h.dim()) {
            throw std::invalid_argument("SOnElement: dimension mismatch in product");
        }
        return SOnElement(g.m_ * h.m_, kUnchecked);
    }

  private:
    struct Unchecked {};
    static constexpr Unchecked kUnchecked{};
    SOnElement(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}

    Eigen::MatrixXd m_;
};

/// Orthonormal basis A_1, A_2, A_3 of so(3) for <A, B> = -1/2 tr(AB);
/// A_k generates rotations about the k-th coordinate axis.
inline Eigen::Matrix3d so3_generator(int k) {
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    switch (k) {
        case 1: a(1, 2) = -1.0; a(2, 1) = 1.0; break;
        case 2: a(0, 2) = 1.0; a(2, 0) = -1.0; break;
        case 3: a(0, 1) = -1.0; a(1, 0) = 1.0; break;
        default: throw std::invalid_argument("so3_generator: index must be 1, 2 or 3");
    }
    return a;
}

/// -1/2 tr(XY) on skew-symmetric matrices.
inline double killing_inner(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return -0.5 * (x * y).trace();
}

/// exp(t A_k) in closed form: I + sin(t) A + (1 - cos t) A^2.
inline SOnElement exp_so3(double t, int k) {
    const Eigen::Matrix3d a = so3_generator(k);
    const Eigen::Matrix3d r =
        Eigen::Matrix3d::Identity() + std::sin(t) * a + (1.0 - std::cos(t)) * (a * a);
    return SOnElement(Eigen::MatrixXd(r));
}

/// The planar rotation [[cos t, sin t, 0], [-sin t, cos t, 0], [0, 0, 1]],
/// i.e. exp(-t A_3). Every rotation of angle t is conjugate to it.
inline SOnElement delta_rotation(double t) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    r(0, 0) = std::cos(t);
    r(0, 1) = std::sin(t);
    r(1, 0) = -std::sin(t);
    r(1, 1) = std::cos(t);
    return SOnElement(Eigen::MatrixXd(r));
}

/// Rotation angle t in [0, pi], defined by tr g = 1 + 2 cos t.
///
/// Computed as atan2(sin t, cos t) with sin t read off the skew part, which
/// equals arccos((tr g - 1) / 2) but stays accurate near t = 0.
inline double rotation_angle_so3(const SOnElement& g) {
    if (g.dim() != 3) {
        throw std::invalid_argument("rotation_angle_so3: element is not in SO(3)");
    }
    const auto& m = g.matrix();
    const double c = std::clamp(0.5 * (m.trace() - 1.0), -1.0, 1.0);
    const double s = 0.5 * std::sqrt((m(2, 1) - m(1, 2)) * (m(2, 1) - m(1, 2)) +
                                     (m(0, 2) - m(2, 0)) * (m(0, 2) - m(2, 0)) +
                                     (m(1, 0) - m(0, 1)) * (m(1, 0) - m(0, 1)));
    return std::atan2(s, c);
}

/// Rotation angles of g, one per invariant plane, each in [0, pi].
///
/// Read from the real Schur form: every 2x2 block contributes the angle of its
/// conjugate eigenvalue pair, and real eigenvalues -1 pair up into angle pi.
/// A lone unpaired -1 (only possible through roundoff) is dropped.
inline std::vector<double> rotation_angles(const SOnElement& g) {
    const Eigen::RealSchur<Eigen::MatrixXd> schur(g.matrix(), /*computeU=*/false);
    const Eigen::MatrixXd& t = schur.matrixT();
    const int n = g.dim();
    std::vector<double> angles;
    int negative_ones = 0;
    for (int i = 0; i < n;) {
        if (i + 1 < n && t(i + 1, i) != 0.0) {
            const double s = std::sqrt(std::abs(t(i, i + 1) * t(i + 1, i)));
            const double c = 0.5 * (t(i, i) + t(i + 1, i + 1));
            angles.push_back(std::atan2(s, c));
            i += 2;
        } else {
            if (t(i, i) < 0.0) {
                ++negative_ones;
            }
            ++i;
        }
    }
    for (int k = 0; k < negative_ones / 2; ++k) {
        angles.push_back(std::numbers::pi);
    }
    return angles;
}

/// Bi-invariant distance from the metric scale * (-1/2 tr(XY)) on so(n):
/// scale * sqrt(sum of squared rotation angles of g h^T).
inline double dist_son(const SOnElement& g, const SOnElement& h, double scale = 1.0) {
    if (g.dim() != h.dim()) {
        throw std::invalid_argument("dist_son: elements of SO(" + std::to_string(g.dim()) +
                                    ") and SO(" + std::to_string(h.dim()) + ")");
    }
    if (!(scale > 0.0)) {
        throw std::invalid_argument("dist_son: scale must be positive");
    }
    const SOnElement rel = g * h.inverse();
    double sum = 0.0;
    for (double a : rotation_angles(rel)) {
        sum += a * a;
    }
    return scale * std::sqrt(sum);
}

/// diag(g, I_{n-3}).
inline SOnElement embed_so3(const SOnElement& g, int n) {
    if (g.dim() != 3) {
        throw std::invalid_argument("embed_so3: element is not in SO(3)");
    }
    if (n <= 3) {
        throw std::invalid_argument("embed_so3: target dimension must exceed 3");
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    m.topLeftCorner(3, 3) = g.matrix();
    return SOnElement(std::move(m));
}

/// Haar measure on SO(n): QR of a Gaussian matrix with the diagonal of R made
/// positive, then one column negated if the determinant came out as -1.
inline SOnElement haar_son(int n, RngStream& rng) {
    if (n < 2) {
        throw std::invalid_argument("haar_son: n must be at least 2");
    }
    for (;;) {
        Eigen::MatrixXd z(n, n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                z(i, j) = rng.normal();
            }
        }
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
        const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        Eigen::MatrixXd q = qr.householderQ();
        bool singular = false;
        for (int j = 0; j < n; ++j) {
            if (r(j, j) == 0.0) {
                singular = true;
                break;
            }
            if (r(j, j) < 0.0) {
                q.col(j) *= -1.0;
            }
        }
        if (singular) {
            continue;
        }
        if (q.determinant() < 0.0) {
            q.col(0) *= -1.0;
        }
        return SOnElement(std::move(q));
    }
}

/// The adjoint representation SU(2) -> SO(3), a 2-to-1 homomorphism with
/// kernel {e, -e}.
inline SOnElement ad_morphism(const SU2Element& g) {
    const double a1 = g.a1, a2 = g.a2, b1 = g.b1, b2 = g.b2;
    Eigen::MatrixXd m(3, 3);
    m << a1 * a1 - a2 * a2 - (b1 * b1 - b2 * b2), -2.0 * a1 * a2 - 2.0 * b1 * b2,
        -2.0 * (a1 * b1 - a2 * b2),
        2.0 * a1 * a2 - 2.0 * b1 * b2, (a1 * a1 - a2 * a2) + (b1 * b1 - b2 * b2),
        -2.0 * (a1 * b2 + a2 * b1),
        2.0 * (a1 * b1 + a2 * b2), -2.0 * (-a1 * b2 + a2 * b1),
        (a1 * a1 + a2 * a2) - (b1 * b1 + b2 * b2);
    return SOnElement(std::move(m));
}

inline SOnElement haar_so3_via_ad(RngStream& rng) { return ad_morphism(haar_su2(rng)); }

/// Angle in [0, 2 pi) of an element of SO(2).
inline double planar_angle(const SOnElement& g) {
    if (g.dim() != 2) {
        throw std::invalid_argument("planar_angle: element is not in SO(2)");
    }
    double a = std::atan2(g(1, 0), g(0, 0));
    if (a < 0.0) {
        a += 2.0 * std::numbers::pi;
    }
    return a < 2.0 * std::numbers::pi ? a : 0.0;
}

}  // namespace levy
