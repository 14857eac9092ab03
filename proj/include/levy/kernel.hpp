#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "levy/harmonic.hpp"
#include "levy/rng.hpp"
#include "levy/son.hpp"
#include "levy/su2.hpp"

namespace levy {

/// K(x, y) = 1/2 (d(x, x0) + d(y, x0) - d(x, y)).
template <class T, class Metric>
double brownian_kernel(const Metric& d, const T& x, const T& y, const T& x0) {
    return 0.5 * (d(x, x0) + d(y, x0) - d(x, y));
}

/// Orthonormal basis (m x (m-1)) of the weight vectors summing to zero.
inline Eigen::MatrixXd sum_zero_basis(int m) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
    const Eigen::MatrixXd q = qr.householderQ();
    return q.rightCols(m - 1);
}

inline double quadratic_form(const Eigen::MatrixXd& d, std::span<const double> w) {
    const Eigen::Map<const Eigen::VectorXd> v(w.data(), static_cast<Eigen::Index>(w.size()));
    return v.dot(d * v);
}

template <class T>
struct GramAudit {
    std::vector<T> points;  // base point first if it had to be added
    int base_index = 0;
    Eigen::MatrixXd distances;
    Eigen::MatrixXd kernel;
    /// Largest eigenvalue of D on the sum-zero subspace; > 0 iff some
    /// sum-zero weights give a positive quadratic form.
    double max_centered_eig = 0.0;
    double min_kernel_eig = 0.0;
    double max_abs_kernel_eig = 0.0;
    double max_abs_centered_eig = 0.0;
    Eigen::VectorXd top_weights;  // unit sum-zero vector attaining max_centered_eig

    bool kernel_psd(double rel_tol = 1e-8) const {
        return min_kernel_eig >= -rel_tol * max_abs_kernel_eig;
    }
    bool distance_restricted_nd(double rel_tol = 1e-8) const {
        return max_centered_eig <= rel_tol * max_abs_centered_eig;
    }
};

/// Distance and Brownian-kernel matrices over `points` plus the base point
/// (prepended when no point sits at distance 0 from it), with the extreme
/// eigenvalues that decide both definiteness conditions.
template <class T, class Metric>
GramAudit<T> gram_audit(std::span<const T> points, const Metric& d, const T& x0) {
    if (points.size() < 2) {
        throw std::invalid_argument("gram_audit: need at least two points");
    }
    GramAudit<T> audit;
    int base = -1;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (d(points[i], x0) == 0.0) {
            base = static_cast<int>(i);
            break;
        }
    }
    if (base < 0) {
        audit.points.push_back(x0);
        base = 0;
    }
    audit.points.insert(audit.points.end(), points.begin(), points.end());
    audit.base_index = base;

    const int m = static_cast<int>(audit.points.size());
    Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double v = d(audit.points[i], audit.points[j]);
            if (!std::isfinite(v)) {
                throw std::domain_error("gram_audit: non-finite distance");
            }
            dm(i, j) = dm(j, i) = v;
        }
    }
    Eigen::MatrixXd km(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            km(i, j) = 0.5 * (dm(i, base) + dm(j, base) - dm(i, j));
        }
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ks(km, Eigen::EigenvaluesOnly);
    audit.min_kernel_eig = ks.eigenvalues()(0);
    audit.max_abs_kernel_eig = ks.eigenvalues().cwiseAbs().maxCoeff();

    const Eigen::MatrixXd q = sum_zero_basis(m);
    const Eigen::MatrixXd centered = q.transpose() * dm * q;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> cs(centered);
    audit.max_centered_eig = cs.eigenvalues()(m - 2);
    audit.max_abs_centered_eig = cs.eigenvalues().cwiseAbs().maxCoeff();
    audit.top_weights = q * cs.eigenvectors().col(m - 2);

    audit.distances = std::move(dm);
    audit.kernel = std::move(km);
    return audit;
}

/// Both sides of the equivalence "K positive semidefinite iff d restricted
/// negative definite" evaluated on the same configuration; true when they agree.
template <class T>
bool lemma_equivalence_check(const GramAudit<T>& audit, double rel_tol = 1e-8) {
    return audit.kernel_psd(rel_tol) == audit.distance_restricted_nd(rel_tol);
}

template <class T, class Metric>
bool lemma_equivalence_check(std::span<const T> points, const Metric& d, const T& x0,
                             double rel_tol = 1e-8) {
    return lemma_equivalence_check(gram_audit(points, d, x0), rel_tol);
}

// ---------------------------------------------------------------------------
// Witness certificates

enum class GroupKind { SU2, SO3, SON };

struct GroupSpec {
    GroupKind kind = GroupKind::SO3;
    int n = 3;  // matrix size for SO(n); 2 for SU(2)

    static GroupSpec su2() { return {GroupKind::SU2, 2}; }
    static GroupSpec so3() { return {GroupKind::SO3, 3}; }
    static GroupSpec son(int n) { return n == 3 ? so3() : GroupSpec{GroupKind::SON, n}; }

    std::string name() const {
        switch (kind) {
            case GroupKind::SU2: return "su2";
            case GroupKind::SO3: return "so3";
            case GroupKind::SON: return "son";
        }
        return "?";
    }
    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

class WitnessNotFound : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Points and sum-zero weights with sum_ij w_i w_j d(g_i, g_j) = value > 0.
///
/// Points are stored as matrices: n x n rotations for SO(n), and the 1 x 4
/// row (a1, a2, b1, b2) for SU(2).
struct WitnessCertificate {
    GroupSpec group;
    std::vector<Eigen::MatrixXd> points;
    std::vector<double> weights;
    double value = 0.0;
    double scale = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    int trial = 0;
    std::string method = "eigen";
};

inline SU2Element su2_from_row(const Eigen::MatrixXd& m) {
    if (m.size() != 4) {
        throw std::invalid_argument("certificate: SU(2) point must have 4 entries");
    }
    return make_su2(m(0), m(1), m(2), m(3), 1e-10);
}

inline Eigen::MatrixXd su2_to_row(const SU2Element& g) {
    Eigen::MatrixXd m(1, 4);
    m << g.a1, g.a2, g.b1, g.b2;
    return m;
}

/// Pairwise distance matrix of certificate points under the group metric.
inline Eigen::MatrixXd certificate_distances(const WitnessCertificate& c) {
    const int m = static_cast<int>(c.points.size());
    Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(m, m);
    if (c.group.kind == GroupKind::SU2) {
        std::vector<SU2Element> pts;
        for (const auto& p : c.points) pts.push_back(su2_from_row(p));
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                dm(i, j) = dm(j, i) = c.scale * dist_su2(pts[i], pts[j]);
        return dm;
    }
    std::vector<SOnElement> pts;
    for (const auto& p : c.points) {
        if (p.rows() != c.group.n || p.cols() != c.group.n) {
            throw std::invalid_argument("certificate: point has wrong dimension");
        }
        pts.emplace_back(p);
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            dm(i, j) = dm(j, i) = dist_son(pts[i], pts[j], c.scale);
    return dm;
}

inline double recompute_value(const WitnessCertificate& c) {
    if (c.weights.size() != c.points.size()) {
        throw std::invalid_argument("certificate: weights and points differ in length");
    }
    return quadratic_form(certificate_distances(c), c.weights);
}

/// Sum of weights is 0 within 1e-12, the stored value is reproduced within
/// 1e-10, and the value is positive.
inline bool verify_certificate(const WitnessCertificate& c, double value_tol = 1e-10) {
    double sum = 0.0;
    for (double w : c.weights) sum += w;
    if (std::abs(sum) > 1e-12) {
        return false;
    }
    const double v = recompute_value(c);
    return std::abs(v - c.value) <= value_tol && c.value > 0.0;
}

namespace detail {

/// Centre and normalize to unit length.
inline std::vector<double> centered_unit(const Eigen::VectorXd& w) {
    Eigen::VectorXd v = w.array() - w.mean();
    v /= v.norm();
    v.array() -= v.mean();
    return {v.data(), v.data() + v.size()};
}

template <class T, class Metric, class Sampler, class ToMatrix, class Angle>
WitnessCertificate search_witness(GroupSpec spec, int m, int trials, const RngStream& rng,
                                  double margin, double scale, const Metric& d,
                                  const Sampler& sample, const ToMatrix& to_matrix,
                                  const Angle& angle, GroupTag character_family) {
    const auto draw = [&](int trial) {
        RngStream local = rng.split(static_cast<std::uint64_t>(trial));
        std::vector<T> pts;
        pts.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) pts.push_back(sample(local));
        return pts;
    };
    const auto distance_matrix = [&](const std::vector<T>& pts) {
        Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) dm(i, j) = dm(j, i) = scale * d(pts[i], pts[j]);
        return dm;
    };
    const auto make = [&](const std::vector<T>& pts, std::vector<double> w, double value,
                          int trial, const char* method) {
        WitnessCertificate c;
        c.group = spec;
        for (const auto& p : pts) c.points.push_back(to_matrix(p));
        c.weights = std::move(w);
        c.value = value;
        c.scale = scale;
        c.seed = rng.seed();
        c.stream = rng.stream();
        c.trial = trial;
        c.method = method;
        return c;
    };

    const Eigen::MatrixXd q = sum_zero_basis(m);
    for (int trial = 0; trial < trials; ++trial) {
        const auto pts = draw(trial);
        const Eigen::MatrixXd dm = distance_matrix(pts);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.transpose() * dm * q);
        if (es.eigenvalues()(m - 2) <= margin) {
            continue;
        }
        auto w = centered_unit(q * es.eigenvectors().col(m - 2));
        const double value = quadratic_form(dm, w);
        if (value > margin) {
            return make(pts, std::move(w), value, trial, "eigen");
        }
    }
    // Fallback: weights from the degree-2 character, whose coefficient drives
    // the positive part of the quadratic form when it is positive.
    for (int trial = 0; trial < trials; ++trial) {
        const auto pts = draw(trial);
        const Eigen::MatrixXd dm = distance_matrix(pts);
        Eigen::VectorXd w(m);
        for (int i = 0; i < m; ++i) w(i) = chi(character_family, 2, angle(pts[i]));
        if ((w.array() - w.mean()).matrix().norm() == 0.0) {
            continue;
        }
        auto wc = centered_unit(w);
        const double value = quadratic_form(dm, wc);
        if (value > margin) {
            return make(pts, std::move(wc), value, trial, "character");
        }
    }
    throw WitnessNotFound("no witness of non-negative-definiteness found on " + spec.name() +
                          " with " + std::to_string(m) + " points in " + std::to_string(trials) +
                          " trials");
}

}  // namespace detail

/// diag(g, I) applied to every point; weights unchanged, value recomputed.
inline WitnessCertificate transfer_witness(const WitnessCertificate& c, int n) {
    if (c.group.kind != GroupKind::SO3) {
        throw std::invalid_argument("transfer_witness: source certificate must be on SO(3)");
    }
    if (n <= 3) {
        throw std::invalid_argument("transfer_witness: target dimension must exceed 3");
    }
    WitnessCertificate out = c;
    out.group = GroupSpec::son(n);
    out.points.clear();
    for (const auto& p : c.points) {
        out.points.push_back(embed_so3(SOnElement(p), n).matrix());
    }
    out.value = recompute_value(out);
    return out;
}

/// Same points and weights under the metric multiplied by factor.
inline WitnessCertificate rescale_certificate(const WitnessCertificate& c, double factor) {
    if (!(factor > 0.0)) {
        throw std::invalid_argument("rescale_certificate: factor must be positive");
    }
    WitnessCertificate out = c;
    out.scale *= factor;
    out.value = recompute_value(out);
    return out;
}

/// Randomized search for sum-zero weights making the distance quadratic form
/// positive. Trial k samples m Haar points from rng.split(k) and takes the top
/// eigenvector of D on the sum-zero subspace; the lowest successful trial
/// wins. On SO(n), n > 3, an SO(3) witness is found and embedded.
///
/// Throws WitnessNotFound when no trial clears `margin`, which is the
/// expected outcome on SU(2).
inline WitnessCertificate find_witness(GroupSpec group, int m, int trials, const RngStream& rng,
                                       double margin = 1e-6, double scale = 1.0) {
    if (m < 4) {
        throw std::invalid_argument("find_witness: need at least 4 points");
    }
    if (trials < 1) {
        throw std::invalid_argument("find_witness: need at least one trial");
    }
    switch (group.kind) {
        case GroupKind::SU2:
            return detail::search_witness<SU2Element>(
                group, m, trials, rng, margin, scale,
                [](const SU2Element& a, const SU2Element& b) { return dist_su2(a, b); },
                [](RngStream& r) { return haar_su2(r); }, su2_to_row,
                [](const SU2Element& g) { return angle_su2(g); }, GroupTag::SU2);
        case GroupKind::SO3:
            return detail::search_witness<SOnElement>(
                group, m, trials, rng, margin, scale,
                [](const SOnElement& a, const SOnElement& b) { return dist_son(a, b); },
                [](RngStream& r) { return haar_son(3, r); },
                [](const SOnElement& g) { return g.matrix(); },
                [](const SOnElement& g) { return rotation_angle_so3(g); }, GroupTag::SO3);
        case GroupKind::SON: {
            if (group.n <= 3) {
                return find_witness(GroupSpec::so3(), m, trials, rng, margin, scale);
            }
            return transfer_witness(find_witness(GroupSpec::so3(), m, trials, rng, margin, scale),
                                    group.n);
        }
    }
    throw std::invalid_argument("find_witness: unknown group");
}

}  // namespace levy
