#pragma once

// Quaternionic linear algebra: structure triples (J1, J2, J3), adapted
// orthonormal frames, commutators and Frobenius norms.

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

#include "ddvv/rng.hpp"

namespace ddvv {

/// Triple of n x n orthogonal matrices obeying the quaternion relations
/// J_a^2 = -I and J1 J2 = -J2 J1 = J3 (cyclically). n is a multiple of 4.
struct QuatStructure {
    int n = 0;
    std::array<Eigen::MatrixXd, 3> J;

    const Eigen::MatrixXd& operator[](int alpha) const { return J[static_cast<std::size_t>(alpha)]; }
};

/// Block-diagonal structure built from m copies of the 4x4 matrices of left
/// multiplication by i, j, k on quaternion coordinates (1, i, j, k). With
/// this convention every structure relation holds exactly in exact
/// arithmetic: left multiplication is an algebra homomorphism, so
/// J1 J2 = J3 entrywise.
inline QuatStructure standard_quaternionic_structure(int m) {
    if (m <= 0) throw std::invalid_argument("standard_quaternionic_structure: m must be positive");
    const int n = 4 * m;
    Eigen::Matrix4d li, lj, lk;
    li << 0, -1, 0, 0,
          1, 0, 0, 0,
          0, 0, 0, -1,
          0, 0, 1, 0;
    lj << 0, 0, -1, 0,
          0, 0, 0, 1,
          1, 0, 0, 0,
          0, -1, 0, 0;
    lk << 0, 0, 0, -1,
          0, 0, -1, 0,
          0, 1, 0, 0,
          1, 0, 0, 0;
    QuatStructure s;
    s.n = n;
    for (auto& m3 : s.J) m3 = Eigen::MatrixXd::Zero(n, n);
    for (int b = 0; b < m; ++b) {
        s.J[0].block<4, 4>(4 * b, 4 * b) = li;
        s.J[1].block<4, 4>(4 * b, 4 * b) = lj;
        s.J[2].block<4, 4>(4 * b, 4 * b) = lk;
    }
    return s;
}

struct QuatValidation {
    bool ok = false;
    double max_residual = 0.0;
    std::string worst_relation;
};

/// Checks all structure relations with max-abs residuals and reports the
/// worst offender. Square relations are checked before the products so the
/// report names J^2 = -I first on ties.
inline QuatValidation validate_quaternionic(const QuatStructure& s, double tol = 1e-9) {
    for (const auto& j : s.J) {
        if (j.rows() != s.n || j.cols() != s.n)
            throw std::invalid_argument("validate_quaternionic: matrices must be n x n");
    }
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(s.n, s.n);
    QuatValidation v;
    auto consider = [&v](double res, const std::string& name) {
        if (res > v.max_residual) {
            v.max_residual = res;
            v.worst_relation = name;
        }
    };
    static const char* names[3] = {"J1", "J2", "J3"};
    for (int a = 0; a < 3; ++a) {
        consider((s.J[a] * s.J[a] + id).cwiseAbs().maxCoeff(),
                 std::string(names[a]) + "^2 = -I");
    }
    for (int a = 0; a < 3; ++a) {
        consider((s.J[a].transpose() * s.J[a] - id).cwiseAbs().maxCoeff(),
                 std::string(names[a]) + " orthogonal");
    }
    for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3;
        const int c = (a + 2) % 3;
        consider((s.J[a] * s.J[b] - s.J[c]).cwiseAbs().maxCoeff(),
                 std::string(names[a]) + "*" + names[b] + " = " + names[c]);
        consider((s.J[b] * s.J[a] + s.J[c]).cwiseAbs().maxCoeff(),
                 std::string(names[b]) + "*" + names[a] + " = -" + names[c]);
    }
    v.ok = v.max_residual <= tol;
    if (v.worst_relation.empty()) v.worst_relation = "none";
    return v;
}

inline double orthonormality_residual(const Eigen::MatrixXd& m) {
    return (m.transpose() * m - Eigen::MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

/// Orthonormal basis of the target tangent space: the first r columns span
/// the range of the differential (pushed-forward horizontal frame), the
/// remaining n - r columns the normal space.
struct AdaptedFrame {
    int n = 0;
    int r = 0;
    Eigen::MatrixXd columns; // n x n, orthonormal

    auto range() const { return columns.leftCols(r); }
    auto normal() const { return columns.rightCols(n - r); }
};

inline AdaptedFrame make_adapted_frame(int n, int r, Eigen::MatrixXd cols, double tol = 1e-8) {
    if (r <= 0 || r >= n) throw std::invalid_argument("make_adapted_frame: need 0 < r < n");
    if (cols.rows() != n || cols.cols() != n)
        throw std::invalid_argument("make_adapted_frame: columns must be n x n");
    const double res = orthonormality_residual(cols);
    if (res > tol)
        throw std::invalid_argument("make_adapted_frame: columns not orthonormal (residual " +
                                    std::to_string(res) + ")");
    return AdaptedFrame{n, r, std::move(cols)};
}

inline AdaptedFrame identity_frame(int n, int r) {
    return make_adapted_frame(n, r, Eigen::MatrixXd::Identity(n, n));
}

// Flip column signs so the first entry of magnitude > eps is positive.
// Makes QR-produced frames reproducible independent of pivoting details.
inline void normalize_column_signs(Eigen::MatrixXd& m, double eps = 1e-12) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, c)) > eps) {
                if (m(i, c) < 0) m.col(c) = -m.col(c);
                break;
            }
        }
    }
}

inline Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    normalize_column_signs(q);
    return q;
}

/// Deterministic in the seed; orthonormalizes a seeded Gaussian matrix.
inline AdaptedFrame random_adapted_frame(int n, int r, std::uint64_t seed) {
    if (r <= 0 || r >= n) throw std::invalid_argument("random_adapted_frame: need 0 < r < n");
    Rng rng(seed);
    return AdaptedFrame{n, r, random_orthogonal(n, rng)};
}

/// Adapted frame whose range is invariant under all three structures: it is
/// built from r/4 quaternionic 4-planes {X, J1 X, J2 X, J3 X} with random
/// seeds, completed by ordinary Gram-Schmidt on the normal side. Requires r
/// divisible by 4.
inline AdaptedFrame quaternionic_adapted_frame(const QuatStructure& s, int r, std::uint64_t seed) {
    const int n = s.n;
    if (r <= 0 || r >= n) throw std::invalid_argument("quaternionic_adapted_frame: need 0 < r < n");
    if (r % 4 != 0)
        throw std::invalid_argument("quaternionic_adapted_frame: r must be divisible by 4");
    Rng rng(seed);
    Eigen::MatrixXd b(n, n);
    int col = 0;
    auto project_out = [&](Eigen::VectorXd& v) {
        // two Gram-Schmidt passes
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < col; ++k) v -= b.col(k).dot(v) * b.col(k);
    };
    auto draw_unit = [&]() {
        for (;;) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = rng.normal();
            project_out(v);
            const double norm = v.norm();
            if (norm > 1e-8) return Eigen::VectorXd(v / norm);
        }
    };
    for (int blk = 0; blk < r / 4; ++blk) {
        const Eigen::VectorXd x = draw_unit();
        b.col(col++) = x;
        for (int a = 0; a < 3; ++a) {
            Eigen::VectorXd w = s.J[a] * x;
            project_out(w);
            b.col(col++) = w / w.norm();
        }
    }
    while (col < n) b.col(col++) = draw_unit();
    return AdaptedFrame{n, r, std::move(b)};
}

inline Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("commutator: matrices must be square of equal size");
    return a * b - b * a;
}

/// trace(A A^T) for real A
inline double frobenius_norm_sq(const Eigen::MatrixXd& a) { return a.squaredNorm(); }

} // namespace ddvv
