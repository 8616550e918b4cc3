#pragma once

// Curvature engine for the constant quaternionic sectional curvature model
// and the real space form special case. Everything here is pointwise tensor
// algebra on one tangent space, with the metric taken as the dot product.

#include <memory>
#include <stdexcept>

#include "ddvv/quatlin.hpp"

namespace ddvv {

struct degenerate_plane_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Model space with quaternionic sectional curvature c. The structure is
/// validated once at construction and then shared immutably, so copies of
/// the ambient descriptor are cheap.
class SpaceFormAmbient {
public:
    SpaceFormAmbient(double c, QuatStructure structure, double tol = 1e-9)
        : c_(c), j_(std::make_shared<const QuatStructure>(std::move(structure))) {
        const QuatValidation v = validate_quaternionic(*j_, tol);
        if (!v.ok)
            throw std::invalid_argument("SpaceFormAmbient: structure relations violated, worst \"" +
                                        v.worst_relation + "\" residual " + std::to_string(v.max_residual));
    }

    SpaceFormAmbient(double c, std::shared_ptr<const QuatStructure> shared)
        : c_(c), j_(std::move(shared)) {}

    double c() const { return c_; }
    int n() const { return j_->n; }
    const QuatStructure& structure() const { return *j_; }
    const Eigen::MatrixXd& J(int alpha) const { return (*j_)[alpha]; }
    std::shared_ptr<const QuatStructure> shared_structure() const { return j_; }

    SpaceFormAmbient with_curvature(double c) const { return SpaceFormAmbient(c, j_); }

private:
    double c_;
    std::shared_ptr<const QuatStructure> j_;
};

inline SpaceFormAmbient standard_ambient(double c, int m) {
    return SpaceFormAmbient(c, standard_quaternionic_structure(m));
}

/// R(X,Y)Z of the quaternionic space form:
///   (c/4) { g(Y,Z) X - g(X,Z) Y
///           + sum_a [ g(Ja Y, Z) Ja X - g(Ja X, Z) Ja Y + 2 g(Ja Y, X) Ja Z ] }.
inline Eigen::VectorXd qsf_curvature(const SpaceFormAmbient& amb, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
    const int n = amb.n();
    if (x.size() != n || y.size() != n || z.size() != n)
        throw std::invalid_argument("qsf_curvature: vectors must have length n");
    Eigen::VectorXd out = y.dot(z) * x - x.dot(z) * y;
    for (int a = 0; a < 3; ++a) {
        const Eigen::VectorXd jx = amb.J(a) * x;
        const Eigen::VectorXd jy = amb.J(a) * y;
        const Eigen::VectorXd jz = amb.J(a) * z;
        out += jy.dot(z) * jx - jx.dot(z) * jy + 2.0 * jy.dot(x) * jz;
    }
    return 0.25 * amb.c() * out;
}

/// <R(X,Y)Z, W>
inline double qsf_curvature_component(const SpaceFormAmbient& amb, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                                      const Eigen::VectorXd& w) {
    if (w.size() != amb.n()) throw std::invalid_argument("qsf_curvature_component: vectors must have length n");
    return qsf_curvature(amb, x, y, z).dot(w);
}

/// K(X,Y) = <R(X,Y)Y, X> / (|X|^2 |Y|^2 - <X,Y>^2)
inline double sectional_curvature(const SpaceFormAmbient& amb, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y) {
    const double denom = x.squaredNorm() * y.squaredNorm() - x.dot(y) * x.dot(y);
    if (denom <= 1e-14)
        throw degenerate_plane_error("sectional_curvature: degenerate plane (Gram determinant " +
                                     std::to_string(denom) + ")");
    return qsf_curvature_component(amb, x, y, y, x) / denom;
}

/// kappa { g(Y,Z) X - g(X,Z) Y }
inline Eigen::VectorXd real_space_form_curvature(double kappa, const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
    if (x.size() != y.size() || x.size() != z.size())
        throw std::invalid_argument("real_space_form_curvature: vectors must have equal length");
    return kappa * (y.dot(z) * x - x.dot(z) * y);
}

} // namespace ddvv
