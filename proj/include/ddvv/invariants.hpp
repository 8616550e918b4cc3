#pragma once

// Scalar curvature invariants of a map instance (Ricci, scalar, normalized,
// normal scalar) and the algebraic identity suite that cross-checks the
// curvature machinery against closed forms in the second fundamental form.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ddvv/rmap.hpp"

namespace ddvv {

/// Ric(X) = sum_i g1(R^M(e_i, X) X, e_i) for a unit horizontal X given in
/// frame coordinates (length r). Independent of how X is completed to an
/// orthonormal frame.
inline double ricci_horizontal(const MapInstance& inst, const Eigen::VectorXd& x) {
    const int r = inst.r();
    if (x.size() != r) throw std::invalid_argument("ricci_horizontal: X must have length r");
    if (std::abs(x.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("ricci_horizontal: X must be a unit vector");
    double jterm = 0.0;
    for (int a = 0; a < 3; ++a) jterm += (inst.G(a) * x).squaredNorm();
    const double ambient = 0.25 * inst.c() * ((r - 1) + 3.0 * jterm);
    double zpart = 0.0;
    for (const auto& z : inst.sff().blocks()) {
        const Eigen::VectorXd zx = z * x;
        zpart += x.dot(zx) * z.trace() - zx.squaredNorm();
    }
    return ambient + zpart;
}

/// tau = sum_{i<j} g1(R^M(e_i, e_j) e_j, e_i)
inline double scalar_horizontal(const MapInstance& inst) {
    const int r = inst.r();
    if (r < 2) throw std::invalid_argument("scalar_horizontal: need rank >= 2");
    double tau = 0.0;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) tau += horizontal_curvature_component(inst, i, j, j, i);
    return tau;
}

inline double normalized_scalar(const MapInstance& inst) {
    const int r = inst.r();
    if (r < 2) throw std::invalid_argument("normalized_scalar: need rank >= 2");
    return 2.0 * scalar_horizontal(inst) / (static_cast<double>(r) * (r - 1));
}

/// tau_perp = sqrt( sum_{i<j} sum_{beta<gamma} component^2 ) in the selected
/// mode of the normal curvature.
inline double normal_scalar(const MapInstance& inst, NormalCurvatureMode mode) {
    const int r = inst.r();
    const int q = inst.q();
    if (r < 2) throw std::invalid_argument("normal_scalar: need rank >= 2");
    if (q < 2) return 0.0; // fewer than two normal directions: no pairs
    double ssq = 0.0;
    if (mode == NormalCurvatureMode::commutator_only) {
        for (int b = 0; b < q; ++b)
            for (int g = b + 1; g < q; ++g) {
                const Eigen::MatrixXd m =
                    inst.sff().block(g) * inst.sff().block(b) - inst.sff().block(b) * inst.sff().block(g);
                for (int i = 0; i < r; ++i)
                    for (int j = i + 1; j < r; ++j) ssq += m(i, j) * m(i, j);
            }
        return std::sqrt(ssq);
    }
    // full mode: batch the structure products against the normal frame
    const auto fr = inst.frame().range();
    const auto nv = inst.frame().normal();
    std::vector<Eigen::MatrixXd> bmat(3), cmat(3);
    for (int a = 0; a < 3; ++a) {
        const Eigen::MatrixXd jv = inst.ambient().J(a) * nv; // n x q
        bmat[a] = fr.transpose() * jv;                       // B(i,beta) = <Ja v_beta, F*e_i>
        cmat[a] = nv.transpose() * jv;                       // C(gamma,beta) = <Ja v_beta, v_gamma>
    }
    for (int b = 0; b < q; ++b)
        for (int g = b + 1; g < q; ++g) {
            const Eigen::MatrixXd m =
                inst.sff().block(g) * inst.sff().block(b) - inst.sff().block(b) * inst.sff().block(g);
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) {
                    double js = 0.0;
                    for (int a = 0; a < 3; ++a)
                        js += bmat[a](j, b) * bmat[a](i, g) - bmat[a](i, b) * bmat[a](j, g) +
                              2.0 * inst.G(a)(i, j) * cmat[a](g, b);
                    const double comp = 0.25 * inst.c() * js + m(i, j);
                    ssq += comp * comp;
                }
        }
    return std::sqrt(ssq);
}

inline double normalized_normal_scalar(const MapInstance& inst, NormalCurvatureMode mode) {
    const int r = inst.r();
    if (r < 2) throw std::invalid_argument("normalized_normal_scalar: need rank >= 2");
    return normal_scalar(inst, mode) / (static_cast<double>(r) * (r - 1));
}

struct InvariantReport {
    double ric_x = 0.0;
    double tau_h = 0.0;
    double rho_h = 0.0;
    double tau_perp = 0.0;      // commutator-only
    double tau_perp_full = 0.0;
    double rho_perp = 0.0;      // commutator-only, normalized
    double casorati = 0.0;
    double trace_zeta_norm_sq = 0.0;
};

inline InvariantReport invariant_report(const MapInstance& inst, const Eigen::VectorXd& x) {
    InvariantReport rep;
    rep.ric_x = ricci_horizontal(inst, x);
    rep.tau_h = scalar_horizontal(inst);
    rep.rho_h = normalized_scalar(inst);
    rep.tau_perp = normal_scalar(inst, NormalCurvatureMode::commutator_only);
    rep.tau_perp_full = normal_scalar(inst, NormalCurvatureMode::full);
    rep.rho_perp = normalized_normal_scalar(inst, NormalCurvatureMode::commutator_only);
    rep.casorati = casorati(inst);
    rep.trace_zeta_norm_sq = trace_zeta_norm_sq(inst);
    return rep;
}

struct IdentityResidual {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0; // |lhs-rhs|, relative when |lhs| > 1
};

struct IdentityReport {
    std::vector<IdentityResidual> identities;
    double max_residual = 0.0;

    const IdentityResidual& at(const std::string& name) const {
        for (const auto& id : identities)
            if (id.name == name) return id;
        throw std::invalid_argument("IdentityReport: unknown identity " + name);
    }
};

namespace detail {

inline double sum_g_sq_full(const MapInstance& inst) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += inst.G(a).squaredNorm();
    return s;
}

// sum over unordered pairs i < j with the first frame vector excluded
inline double sum_g_sq_tail_pairs(const MapInstance& inst) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
        const Eigen::MatrixXd& g = inst.G(a);
        for (int i = 1; i < inst.r(); ++i)
            for (int j = i + 1; j < inst.r(); ++j) s += g(i, j) * g(i, j);
    }
    return s;
}

} // namespace detail

/// Evaluates both sides of the algebraic identities tying the Casorati
/// curvature, the mean curvature trace and the scalar curvature to the
/// second fundamental form, each side computed independently. The first
/// frame vector plays the distinguished role (index 0 in storage).
inline IdentityReport identity_suite(const MapInstance& inst) {
    const int r = inst.r();
    if (r < 2) throw std::invalid_argument("identity_suite: need rank >= 2");
    const double c = inst.c();
    const Eigen::VectorXd t = trace_zeta(inst);
    const double tnsq = t.squaredNorm();
    const double znsq = zeta_norm_sq(inst);
    const double tau = scalar_horizontal(inst);
    const double gsum = detail::sum_g_sq_full(inst);

    IdentityReport rep;
    auto push = [&rep](const std::string& name, double lhs, double rhs) {
        IdentityResidual id;
        id.name = name;
        id.lhs = lhs;
        id.rhs = rhs;
        id.residual = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
        rep.identities.push_back(id);
        rep.max_residual = std::max(rep.max_residual, id.residual);
    };

    // r * C_H = |zeta|^2
    push("casorati_scaling", r * casorati(inst), znsq);

    // |zeta|^2 = 1/2 |trace zeta|^2 + 1/2 sum_b (2 zeta_00 - trace)^2
    //            + 2 sum_b sum_{i>=1} zeta(0,i)^2
    //            - 2 sum_b sum_{1<=i<j} ( zeta_ii zeta_jj - zeta_ij^2 )
    {
        double sq_dist = 0.0, cross = 0.0, tail = 0.0;
        for (int b = 0; b < inst.q(); ++b) {
            const Eigen::MatrixXd& z = inst.sff().block(b);
            const double d = 2.0 * z(0, 0) - t(b);
            sq_dist += d * d;
            for (int i = 1; i < r; ++i) cross += z(0, i) * z(0, i);
            for (int i = 1; i < r; ++i)
                for (int j = i + 1; j < r; ++j) tail += z(i, i) * z(j, j) - z(i, j) * z(i, j);
        }
        push("sff_norm_split", znsq, 0.5 * tnsq + 0.5 * sq_dist + 2.0 * cross - 2.0 * tail);
    }

    // (r-1) |trace zeta|^2 = sum_b sum_{i<j} ( (zeta_ii - zeta_jj)^2 + 2 r zeta_ii zeta_jj )
    {
        double rhs = 0.0;
        for (int b = 0; b < inst.q(); ++b) {
            const Eigen::MatrixXd& z = inst.sff().block(b);
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) {
                    const double d = z(i, i) - z(j, j);
                    rhs += d * d + 2.0 * r * z(i, i) * z(j, j);
                }
        }
        push("trace_norm_split", (r - 1.0) * tnsq, rhs);
    }

    // (c/4) r (r-1) + (3c/4) sum_a sum_{i,j} G(i,j)^2 = |zeta|^2 - |trace zeta|^2 + 2 tau
    push("gauss_contraction", 0.25 * c * r * (r - 1) + 0.75 * c * gsum, znsq - tnsq + 2.0 * tau);

    // tau = c r (r-1)/8 + (3c/8) sum_a sum_{i,j} G^2 + sum_b sum_{i<j} ( zeta_ii zeta_jj - zeta_ij^2 )
    {
        double zterm = 0.0;
        for (int b = 0; b < inst.q(); ++b) {
            const Eigen::MatrixXd& z = inst.sff().block(b);
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) zterm += z(i, i) * z(j, j) - z(i, j) * z(i, j);
        }
        push("scalar_split", tau, c * r * (r - 1) / 8.0 + 0.375 * c * gsum + zterm);

        // tau = (c/8)(r-1)(r-2) + (3c/4) sum_a sum_{1<=i<j} G^2
        //       + sum_b sum_{1<=i<j} ( zeta_ii zeta_jj - zeta_ij^2 ) + Ric(e_0)
        double ztail = 0.0;
        for (int b = 0; b < inst.q(); ++b) {
            const Eigen::MatrixXd& z = inst.sff().block(b);
            for (int i = 1; i < r; ++i)
                for (int j = i + 1; j < r; ++j) ztail += z(i, i) * z(j, j) - z(i, j) * z(i, j);
        }
        Eigen::VectorXd e0 = Eigen::VectorXd::Zero(r);
        e0(0) = 1.0;
        const double ric0 = ricci_horizontal(inst, e0);
        push("scalar_ricci_split", tau,
             c * (r - 1) * (r - 2) / 8.0 + 0.75 * c * detail::sum_g_sq_tail_pairs(inst) + ztail + ric0);
    }

    return rep;
}

} // namespace ddvv
