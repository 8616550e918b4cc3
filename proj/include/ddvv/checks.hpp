#pragma once

// Inequality verdicts: the pointwise Ricci curvature bound ("theorem1"), the
// Wintgen-type bound on normalized curvatures ("theorem2"), the matrix
// commutator bound ("lemma2"), the generic commutator ratio, and the
// submanifold DDVV inequality in a real space form as the immersion case.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ddvv/invariants.hpp"

namespace ddvv {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultEqTol = 1e-8;

struct undefined_ratio_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Family of r x r real symmetric matrices sharing one dimension.
class MatrixFamily {
public:
    static MatrixFamily symmetric(std::vector<Eigen::MatrixXd> mats, double sym_tol = 1e-12) {
        if (mats.empty()) throw std::invalid_argument("MatrixFamily: empty family");
        const Eigen::Index r = mats.front().rows();
        for (const auto& m : mats) {
            if (m.rows() != r || m.cols() != r)
                throw std::invalid_argument("MatrixFamily: dimension mismatch within family");
            if ((m - m.transpose()).cwiseAbs().maxCoeff() > sym_tol)
                throw std::invalid_argument("MatrixFamily: matrix not symmetric");
        }
        MatrixFamily f;
        f.r_ = static_cast<int>(r);
        f.mats_ = std::move(mats);
        return f;
    }

    int r() const { return r_; }
    int size() const { return static_cast<int>(mats_.size()); }
    const std::vector<Eigen::MatrixXd>& mats() const { return mats_; }
    const Eigen::MatrixXd& at(int k) const { return mats_[static_cast<std::size_t>(k)]; }

    /// Projects each member onto traceless symmetric matrices.
    MatrixFamily traceless() const {
        std::vector<Eigen::MatrixXd> out = mats_;
        for (auto& m : out)
            m -= (m.trace() / r_) * Eigen::MatrixXd::Identity(r_, r_);
        return symmetric(std::move(out));
    }

private:
    int r_ = 0;
    std::vector<Eigen::MatrixXd> mats_;
};

inline MatrixFamily sff_family(const Sff& s) { return MatrixFamily::symmetric(s.blocks()); }

namespace detail {

/// Orthogonal r x r reflection P with P e0 = x (identity when x is already
/// the first axis). Columns of P form an orthonormal frame whose first
/// vector is x.
inline Eigen::MatrixXd reflection_to_first_axis(const Eigen::VectorXd& x) {
    const Eigen::Index r = x.size();
    Eigen::VectorXd v = -x;
    v(0) += 1.0;
    const double vsq = v.squaredNorm();
    if (vsq < 1e-28) return Eigen::MatrixXd::Identity(r, r);
    return Eigen::MatrixXd::Identity(r, r) - (2.0 / vsq) * v * v.transpose();
}

} // namespace detail

/// Pointwise Ricci bound for a unit horizontal X (frame coordinates):
///   4 Ric(X) <= c (r-1) + |trace zeta|^2 + 3 c sum_a sum_i <Ja F*X, F*e_i>^2.
/// Equality holds iff, in a frame whose first vector is X, all mixed
/// components zeta(X, e_i) vanish and zeta(X, X) is half the trace.
inline Verdict ricci_bound_check(const MapInstance& inst, const Eigen::VectorXd& x,
                                 double tol = kDefaultTol, double eq_tol = kDefaultEqTol) {
    const int r = inst.r();
    if (r < 2) throw std::invalid_argument("ricci_bound_check: need rank >= 2");
    const double lhs = 4.0 * ricci_horizontal(inst, x);
    double jterm = 0.0;
    for (int a = 0; a < 3; ++a) jterm += (inst.G(a) * x).squaredNorm();
    const double rhs = inst.c() * (r - 1) + trace_zeta_norm_sq(inst) + 3.0 * inst.c() * jterm;
    Verdict v = make_verdict("theorem1", lhs, rhs, tol, eq_tol);

    const Eigen::MatrixXd p = detail::reflection_to_first_axis(x);
    double res_mixed = 0.0;
    double res_half_trace = 0.0;
    for (const auto& z : inst.sff().blocks()) {
        const Eigen::MatrixXd zt = p.transpose() * z * p;
        for (int i = 1; i < r; ++i) res_mixed = std::max(res_mixed, std::abs(zt(0, i)));
        res_half_trace = std::max(res_half_trace, std::abs(zt(0, 0) - 0.5 * z.trace()));
    }
    v.conditions.push_back({"zeta_x_offdiag", res_mixed <= eq_tol, res_mixed});
    v.conditions.push_back({"zeta_x_half_trace", res_half_trace <= eq_tol, res_half_trace});
    v.diagnostics.emplace_back("ricci", 0.25 * lhs);
    return v;
}

/// Wintgen-type bound on normalized curvatures:
///   rho_perp + rho_h <= |trace zeta|^2 / r^2 + c/4
///                       + 3c/(4 r (r-1)) sum_a sum_{i,j} <Ja F*e_i, F*e_j>^2.
/// rho_perp defaults to the commutator-only normal curvature (the quantity
/// the bound is proved for); the full-mode value keeps the ambient normal
/// term and is attached to the diagnostics alongside their difference.
inline Verdict wintgen_check(const MapInstance& inst, double tol = kDefaultTol,
                             double eq_tol = kDefaultEqTol,
                             NormalCurvatureMode mode = NormalCurvatureMode::commutator_only) {
    const int r = inst.r();
    if (r < 2) throw std::invalid_argument("wintgen_check: need rank >= 2");
    if (inst.q() < 1) throw std::invalid_argument("wintgen_check: need at least one normal direction");
    const double rho_h = normalized_scalar(inst);
    const double tau_perp_comm = normal_scalar(inst, NormalCurvatureMode::commutator_only);
    const double tau_perp_full = normal_scalar(inst, NormalCurvatureMode::full);
    const double rr1 = static_cast<double>(r) * (r - 1);
    const double rho_perp_comm = tau_perp_comm / rr1;
    const double rho_perp_full = tau_perp_full / rr1;
    const double rho_perp = (mode == NormalCurvatureMode::full) ? rho_perp_full : rho_perp_comm;

    const double lhs = rho_perp + rho_h;
    const double gsum = detail::sum_g_sq_full(inst);
    const double rhs = trace_zeta_norm_sq(inst) / (static_cast<double>(r) * r) + 0.25 * inst.c() +
                       0.75 * inst.c() * gsum / rr1;
    Verdict v = make_verdict("theorem2", lhs, rhs, tol, eq_tol);
    v.mode = (mode == NormalCurvatureMode::full) ? "full" : "commutator-only";
    v.diagnostics.emplace_back("rho_h", rho_h);
    v.diagnostics.emplace_back("rho_perp_commutator_only", rho_perp_comm);
    v.diagnostics.emplace_back("rho_perp_full", rho_perp_full);
    v.diagnostics.emplace_back("tau_perp_commutator_only", tau_perp_comm);
    v.diagnostics.emplace_back("tau_perp_full", tau_perp_full);
    v.diagnostics.emplace_back("ambient_normal_discrepancy", std::abs(tau_perp_full - tau_perp_comm));
    return v;
}

/// Matrix commutator bound for a family of symmetric matrices:
///   2 r sqrt( sum_{b<g} sum_{i<j} ([A_g, A_b](i,j))^2 )
///     <= sum_b sum_{i<j} (A_ii - A_jj)^2 + 2 r sum_b sum_{i<j} A_ij^2.
/// The sqrt side is stored as lhs so that gap >= 0 means the bound holds.
inline Verdict commutator_bound_check(const MatrixFamily& fam, double tol = kDefaultTol,
                                      double eq_tol = kDefaultEqTol) {
    const int r = fam.r();
    double rhs = 0.0;
    for (const auto& a : fam.mats())
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                const double d = a(i, i) - a(j, j);
                rhs += d * d + 2.0 * r * a(i, j) * a(i, j);
            }
    double ssq = 0.0;
    for (int b = 0; b < fam.size(); ++b)
        for (int g = b + 1; g < fam.size(); ++g) {
            const Eigen::MatrixXd m = fam.at(g) * fam.at(b) - fam.at(b) * fam.at(g);
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) ssq += m(i, j) * m(i, j);
        }
    const double lhs = 2.0 * r * std::sqrt(ssq);
    return make_verdict("lemma2", lhs, rhs, tol, eq_tol);
}

/// sum_{b,g} |[A_b, A_g]|^2 / ( sum_b |A_b|^2 )^2 over ordered pairs: the
/// smallest constant making the generic commutator estimate hold for this
/// family. Invariant under scaling of the family.
inline double commutator_ratio(const MatrixFamily& fam) {
    double den = 0.0;
    for (const auto& a : fam.mats()) den += a.squaredNorm();
    if (den <= 0.0) throw undefined_ratio_error("commutator_ratio: all-zero family");
    double num = 0.0;
    for (int b = 0; b < fam.size(); ++b)
        for (int g = b + 1; g < fam.size(); ++g)
            num += 2.0 * (fam.at(b) * fam.at(g) - fam.at(g) * fam.at(b)).squaredNorm();
    return num / (den * den);
}

/// Immersed submanifold of a real space form with constant curvature kappa,
/// modeled by the rank and the second fundamental form (trivial kernel).
struct SubmanifoldData {
    double kappa = 0.0;
    int r = 0;
    Sff zeta;
};

/// DDVV (normal scalar curvature) inequality for the immersion case:
///   rho + rho_perp <= |H|^2 + kappa.
inline Verdict submanifold_ddvv_check(const SubmanifoldData& data, double tol = kDefaultTol,
                                      double eq_tol = kDefaultEqTol) {
    const int r = data.r;
    if (r < 2) throw std::invalid_argument("submanifold_ddvv_check: need dimension >= 2");
    if (data.zeta.r() != r) throw std::invalid_argument("submanifold_ddvv_check: zeta rank mismatch");
    const double rr1 = static_cast<double>(r) * (r - 1);
    double gauss = 0.0;
    for (const auto& z : data.zeta.blocks())
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) gauss += z(i, i) * z(j, j) - z(i, j) * z(i, j);
    const double tau = data.kappa * rr1 / 2.0 + gauss;
    const double rho = 2.0 * tau / rr1;

    double ssq = 0.0;
    for (int b = 0; b < data.zeta.q(); ++b)
        for (int g = b + 1; g < data.zeta.q(); ++g) {
            const Eigen::MatrixXd m =
                data.zeta.block(g) * data.zeta.block(b) - data.zeta.block(b) * data.zeta.block(g);
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) ssq += m(i, j) * m(i, j);
        }
    const double rho_perp = std::sqrt(ssq) / rr1;
    const double h_norm_sq = trace_zeta_norm_sq(data.zeta) / (static_cast<double>(r) * r);

    Verdict v = make_verdict("ddvv", rho + rho_perp, h_norm_sq + data.kappa, tol, eq_tol);
    v.diagnostics.emplace_back("rho", rho);
    v.diagnostics.emplace_back("rho_perp", rho_perp);
    v.diagnostics.emplace_back("mean_curvature_norm_sq", h_norm_sq);
    return v;
}

} // namespace ddvv
