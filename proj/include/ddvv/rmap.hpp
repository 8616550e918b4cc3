#pragma once

// Pointwise model of a Riemannian map into the quaternionic space form:
// second fundamental form components, shape operators, and the horizontal /
// normal curvatures induced through the Gauss and Ricci equations.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ddvv/ambient.hpp"

namespace ddvv {

/// Second fundamental form components zeta[beta](i,j) against the normal
/// frame, symmetric in (i, j). Inputs are symmetrized at construction,
/// zeta <- (zeta + zeta^T)/2, and the worst asymmetry seen is recorded.
class Sff {
public:
    static Sff symmetrized(std::vector<Eigen::MatrixXd> blocks) {
        if (blocks.empty()) throw std::invalid_argument("Sff: need at least one normal direction");
        const Eigen::Index r = blocks.front().rows();
        if (r <= 0) throw std::invalid_argument("Sff: blocks must be nonempty square matrices");
        double asym = 0.0;
        for (auto& z : blocks) {
            if (z.rows() != r || z.cols() != r)
                throw std::invalid_argument("Sff: all blocks must be r x r");
            asym = std::max(asym, (z - z.transpose()).cwiseAbs().maxCoeff());
            z = ((z + z.transpose()) * 0.5).eval();
        }
        Sff s;
        s.r_ = static_cast<int>(r);
        s.blocks_ = std::move(blocks);
        s.max_asymmetry_ = asym;
        return s;
    }

    static Sff zero(int r, int q) {
        if (r <= 0 || q <= 0) throw std::invalid_argument("Sff::zero: need r > 0 and q > 0");
        std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(q),
                                            Eigen::MatrixXd::Zero(r, r));
        return symmetrized(std::move(blocks));
    }

    int r() const { return r_; }
    int q() const { return static_cast<int>(blocks_.size()); }
    double max_asymmetry() const { return max_asymmetry_; }

    const Eigen::MatrixXd& block(int beta) const {
        if (beta < 0 || beta >= q()) throw std::invalid_argument("Sff: normal index out of range");
        return blocks_[static_cast<std::size_t>(beta)];
    }
    const std::vector<Eigen::MatrixXd>& blocks() const { return blocks_; }

    Sff scaled(double t) const {
        std::vector<Eigen::MatrixXd> b = blocks_;
        for (auto& z : b) z *= t;
        return symmetrized(std::move(b));
    }

private:
    int r_ = 0;
    std::vector<Eigen::MatrixXd> blocks_;
    double max_asymmetry_ = 0.0;
};

inline Eigen::VectorXd trace_zeta(const Sff& s) {
    Eigen::VectorXd t(s.q());
    for (int b = 0; b < s.q(); ++b) t(b) = s.block(b).trace();
    return t;
}

inline double zeta_norm_sq(const Sff& s) {
    double out = 0.0;
    for (const auto& z : s.blocks()) out += z.squaredNorm();
    return out;
}

inline double trace_zeta_norm_sq(const Sff& s) { return trace_zeta(s).squaredNorm(); }

/// Casorati curvature of the horizontal space, |zeta|^2 / r.
inline double casorati(const Sff& s) { return zeta_norm_sq(s) / s.r(); }

/// Full pointwise data of a Riemannian map into the model space: curvature
/// constant, adapted frame and second fundamental form. Immutable after
/// construction; the frame and the cached frame products are shared between
/// copies, so with_sff / with_curvature are cheap.
class MapInstance {
public:
    MapInstance(SpaceFormAmbient amb, AdaptedFrame frame, Sff sff)
        : MapInstance(std::move(amb), std::make_shared<const AdaptedFrame>(std::move(frame)),
                      std::move(sff)) {}

    MapInstance(SpaceFormAmbient amb, std::shared_ptr<const AdaptedFrame> frame, Sff sff)
        : amb_(std::move(amb)), frame_(std::move(frame)), sff_(std::move(sff)) {
        if (frame_->n != amb_.n()) throw std::invalid_argument("MapInstance: frame.n != ambient n");
        if (frame_->r <= 0 || frame_->r >= frame_->n)
            throw std::invalid_argument("MapInstance: need 0 < r < n");
        if (sff_.r() != frame_->r) throw std::invalid_argument("MapInstance: sff.r != rank");
        if (sff_.q() != frame_->n - frame_->r)
            throw std::invalid_argument("MapInstance: sff.q != n - r");
        auto g = std::make_shared<std::array<Eigen::MatrixXd, 3>>();
        const auto fr = frame_->range();
        for (int a = 0; a < 3; ++a) (*g)[a] = fr.transpose() * amb_.J(a) * fr;
        range_j_ = std::move(g);
    }

    int n() const { return frame_->n; }
    int r() const { return frame_->r; }
    int q() const { return frame_->n - frame_->r; }
    double c() const { return amb_.c(); }

    const SpaceFormAmbient& ambient() const { return amb_; }
    const AdaptedFrame& frame() const { return *frame_; }
    std::shared_ptr<const AdaptedFrame> shared_frame() const { return frame_; }
    const Sff& sff() const { return sff_; }

    /// G[a] = Fr^T Ja Fr, the structure products on the pushed-forward frame;
    /// G[a](i,j) = <Ja F*e_j, F*e_i>, antisymmetric.
    const Eigen::MatrixXd& G(int alpha) const { return (*range_j_)[static_cast<std::size_t>(alpha)]; }

    MapInstance with_sff(Sff s) const {
        MapInstance out = *this;
        if (s.r() != r() || s.q() != q())
            throw std::invalid_argument("MapInstance::with_sff: shape mismatch");
        out.sff_ = std::move(s);
        return out;
    }

    MapInstance with_curvature(double c) const {
        MapInstance out = *this;
        out.amb_ = amb_.with_curvature(c);
        return out;
    }

private:
    SpaceFormAmbient amb_;
    std::shared_ptr<const AdaptedFrame> frame_;
    Sff sff_;
    std::shared_ptr<const std::array<Eigen::MatrixXd, 3>> range_j_;
};

/// Shape operator of the normal direction v_beta expressed in the
/// pushed-forward frame. Its (i,j) entry is zeta(i,j) for that direction.
inline Eigen::MatrixXd shape_operator(const MapInstance& inst, int beta) {
    return inst.sff().block(beta);
}

inline Eigen::VectorXd trace_zeta(const MapInstance& inst) { return trace_zeta(inst.sff()); }
inline double zeta_norm_sq(const MapInstance& inst) { return zeta_norm_sq(inst.sff()); }
inline double trace_zeta_norm_sq(const MapInstance& inst) { return trace_zeta_norm_sq(inst.sff()); }
inline double casorati(const MapInstance& inst) { return casorati(inst.sff()); }

namespace detail {

inline void require_range_index(const MapInstance& inst, int i, const char* what) {
    if (i < 0 || i >= inst.r()) throw std::invalid_argument(std::string(what) + ": range index out of bounds");
}

inline void require_normal_index(const MapInstance& inst, int b, const char* what) {
    if (b < 0 || b >= inst.q()) throw std::invalid_argument(std::string(what) + ": normal index out of bounds");
}

/// Ambient curvature component on pushed-forward frame vectors, via the
/// cached products G[a].
inline double ambient_frame_component(const MapInstance& inst, int i, int j, int k, int l) {
    const double id = (j == k && i == l ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
    double js = 0.0;
    for (int a = 0; a < 3; ++a) {
        const Eigen::MatrixXd& g = inst.G(a);
        js += g(k, j) * g(l, i) - g(k, i) * g(l, j) + 2.0 * g(i, j) * g(l, k);
    }
    return 0.25 * inst.c() * (id + js);
}

/// ([zeta^gamma, zeta^beta])(i,j); equals -<[S_gamma, S_beta] F*e_i, F*e_j>.
inline double zeta_commutator_entry(const MapInstance& inst, int i, int j, int beta, int gamma) {
    const Eigen::MatrixXd& zb = inst.sff().block(beta);
    const Eigen::MatrixXd& zg = inst.sff().block(gamma);
    return zg.row(i).dot(zb.col(j)) - zb.row(i).dot(zg.col(j));
}

} // namespace detail

/// g1(R^M(e_i, e_j) e_k, e_l) obtained from the Gauss equation: the ambient
/// component on the pushed-forward frame plus the second fundamental form
/// correction sum_b ( zeta(j,k) zeta(i,l) - zeta(i,k) zeta(j,l) ).
inline double horizontal_curvature_component(const MapInstance& inst, int i, int j, int k, int l) {
    detail::require_range_index(inst, i, "horizontal_curvature_component");
    detail::require_range_index(inst, j, "horizontal_curvature_component");
    detail::require_range_index(inst, k, "horizontal_curvature_component");
    detail::require_range_index(inst, l, "horizontal_curvature_component");
    double corr = 0.0;
    for (const auto& z : inst.sff().blocks()) corr += z(j, k) * z(i, l) - z(i, k) * z(j, l);
    return detail::ambient_frame_component(inst, i, j, k, l) + corr;
}

enum class NormalCurvatureMode { full, commutator_only };

/// Normal bundle curvature component <R_perp(F*e_i, F*e_j) v_beta, v_gamma>.
/// Full mode subtracts the shape operator commutator from the ambient
/// component per the Ricci equation; commutator-only mode keeps just the
/// commutator part (the quantity entering the normal scalar curvature bound).
inline double normal_curvature_component(const MapInstance& inst, int i, int j, int beta, int gamma,
                                         NormalCurvatureMode mode = NormalCurvatureMode::full) {
    detail::require_range_index(inst, i, "normal_curvature_component");
    detail::require_range_index(inst, j, "normal_curvature_component");
    detail::require_normal_index(inst, beta, "normal_curvature_component");
    detail::require_normal_index(inst, gamma, "normal_curvature_component");
    const double comm = detail::zeta_commutator_entry(inst, i, j, beta, gamma);
    if (mode == NormalCurvatureMode::commutator_only) return comm;
    const auto fr = inst.frame().range();
    const auto nv = inst.frame().normal();
    const Eigen::VectorXd vb = nv.col(beta);
    const Eigen::VectorXd vg = nv.col(gamma);
    double js = 0.0;
    for (int a = 0; a < 3; ++a) {
        const Eigen::VectorXd jvb = inst.ambient().J(a) * vb;
        const Eigen::VectorXd jvg = inst.ambient().J(a) * vg;
        const double b_ib = fr.col(i).dot(jvb);
        const double b_jb = fr.col(j).dot(jvb);
        const double b_ig = fr.col(i).dot(jvg);
        const double b_jg = fr.col(j).dot(jvg);
        const double c_gb = vg.dot(jvb);
        js += b_jb * b_ig - b_ib * b_jg + 2.0 * inst.G(a)(i, j) * c_gb;
    }
    return 0.25 * inst.c() * js + comm;
}

struct Condition {
    std::string name;
    bool satisfied = false;
    double residual = 0.0;
};

/// Outcome of one inequality check. gap = rhs - lhs, normalized so that
/// gap >= 0 means the inequality holds.
struct Verdict {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    bool holds = false;
    bool equality = false;
    std::vector<Condition> conditions;
    double tol = 0.0;
    double eq_tol = 0.0;
    std::string mode;
    std::vector<std::pair<std::string, double>> diagnostics;
};

inline Verdict make_verdict(std::string name, double lhs, double rhs, double tol, double eq_tol) {
    Verdict v;
    v.name = std::move(name);
    v.lhs = lhs;
    v.rhs = rhs;
    v.gap = rhs - lhs;
    v.holds = v.gap >= -tol;
    v.equality = std::abs(v.gap) <= eq_tol;
    v.tol = tol;
    v.eq_tol = eq_tol;
    return v;
}

} // namespace ddvv
