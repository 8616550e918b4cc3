#pragma once

// Shared builders for the unit suites. Oracle computations stay local to the
// test files that freeze values from them.

#include <catch2/catch_amalgamated.hpp>

#include "ddvv/search.hpp"

namespace testsup {

using namespace ddvv;

inline Eigen::MatrixXd sigma_x() {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Eigen::MatrixXd sigma_z() {
    Eigen::MatrixXd m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

/// r = 2, q = 2, n = 4, identity frame, zeta = (sigma_x, sigma_z). The
/// extremal pair of the commutator bound.
inline MapInstance sigma_pair_instance(double c) {
    return MapInstance(standard_ambient(c, 1), identity_frame(4, 2),
                       Sff::symmetrized({sigma_x(), sigma_z()}));
}

/// r = 2, n = 4: two normal directions with only the first active,
/// identity frame, zeta[0] = diag(a, b).
inline MapInstance diag_instance(double c, double a, double b) {
    std::vector<Eigen::MatrixXd> blocks(2, Eigen::MatrixXd::Zero(2, 2));
    blocks[0] = Eigen::Vector2d(a, b).asDiagonal();
    return MapInstance(standard_ambient(c, 1), identity_frame(4, 2), Sff::symmetrized(blocks));
}

inline Eigen::VectorXd unit_axis(int r, int k) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(r);
    x(k) = 1.0;
    return x;
}

inline Eigen::VectorXd random_unit(int n, Rng& rng) {
    Eigen::VectorXd x(n);
    double norm = 0.0;
    do {
        for (int i = 0; i < n; ++i) x(i) = rng.normal();
        norm = x.norm();
    } while (norm < 1e-12);
    return x / norm;
}

inline Eigen::MatrixXd random_symmetric(int r, double scale, Rng& rng) {
    Eigen::MatrixXd m(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) {
            m(i, j) = rng.uniform(-scale, scale);
            m(j, i) = m(i, j);
        }
    return m;
}

inline FuzzConfig small_cfg(std::uint64_t seed, long count = 200) {
    FuzzConfig cfg;
    cfg.count = count;
    cfg.r_min = 2;
    cfg.r_max = 5;
    cfg.q_min = 1;
    cfg.q_max = 5;
    cfg.c_min = -4.0;
    cfg.c_max = 4.0;
    cfg.zeta_scale = 2.0;
    cfg.seed = seed;
    cfg.frame_mode = FrameMode::random;
    return cfg;
}

} // namespace testsup
