#pragma once

// Random instance generation, fuzz campaigns over the inequality checks,
// derivative-free search for violations, and constructors for the known
// equality cases.

#include <atomic>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "ddvv/checks.hpp"

namespace ddvv {

enum class FrameMode { identity, random, j_invariant };

namespace detail {
inline constexpr std::uint64_t kSaltFrame = 1;
inline constexpr std::uint64_t kSaltX = 2;
inline constexpr std::uint64_t kSaltSearch = 3;
} // namespace detail

struct FuzzConfig {
    long count = 1000;
    int r_min = 2, r_max = 5;
    int q_min = 1, q_max = 5;
    double c_min = -4.0, c_max = 4.0;
    double zeta_scale = 1.0;
    std::uint64_t seed = 0;
    FrameMode frame_mode = FrameMode::random;
    double tol = kDefaultTol;
    double eq_tol = kDefaultEqTol;
    double identity_tol = 1e-9;
    int random_x_per_instance = 8;

    void validate() const {
        if (count < 1) throw std::invalid_argument("FuzzConfig: count must be >= 1");
        if (r_min < 2 || r_min > r_max) throw std::invalid_argument("FuzzConfig: need 2 <= r_min <= r_max");
        if (q_min < 1 || q_min > q_max) throw std::invalid_argument("FuzzConfig: need 1 <= q_min <= q_max");
        if (c_min > c_max) throw std::invalid_argument("FuzzConfig: need c_min <= c_max");
        if (zeta_scale < 0.0) throw std::invalid_argument("FuzzConfig: zeta_scale must be >= 0");
        if (frame_mode == FrameMode::j_invariant) {
            bool any = false;
            for (int r = r_min; r <= r_max; ++r) any |= (r % 4 == 0);
            if (!any)
                throw std::invalid_argument(
                    "FuzzConfig: j-invariant frames need a rank divisible by 4 in [r_min, r_max]");
        }
    }
};

/// Deterministic in (cfg.seed, index). Dimension is rounded up so the model
/// space exists: n = 4 ceil((r+q)/4). The frame always carries n - r normal
/// directions; the q requested ones get random symmetric components in
/// [-zeta_scale, zeta_scale], the remaining blocks are zero.
inline MapInstance random_instance(const FuzzConfig& cfg, long index) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(index), 0));
    int r = 0;
    if (cfg.frame_mode == FrameMode::j_invariant) {
        std::vector<int> candidates;
        for (int k = cfg.r_min; k <= cfg.r_max; ++k)
            if (k % 4 == 0) candidates.push_back(k);
        r = candidates[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(candidates.size()) - 1))];
    } else {
        r = rng.uniform_int(cfg.r_min, cfg.r_max);
    }
    const int q = rng.uniform_int(cfg.q_min, cfg.q_max);
    const double c = rng.uniform(cfg.c_min, cfg.c_max);
    const int n = 4 * ((r + q + 3) / 4);

    SpaceFormAmbient amb = standard_ambient(c, n / 4);
    const std::uint64_t frame_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(index), detail::kSaltFrame);
    AdaptedFrame frame =
        cfg.frame_mode == FrameMode::identity ? identity_frame(n, r)
        : cfg.frame_mode == FrameMode::random ? random_adapted_frame(n, r, frame_seed)
                                              : quaternionic_adapted_frame(amb.structure(), r, frame_seed);

    const int q_total = n - r;
    std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(q_total),
                                        Eigen::MatrixXd::Zero(r, r));
    for (int b = 0; b < q; ++b)
        for (int i = 0; i < r; ++i)
            for (int j = i; j < r; ++j) {
                const double v = rng.uniform(-cfg.zeta_scale, cfg.zeta_scale);
                blocks[static_cast<std::size_t>(b)](i, j) = v;
                blocks[static_cast<std::size_t>(b)](j, i) = v;
            }
    return MapInstance(std::move(amb), std::move(frame), Sff::symmetrized(std::move(blocks)));
}

struct Violation {
    long index = -1;
    std::string check;
    double gap = 0.0;
};

struct CheckStats {
    long checks_run = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    long argmin_index = -1;
    long equality_hits = 0;
    std::vector<Violation> violations;
};

struct FuzzSummary {
    long instances_run = 0;
    CheckStats theorem1, theorem2, lemma2;
    long theorem1_condition_mismatches = 0;
    double identity_max_residual = 0.0;
    long identity_argmax_index = -1;
    std::vector<Violation> identity_violations;
    long equality_hits = 0;
    double worst_gap = std::numeric_limits<double>::infinity();
    std::string worst_check;
    long worst_index = -1;
    std::optional<MapInstance> worst_instance;

    bool has_violations() const {
        return !theorem1.violations.empty() || !theorem2.violations.empty() ||
               !lemma2.violations.empty() || !identity_violations.empty();
    }
};

namespace detail {

struct InstanceOutcome {
    double t1_min_gap = std::numeric_limits<double>::infinity();
    long t1_checks = 0;
    long t1_equality_hits = 0;
    long t1_condition_mismatches = 0;
    double t2_gap = 0.0;
    bool t2_equality = false;
    double lemma_gap = 0.0;
    double identity_max = 0.0;
};

inline InstanceOutcome evaluate_instance(const FuzzConfig& cfg, long index) {
    const MapInstance inst = random_instance(cfg, index);
    const int r = inst.r();
    InstanceOutcome out;
    auto run_t1 = [&](const Eigen::VectorXd& x) {
        const Verdict v = ricci_bound_check(inst, x, cfg.tol, cfg.eq_tol);
        ++out.t1_checks;
        out.t1_min_gap = std::min(out.t1_min_gap, v.gap);
        if (v.equality) ++out.t1_equality_hits;
        bool conds = true;
        for (const auto& cnd : v.conditions) conds = conds && cnd.satisfied;
        if (v.equality != conds) ++out.t1_condition_mismatches;
    };
    for (int i = 0; i < r; ++i) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(r);
        x(i) = 1.0;
        run_t1(x);
    }
    Rng xr(derive_seed(cfg.seed, static_cast<std::uint64_t>(index), kSaltX));
    for (int k = 0; k < cfg.random_x_per_instance; ++k) {
        Eigen::VectorXd x(r);
        double norm = 0.0;
        do {
            for (int i = 0; i < r; ++i) x(i) = xr.normal();
            norm = x.norm();
        } while (norm < 1e-12);
        run_t1(x / norm);
    }
    const Verdict t2 = wintgen_check(inst, cfg.tol, cfg.eq_tol);
    out.t2_gap = t2.gap;
    out.t2_equality = t2.equality;
    out.lemma_gap = commutator_bound_check(sff_family(inst.sff()).traceless(), cfg.tol).gap;
    out.identity_max = identity_suite(inst).max_residual;
    return out;
}

} // namespace detail

/// Runs the Ricci bound (with X ranging over the frame vectors plus random
/// unit vectors), the Wintgen bound, the commutator bound on the traceless
/// second fundamental form family, and the identity suite on `count`
/// deterministic random instances. The summary is identical for any worker
/// count: per-instance streams depend only on (seed, index) and the
/// reduction runs in index order.
inline FuzzSummary fuzz(const FuzzConfig& cfg, int jobs = 1) {
    cfg.validate();
    std::vector<detail::InstanceOutcome> outcomes(static_cast<std::size_t>(cfg.count));
    if (jobs <= 1) {
        for (long i = 0; i < cfg.count; ++i)
            outcomes[static_cast<std::size_t>(i)] = detail::evaluate_instance(cfg, i);
    } else {
        std::atomic<long> next{0};
        auto worker = [&]() {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= cfg.count) return;
                outcomes[static_cast<std::size_t>(i)] = detail::evaluate_instance(cfg, i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    FuzzSummary s;
    s.instances_run = cfg.count;
    auto feed = [&](CheckStats& st, long index, double gap, long checks, long eq_hits) {
        st.checks_run += checks;
        st.equality_hits += eq_hits;
        if (gap < st.min_gap) {
            st.min_gap = gap;
            st.argmin_index = index;
        }
        if (gap < -cfg.tol) st.violations.push_back({index, "", gap});
    };
    for (long i = 0; i < cfg.count; ++i) {
        const auto& o = outcomes[static_cast<std::size_t>(i)];
        feed(s.theorem1, i, o.t1_min_gap, o.t1_checks, o.t1_equality_hits);
        feed(s.theorem2, i, o.t2_gap, 1, o.t2_equality ? 1 : 0);
        feed(s.lemma2, i, o.lemma_gap, 1, 0);
        s.theorem1_condition_mismatches += o.t1_condition_mismatches;
        if (o.identity_max > s.identity_max_residual) {
            s.identity_max_residual = o.identity_max;
            s.identity_argmax_index = i;
        }
        if (o.identity_max > cfg.identity_tol) s.identity_violations.push_back({i, "identity", o.identity_max});
    }
    for (auto& v : s.theorem1.violations) v.check = "theorem1";
    for (auto& v : s.theorem2.violations) v.check = "theorem2";
    for (auto& v : s.lemma2.violations) v.check = "lemma2";
    s.equality_hits = s.theorem1.equality_hits + s.theorem2.equality_hits;

    const std::pair<const CheckStats*, const char*> order[] = {
        {&s.theorem1, "theorem1"}, {&s.theorem2, "theorem2"}, {&s.lemma2, "lemma2"}};
    for (const auto& [st, name] : order) {
        if (st->argmin_index >= 0 && st->min_gap < s.worst_gap) {
            s.worst_gap = st->min_gap;
            s.worst_check = name;
            s.worst_index = st->argmin_index;
        }
    }
    if (s.worst_index >= 0) s.worst_instance = random_instance(cfg, s.worst_index);
    return s;
}

enum class SearchTarget { theorem1, theorem2, lemma2 };

struct SearchOptions {
    bool optimize_c = true;      // when the config interval is nontrivial
    bool optimize_frame = false; // retraction: perturb columns, re-orthonormalize
    double fd_step = 1e-5;       // relative to the data scale
};

struct SearchResult {
    SearchTarget target = SearchTarget::lemma2;
    double best_gap = std::numeric_limits<double>::infinity();
    double seed_gap = std::numeric_limits<double>::infinity(); // at the winning restart's start
    long best_restart = -1;
    std::optional<MapInstance> instance;
    std::optional<MatrixFamily> family;
    Verdict best_verdict;
};

namespace detail {

struct MinimizeOutcome {
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> best_theta;
    double seed_f = std::numeric_limits<double>::infinity();
};

/// Gradient descent with central finite differences and a step-halving line
/// search. Every full objective evaluation (probes included) competes for
/// the best point. Deterministic: no randomness inside the loop.
template <class F>
MinimizeOutcome fd_minimize(F&& f, std::vector<double> theta, int iters, double h, double step0) {
    MinimizeOutcome out;
    double fcur = f(theta);
    out.best_f = out.seed_f = fcur;
    out.best_theta = theta;
    const std::size_t dim = theta.size();
    std::vector<double> grad(dim, 0.0), trial;
    double step = step0;
    int stall = 0;
    for (int it = 0; it < iters; ++it) {
        double gnorm_sq = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double orig = theta[k];
            theta[k] = orig + h;
            const double fp = f(theta);
            if (fp < out.best_f) {
                out.best_f = fp;
                out.best_theta = theta;
            }
            theta[k] = orig - h;
            const double fm = f(theta);
            if (fm < out.best_f) {
                out.best_f = fm;
                out.best_theta = theta;
            }
            theta[k] = orig;
            grad[k] = (fp - fm) / (2.0 * h);
            gnorm_sq += grad[k] * grad[k];
        }
        const double gnorm = std::sqrt(gnorm_sq);
        if (gnorm < 1e-14) break;
        bool improved = false;
        double s = step;
        for (int halve = 0; halve < 30; ++halve) {
            trial = theta;
            for (std::size_t k = 0; k < dim; ++k) trial[k] -= (s / gnorm) * grad[k];
            const double ft = f(trial);
            if (ft < fcur - 1e-16) {
                theta = trial;
                fcur = ft;
                if (ft < out.best_f) {
                    out.best_f = ft;
                    out.best_theta = theta;
                }
                step = 2.0 * s;
                improved = true;
                break;
            }
            s *= 0.5;
        }
        if (!improved) {
            step = std::max(0.5 * step, 1e-12);
            if (++stall >= 8) break;
        } else {
            stall = 0;
        }
    }
    return out;
}

} // namespace detail

/// Adversarial search: restarts from deterministic random seeds followed by
/// derivative-free descent on the verdict gap over the second fundamental
/// form entries (plus the curvature constant, and the frame through a
/// re-orthonormalizing retraction, when unfrozen).
inline SearchResult maximize_violation(SearchTarget target, const FuzzConfig& cfg, int iters,
                                       int restarts, SearchOptions opts = {}) {
    cfg.validate();
    if (iters < 1) throw std::invalid_argument("maximize_violation: iters must be >= 1");
    if (restarts < 1) throw std::invalid_argument("maximize_violation: restarts must be >= 1");
    const double scale = std::max(cfg.zeta_scale, 1.0);
    const double h = opts.fd_step * scale;
    const double step0 = 0.25 * std::max(cfg.zeta_scale, 0.5);

    SearchResult result;
    result.target = target;

    for (int restart = 0; restart < restarts; ++restart) {
        if (target == SearchTarget::lemma2) {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(restart), detail::kSaltSearch));
            const int r = rng.uniform_int(cfg.r_min, cfg.r_max);
            const int q = std::max(2, rng.uniform_int(cfg.q_min, cfg.q_max));
            const int diag_dim = r - 1;
            const int off_dim = r * (r - 1) / 2;
            const int per_mat = diag_dim + off_dim;
            std::vector<double> theta(static_cast<std::size_t>(q * per_mat));
            for (auto& v : theta) v = rng.uniform(-cfg.zeta_scale, cfg.zeta_scale);
            auto decode = [r, q, diag_dim](const std::vector<double>& th) {
                std::vector<Eigen::MatrixXd> mats(static_cast<std::size_t>(q));
                std::size_t pos = 0;
                for (int m = 0; m < q; ++m) {
                    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(r, r);
                    double dsum = 0.0;
                    for (int d = 0; d < diag_dim; ++d) {
                        a(d, d) = th[pos++];
                        dsum += a(d, d);
                    }
                    a(r - 1, r - 1) = -dsum; // traceless by construction
                    for (int i = 0; i < r; ++i)
                        for (int j = i + 1; j < r; ++j) {
                            a(i, j) = th[pos++];
                            a(j, i) = a(i, j);
                        }
                    mats[static_cast<std::size_t>(m)] = std::move(a);
                }
                return MatrixFamily::symmetric(std::move(mats));
            };
            auto objective = [&](const std::vector<double>& th) {
                return commutator_bound_check(decode(th), cfg.tol).gap;
            };
            auto mo = detail::fd_minimize(objective, std::move(theta), iters, h, step0);
            if (mo.best_f < result.best_gap) {
                result.best_gap = mo.best_f;
                result.seed_gap = mo.seed_f;
                result.best_restart = restart;
                result.family = decode(mo.best_theta);
                result.best_verdict = commutator_bound_check(*result.family, cfg.tol);
            }
        } else {
            const MapInstance base = random_instance(cfg, restart);
            const int r = base.r();
            const int qt = base.q();
            const int per_block = r * (r + 1) / 2;
            const bool free_c = opts.optimize_c && cfg.c_max > cfg.c_min;
            const bool free_frame = opts.optimize_frame;
            const int zdim = qt * per_block;
            const int cdim = free_c ? 1 : 0;
            const int fdim = free_frame ? base.n() * base.n() : 0;
            std::vector<double> theta(static_cast<std::size_t>(zdim + cdim + fdim), 0.0);
            {
                std::size_t pos = 0;
                for (int b = 0; b < qt; ++b) {
                    const Eigen::MatrixXd& z = base.sff().block(b);
                    for (int i = 0; i < r; ++i)
                        for (int j = i; j < r; ++j) theta[pos++] = z(i, j);
                }
                if (free_c) theta[pos++] = base.c();
            }
            auto decode = [&, r, qt, zdim, free_c, free_frame](const std::vector<double>& th) {
                std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(qt));
                std::size_t pos = 0;
                for (int b = 0; b < qt; ++b) {
                    Eigen::MatrixXd z(r, r);
                    for (int i = 0; i < r; ++i)
                        for (int j = i; j < r; ++j) {
                            z(i, j) = th[pos];
                            z(j, i) = th[pos];
                            ++pos;
                        }
                    blocks[static_cast<std::size_t>(b)] = std::move(z);
                }
                double c = base.c();
                if (free_c) {
                    c = std::clamp(th[pos++], cfg.c_min, cfg.c_max);
                }
                Sff sff = Sff::symmetrized(std::move(blocks));
                if (!free_frame) {
                    MapInstance inst = base.with_sff(std::move(sff));
                    return free_c ? inst.with_curvature(c) : inst;
                }
                Eigen::MatrixXd cols = base.frame().columns;
                for (int i = 0; i < base.n(); ++i)
                    for (int j = 0; j < base.n(); ++j) cols(i, j) += th[static_cast<std::size_t>(zdim + cdim) +
                                                                       static_cast<std::size_t>(i * base.n() + j)];
                Eigen::HouseholderQR<Eigen::MatrixXd> qr(cols);
                Eigen::MatrixXd qmat = qr.householderQ() * Eigen::MatrixXd::Identity(base.n(), base.n());
                normalize_column_signs(qmat);
                return MapInstance(base.ambient().with_curvature(c),
                                   make_adapted_frame(base.n(), r, std::move(qmat)), std::move(sff));
            };
            auto check_of = [&](const MapInstance& inst) {
                if (target == SearchTarget::theorem1) {
                    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(r);
                    e0(0) = 1.0;
                    return ricci_bound_check(inst, e0, cfg.tol, cfg.eq_tol);
                }
                return wintgen_check(inst, cfg.tol, cfg.eq_tol);
            };
            auto objective = [&](const std::vector<double>& th) { return check_of(decode(th)).gap; };
            auto mo = detail::fd_minimize(objective, std::move(theta), iters, h, step0);
            if (mo.best_f < result.best_gap) {
                result.best_gap = mo.best_f;
                result.seed_gap = mo.seed_f;
                result.best_restart = restart;
                result.instance = decode(mo.best_theta);
                result.best_verdict = check_of(*result.instance);
            }
        }
    }
    return result;
}

enum class EqualityKind { totally_geodesic, umbilical, ricci_general };

/// Instances sitting on the equality locus of the Ricci bound:
/// totally geodesic (zeta = 0), umbilical (zeta = lambda I, rank 2 only),
/// and the general construction with zeta(0,i) = 0 and zeta(0,0) equal to
/// the sum of the remaining diagonal.
inline MapInstance make_equality_instance(EqualityKind kind, int r, int q, double c, double scale,
                                          std::uint64_t seed) {
    if (r < 2) throw std::invalid_argument("make_equality_instance: need r >= 2");
    if (q < 1) throw std::invalid_argument("make_equality_instance: need q >= 1");
    if (kind == EqualityKind::umbilical && r != 2)
        throw std::invalid_argument(
            "make_equality_instance: umbilical equality needs r = 2 (otherwise only zeta = 0 qualifies)");
    const int n = 4 * ((r + q + 3) / 4);
    SpaceFormAmbient amb = standard_ambient(c, n / 4);
    AdaptedFrame frame = random_adapted_frame(n, r, derive_seed(seed, 0, detail::kSaltFrame));
    Rng rng(derive_seed(seed, 0, 0));
    const int q_total = n - r;
    std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(q_total),
                                        Eigen::MatrixXd::Zero(r, r));
    for (int b = 0; b < q; ++b) {
        Eigen::MatrixXd& z = blocks[static_cast<std::size_t>(b)];
        switch (kind) {
            case EqualityKind::totally_geodesic:
                break;
            case EqualityKind::umbilical:
                z = rng.uniform(-scale, scale) * Eigen::MatrixXd::Identity(r, r);
                break;
            case EqualityKind::ricci_general: {
                for (int i = 1; i < r; ++i)
                    for (int j = i; j < r; ++j) {
                        const double v = rng.uniform(-scale, scale);
                        z(i, j) = v;
                        z(j, i) = v;
                    }
                double dsum = 0.0;
                for (int i = 1; i < r; ++i) dsum += z(i, i);
                z(0, 0) = dsum;
                break;
            }
        }
    }
    return MapInstance(std::move(amb), std::move(frame), Sff::symmetrized(std::move(blocks)));
}

} // namespace ddvv
