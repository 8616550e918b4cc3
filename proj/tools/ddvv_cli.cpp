// Command line entry point: instance I/O, verdict reports, fuzz and search
// drivers, identity suite runner.
//
// Exit codes: 0 all checks hold, 1 input error, 2 mathematical violation.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ddvv/io.hpp"

namespace {

using namespace ddvv;

std::optional<std::uint64_t> env_seed_override() {
    const char* s = std::getenv("DDVV_SEED");
    if (!s || !*s) return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0') return std::nullopt;
    return static_cast<std::uint64_t>(v);
}

void parse_int_range(const std::string& text, int& lo, int& hi, const std::string& flag) {
    try {
        const auto pos = text.find(':');
        if (pos == std::string::npos) {
            lo = hi = std::stoi(text);
            return;
        }
        lo = std::stoi(text.substr(0, pos));
        hi = std::stoi(text.substr(pos + 1));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(flag + ": expected INT or LO:HI, got \"" + text + "\"");
    }
}

void parse_real_range(const std::string& text, double& lo, double& hi, const std::string& flag) {
    try {
        const auto pos = text.find(':');
        if (pos == std::string::npos) {
            lo = hi = std::stod(text);
            return;
        }
        lo = std::stod(text.substr(0, pos));
        hi = std::stod(text.substr(pos + 1));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(flag + ": expected REAL or LO:HI, got \"" + text + "\"");
    }
}

FrameMode parse_frame_mode(const std::string& s) {
    if (s == "identity") return FrameMode::identity;
    if (s == "random") return FrameMode::random;
    if (s == "j-invariant") return FrameMode::j_invariant;
    throw std::invalid_argument("--frame: expected identity, random or j-invariant");
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_text_file(out_path, content);
}

struct CheckOptions {
    std::string path;
    std::string theorem = "all";
    std::string x = "0";
    std::string mode = "commutator-only";
    double tol = kDefaultTol;
    double eq_tol = kDefaultEqTol;
    std::string out;
    std::string format = "json";
};

int run_check(const CheckOptions& opt) {
    const MapInstance inst = load_instance(opt.path);
    Eigen::VectorXd x;
    if (opt.x.find(',') == std::string::npos) {
        const int idx = std::stoi(opt.x);
        if (idx < 0 || idx >= inst.r())
            throw std::invalid_argument("--x: frame index " + std::to_string(idx) +
                                        " out of range [0, " + std::to_string(inst.r()) + ")");
        x = Eigen::VectorXd::Zero(inst.r());
        x(idx) = 1.0;
    } else {
        std::vector<double> vals;
        std::size_t start = 0;
        while (start <= opt.x.size()) {
            const auto pos = opt.x.find(',', start);
            const std::string piece = opt.x.substr(start, pos == std::string::npos ? std::string::npos
                                                                                   : pos - start);
            vals.push_back(std::stod(piece));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (static_cast<int>(vals.size()) != inst.r())
            throw std::invalid_argument("--x: vector must have r = " + std::to_string(inst.r()) +
                                        " components");
        x = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    }
    const NormalCurvatureMode mode = opt.mode == "full" ? NormalCurvatureMode::full
                                                        : NormalCurvatureMode::commutator_only;
    std::vector<Verdict> verdicts;
    if (opt.theorem == "1" || opt.theorem == "all")
        verdicts.push_back(ricci_bound_check(inst, x, opt.tol, opt.eq_tol));
    if (opt.theorem == "2" || opt.theorem == "all")
        verdicts.push_back(wintgen_check(inst, opt.tol, opt.eq_tol, mode));

    if (opt.format == "csv")
        emit(opt.out, report_to_csv(verdicts));
    else
        emit(opt.out, dump_json_17g(report_to_json(opt.path, inst, verdicts)));

    for (const auto& v : verdicts)
        if (!v.holds) return 2;
    return 0;
}

struct FuzzOptions {
    FuzzConfig cfg;
    std::string r = "2:5", q = "1:5", c = "-4:4", frame = "random";
    int jobs = 1;
    std::string out;
};

int run_fuzz(FuzzOptions& opt) {
    parse_int_range(opt.r, opt.cfg.r_min, opt.cfg.r_max, "--r");
    parse_int_range(opt.q, opt.cfg.q_min, opt.cfg.q_max, "--q");
    parse_real_range(opt.c, opt.cfg.c_min, opt.cfg.c_max, "--c-range");
    opt.cfg.frame_mode = parse_frame_mode(opt.frame);
    if (auto s = env_seed_override()) opt.cfg.seed = *s;
    const FuzzSummary summary = fuzz(opt.cfg, opt.jobs);
    emit(opt.out, dump_json_17g(fuzz_summary_to_json(opt.cfg, summary)));
    return summary.has_violations() ? 2 : 0;
}

struct SearchOptionsCli {
    FuzzConfig cfg;
    std::string target = "lemma2";
    std::string r = "2:4", q = "2:4", c = "-4:4", frame = "random";
    int iters = 500;
    int restarts = 32;
    bool free_frame = false;
    std::string out;
};

int run_search(SearchOptionsCli& opt) {
    parse_int_range(opt.r, opt.cfg.r_min, opt.cfg.r_max, "--r");
    parse_int_range(opt.q, opt.cfg.q_min, opt.cfg.q_max, "--q");
    parse_real_range(opt.c, opt.cfg.c_min, opt.cfg.c_max, "--c-range");
    opt.cfg.frame_mode = parse_frame_mode(opt.frame);
    if (auto s = env_seed_override()) opt.cfg.seed = *s;
    SearchTarget target = SearchTarget::lemma2;
    if (opt.target == "theorem1") target = SearchTarget::theorem1;
    else if (opt.target == "theorem2") target = SearchTarget::theorem2;
    else if (opt.target != "lemma2")
        throw std::invalid_argument("--target: expected theorem1, theorem2 or lemma2");
    SearchOptions so;
    so.optimize_frame = opt.free_frame;
    const SearchResult res = maximize_violation(target, opt.cfg, opt.iters, opt.restarts, so);
    emit(opt.out, dump_json_17g(search_result_to_json(res, opt.iters, opt.restarts)));
    return res.best_gap < -opt.cfg.tol ? 2 : 0;
}

struct SuiteOptions {
    long count = 1000;
    std::uint64_t seed = 0;
};

int run_suite(const SuiteOptions& opt) {
    FuzzConfig cfg;
    cfg.count = opt.count;
    cfg.r_min = 2;
    cfg.r_max = 6;
    cfg.q_min = 1;
    cfg.q_max = 6;
    cfg.c_min = -4.0;
    cfg.c_max = 4.0;
    cfg.zeta_scale = 2.0;
    cfg.seed = opt.seed;
    if (auto s = env_seed_override()) cfg.seed = *s;
    cfg.frame_mode = FrameMode::random;
    cfg.validate();
    double worst = 0.0;
    long worst_index = -1;
    std::string worst_name;
    for (long i = 0; i < cfg.count; ++i) {
        const IdentityReport rep = identity_suite(random_instance(cfg, i));
        for (const auto& id : rep.identities) {
            if (id.residual > worst) {
                worst = id.residual;
                worst_index = i;
                worst_name = id.name;
            }
        }
    }
    std::cout << "instances: " << cfg.count << "\n";
    std::cout << "max residual: " << format_double_17g(worst);
    if (worst_index >= 0) std::cout << " (instance " << worst_index << ", " << worst_name << ")";
    std::cout << "\n";
    const bool ok = worst <= cfg.identity_tol;
    std::cout << (ok ? "all identities within tolerance " : "identity residual above tolerance ")
              << format_double_17g(cfg.identity_tol) << "\n";
    return ok ? 0 : 2;
}

struct GenOptions {
    std::string kind = "totally-geodesic";
    int r = 2;
    int q = 1;
    double c = 0.0;
    double scale = 1.0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen(GenOptions& opt) {
    EqualityKind kind = EqualityKind::totally_geodesic;
    if (opt.kind == "umbilical") kind = EqualityKind::umbilical;
    else if (opt.kind == "theorem1-general") kind = EqualityKind::ricci_general;
    else if (opt.kind != "totally-geodesic")
        throw std::invalid_argument("--kind: expected totally-geodesic, umbilical or theorem1-general");
    if (auto s = env_seed_override()) opt.seed = *s;
    const MapInstance inst = make_equality_instance(kind, opt.r, opt.q, opt.c, opt.scale, opt.seed);
    emit(opt.out, dump_json_17g(instance_to_json(inst)));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification toolkit for Wintgen/DDVV-type curvature inequalities of "
                 "Riemannian maps into quaternionic space forms"};
    app.require_subcommand(1);

    CheckOptions check_opt;
    auto* check = app.add_subcommand("check", "Evaluate inequality checks on an instance file");
    check->add_option("file", check_opt.path, "instance JSON file")->required();
    check->add_option("--theorem", check_opt.theorem, "which inequality: 1 (Ricci bound), 2 (Wintgen bound) or all")
        ->check(CLI::IsMember({"1", "2", "all"}));
    check->add_option("--x", check_opt.x,
                      "unit horizontal X for theorem 1: frame index or comma-separated coordinates");
    check->add_option("--mode", check_opt.mode, "normal curvature mode for theorem 2")
        ->check(CLI::IsMember({"full", "commutator-only"}));
    check->add_option("--tol", check_opt.tol, "violation tolerance on the gap");
    check->add_option("--eq-tol", check_opt.eq_tol, "equality detection tolerance");
    check->add_option("--out", check_opt.out, "output path (stdout when omitted)");
    check->add_option("--format", check_opt.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));

    FuzzOptions fuzz_opt;
    auto* fz = app.add_subcommand("fuzz", "Random instance campaign over all checks");
    fz->add_option("--count", fuzz_opt.cfg.count, "number of instances");
    fz->add_option("--r", fuzz_opt.r, "rank range LO:HI");
    fz->add_option("--q", fuzz_opt.q, "active normal directions range LO:HI");
    fz->add_option("--c-range", fuzz_opt.c, "curvature constant range LO:HI");
    fz->add_option("--scale", fuzz_opt.cfg.zeta_scale, "second fundamental form entry scale");
    fz->add_option("--seed", fuzz_opt.cfg.seed, "campaign seed (DDVV_SEED overrides)");
    fz->add_option("--frame", fuzz_opt.frame, "frame mode: identity, random, j-invariant");
    fz->add_option("--jobs", fuzz_opt.jobs, "worker threads (output is identical for any value)");
    fz->add_option("--tol", fuzz_opt.cfg.tol, "violation tolerance on the gap");
    fz->add_option("--eq-tol", fuzz_opt.cfg.eq_tol, "equality detection tolerance");
    fz->add_option("--out", fuzz_opt.out, "summary path (stdout when omitted)");

    SearchOptionsCli search_opt;
    auto* se = app.add_subcommand("search", "Derivative-free search for inequality violations");
    se->add_option("--target", search_opt.target, "theorem1, theorem2 or lemma2")
        ->check(CLI::IsMember({"theorem1", "theorem2", "lemma2"}));
    se->add_option("--iters", search_opt.iters, "iterations per restart");
    se->add_option("--restarts", search_opt.restarts, "number of restarts");
    se->add_option("--seed", search_opt.cfg.seed, "search seed (DDVV_SEED overrides)");
    se->add_option("--r", search_opt.r, "rank range LO:HI");
    se->add_option("--q", search_opt.q, "active normal directions range LO:HI");
    se->add_option("--c-range", search_opt.c, "curvature range LO:HI (fixed value freezes c)");
    se->add_option("--scale", search_opt.cfg.zeta_scale, "initial entry scale");
    se->add_option("--frame", search_opt.frame, "frame mode for restarts");
    se->add_flag("--free-frame", search_opt.free_frame, "also optimize the frame (retraction)");
    se->add_option("--tol", search_opt.cfg.tol, "violation tolerance on the gap");
    se->add_option("--out", search_opt.out, "result path (stdout when omitted)");

    SuiteOptions suite_opt;
    auto* su = app.add_subcommand("suite", "Run the algebraic identity suite on random instances");
    su->add_option("--count", suite_opt.count, "number of instances");
    su->add_option("--seed", suite_opt.seed, "seed (DDVV_SEED overrides)");

    GenOptions gen_opt;
    auto* ge = app.add_subcommand("gen", "Generate an equality-case instance file");
    ge->add_option("--kind", gen_opt.kind, "totally-geodesic, umbilical or theorem1-general")
        ->check(CLI::IsMember({"totally-geodesic", "umbilical", "theorem1-general"}));
    ge->add_option("--r", gen_opt.r, "rank");
    ge->add_option("--q", gen_opt.q, "active normal directions");
    ge->add_option("--c", gen_opt.c, "curvature constant");
    ge->add_option("--scale", gen_opt.scale, "entry scale for the random parts");
    ge->add_option("--seed", gen_opt.seed, "seed (DDVV_SEED overrides)");
    ge->add_option("--out", gen_opt.out, "instance path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (check->parsed()) return run_check(check_opt);
        if (fz->parsed()) return run_fuzz(fuzz_opt);
        if (se->parsed()) return run_search(search_opt);
        if (su->parsed()) return run_suite(suite_opt);
        if (ge->parsed()) return run_gen(gen_opt);
    } catch (const schema_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
