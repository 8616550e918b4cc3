#pragma once

// Instance and report files. UTF-8 JSON, numbers as IEEE-754 doubles printed
// with 17 significant digits so every value round-trips bit for bit.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ddvv/search.hpp"

namespace ddvv {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

struct schema_error : std::runtime_error {
    std::string field;
    schema_error(std::string f, const std::string& msg)
        : std::runtime_error("schema violation in \"" + f + "\": " + msg), field(std::move(f)) {}
};

inline std::string format_double_17g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void dump_17g(const ojson& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
    const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    switch (j.type()) {
        case ojson::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t k = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++k) {
                out += pad_in;
                out += ojson(it.key()).dump();
                out += ": ";
                dump_17g(it.value(), out, indent, depth + 1);
                if (k + 1 < j.size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
            return;
        }
        case ojson::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t k = 0; k < j.size(); ++k) {
                out += pad_in;
                dump_17g(j[k], out, indent, depth + 1);
                if (k + 1 < j.size()) out += ",";
                out += "\n";
            }
            out += pad + "]";
            return;
        }
        case ojson::value_t::number_float:
            out += format_double_17g(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

} // namespace detail

inline std::string dump_json_17g(const ojson& j, int indent = 2) {
    std::string out;
    detail::dump_17g(j, out, indent, 0);
    out += "\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

namespace detail {

inline ojson matrix_to_json(const Eigen::MatrixXd& m) {
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j, int rows, int cols, const std::string& field) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw schema_error(field, "expected " + std::to_string(rows) + " rows");
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw schema_error(field, "row " + std::to_string(i) + " must have " + std::to_string(cols) +
                                          " entries");
        for (int k = 0; k < cols; ++k) {
            const json& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) throw schema_error(field, "entries must be numbers");
            m(i, k) = v.get<double>();
        }
    }
    return m;
}

inline bool is_standard_structure(const QuatStructure& s) {
    if (s.n % 4 != 0) return false;
    const QuatStructure std_s = standard_quaternionic_structure(s.n / 4);
    for (int a = 0; a < 3; ++a)
        if ((s.J[a] - std_s.J[a]).cwiseAbs().maxCoeff() != 0.0) return false;
    return true;
}

} // namespace detail

inline ojson instance_to_json(const MapInstance& inst) {
    ojson j;
    j["c"] = inst.c();
    j["r"] = inst.r();
    j["n"] = inst.n();
    if (detail::is_standard_structure(inst.ambient().structure())) {
        j["J"] = "standard";
    } else {
        ojson triple = ojson::array();
        for (int a = 0; a < 3; ++a) triple.push_back(detail::matrix_to_json(inst.ambient().J(a)));
        j["J"] = std::move(triple);
    }
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(inst.n(), inst.n());
    if ((inst.frame().columns - id).cwiseAbs().maxCoeff() == 0.0) {
        j["frame"] = "identity";
    } else {
        j["frame"] = detail::matrix_to_json(inst.frame().columns);
    }
    ojson zeta = ojson::array();
    for (const auto& z : inst.sff().blocks()) zeta.push_back(detail::matrix_to_json(z));
    j["zeta"] = std::move(zeta);
    return j;
}

inline MapInstance instance_from_json(const json& j) {
    if (!j.is_object()) throw schema_error("document", "instance file must be a JSON object");
    for (const char* key : {"c", "r", "n", "J", "frame", "zeta"})
        if (!j.contains(key)) throw schema_error(key, "missing required field");
    if (!j["c"].is_number()) throw schema_error("c", "must be a number");
    if (!j["r"].is_number_integer()) throw schema_error("r", "must be an integer");
    if (!j["n"].is_number_integer()) throw schema_error("n", "must be an integer");
    const double c = j["c"].get<double>();
    const int r = j["r"].get<int>();
    const int n = j["n"].get<int>();
    if (n <= 0 || n % 4 != 0) throw schema_error("n", "must be a positive multiple of 4");
    if (r <= 0 || r >= n) throw schema_error("r", "must satisfy 0 < r < n");
    const int q = n - r;

    SpaceFormAmbient amb = [&]() {
        if (j["J"].is_string()) {
            if (j["J"].get<std::string>() != "standard")
                throw schema_error("J", "string form must be \"standard\"");
            return standard_ambient(c, n / 4);
        }
        if (!j["J"].is_array() || j["J"].size() != 3)
            throw schema_error("J", "must be \"standard\" or an array of three n x n matrices");
        QuatStructure s;
        s.n = n;
        for (int a = 0; a < 3; ++a)
            s.J[static_cast<std::size_t>(a)] =
                detail::matrix_from_json(j["J"][static_cast<std::size_t>(a)], n, n,
                                         "J[" + std::to_string(a) + "]");
        try {
            return SpaceFormAmbient(c, std::move(s), 1e-8);
        } catch (const std::invalid_argument& e) {
            throw schema_error("J", e.what());
        }
    }();

    AdaptedFrame frame = [&]() {
        if (j["frame"].is_string()) {
            if (j["frame"].get<std::string>() != "identity")
                throw schema_error("frame", "string form must be \"identity\"");
            return identity_frame(n, r);
        }
        Eigen::MatrixXd cols = detail::matrix_from_json(j["frame"], n, n, "frame");
        try {
            return make_adapted_frame(n, r, std::move(cols), 1e-8);
        } catch (const std::invalid_argument& e) {
            throw schema_error("frame", e.what());
        }
    }();

    if (!j["zeta"].is_array() || static_cast<int>(j["zeta"].size()) != q)
        throw schema_error("zeta", "must be an array of q = n - r blocks (" + std::to_string(q) + ")");
    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(static_cast<std::size_t>(q));
    for (int b = 0; b < q; ++b) {
        Eigen::MatrixXd z = detail::matrix_from_json(j["zeta"][static_cast<std::size_t>(b)], r, r,
                                                     "zeta[" + std::to_string(b) + "]");
        const double asym = (z - z.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-9)
            throw schema_error("zeta", "zeta symmetry violated in block " + std::to_string(b) +
                                           " (residual " + format_double_17g(asym) + ")");
        blocks.push_back(std::move(z));
    }
    return MapInstance(std::move(amb), std::move(frame), Sff::symmetrized(std::move(blocks)));
}

/// Parses an instance file, turning malformed JSON into a schema_error with
/// a line diagnostic.
inline MapInstance load_instance(const std::string& path) {
    const std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw schema_error("json", "parse error at line " + std::to_string(line) + ": " + e.what());
    }
    return instance_from_json(j);
}

inline ojson verdict_to_json(const Verdict& v) {
    ojson j;
    j["name"] = v.name;
    j["lhs"] = v.lhs;
    j["rhs"] = v.rhs;
    j["gap"] = v.gap;
    j["holds"] = v.holds;
    j["equality"] = v.equality;
    ojson conds = ojson::array();
    for (const auto& c : v.conditions) {
        ojson cj;
        cj["name"] = c.name;
        cj["satisfied"] = c.satisfied;
        cj["residual"] = c.residual;
        conds.push_back(std::move(cj));
    }
    j["conditions"] = std::move(conds);
    if (!v.mode.empty()) j["mode"] = v.mode;
    j["tol"] = v.tol;
    j["eq_tol"] = v.eq_tol;
    ojson diag;
    for (const auto& [key, val] : v.diagnostics) diag[key] = val;
    j["diagnostics"] = std::move(diag);
    return j;
}

inline ojson report_to_json(const std::string& source, const MapInstance& inst,
                            const std::vector<Verdict>& verdicts) {
    ojson j;
    j["source"] = source;
    ojson meta;
    meta["c"] = inst.c();
    meta["r"] = inst.r();
    meta["n"] = inst.n();
    meta["q"] = inst.q();
    j["instance"] = std::move(meta);
    ojson checks = ojson::array();
    for (const auto& v : verdicts) checks.push_back(verdict_to_json(v));
    j["checks"] = std::move(checks);
    return j;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

/// One row per check; condition residuals are folded into one column.
inline std::string report_to_csv(const std::vector<Verdict>& verdicts) {
    std::string out =
        "check,lhs,rhs,gap,holds,equality,mode,tol,eq_tol,conditions_satisfied,max_condition_residual\n";
    for (const auto& v : verdicts) {
        bool all = true;
        double worst = 0.0;
        for (const auto& c : v.conditions) {
            all = all && c.satisfied;
            worst = std::max(worst, c.residual);
        }
        out += csv_escape(v.name) + "," + format_double_17g(v.lhs) + "," + format_double_17g(v.rhs) +
               "," + format_double_17g(v.gap) + "," + (v.holds ? "true" : "false") + "," +
               (v.equality ? "true" : "false") + "," + csv_escape(v.mode) + "," +
               format_double_17g(v.tol) + "," + format_double_17g(v.eq_tol) + "," +
               (all ? "true" : "false") + "," + format_double_17g(worst) + "\n";
    }
    return out;
}

namespace detail {

inline ojson violations_to_json(const std::vector<Violation>& vs) {
    ojson arr = ojson::array();
    for (const auto& v : vs) {
        ojson j;
        j["index"] = v.index;
        j["check"] = v.check;
        j["gap"] = v.gap;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline ojson check_stats_to_json(const CheckStats& s) {
    ojson j;
    j["checks_run"] = s.checks_run;
    j["min_gap"] = s.min_gap;
    j["argmin_index"] = s.argmin_index;
    j["equality_hits"] = s.equality_hits;
    j["violations"] = violations_to_json(s.violations);
    return j;
}

inline const char* frame_mode_name(FrameMode m) {
    switch (m) {
        case FrameMode::identity: return "identity";
        case FrameMode::random: return "random";
        case FrameMode::j_invariant: return "j-invariant";
    }
    return "random";
}

} // namespace detail

/// Serialized fuzz summary. Deliberately omits the worker count so runs with
/// different --jobs settings produce identical bytes.
inline ojson fuzz_summary_to_json(const FuzzConfig& cfg, const FuzzSummary& s) {
    ojson j;
    ojson conf;
    conf["count"] = cfg.count;
    conf["r"] = ojson::array({cfg.r_min, cfg.r_max});
    conf["q"] = ojson::array({cfg.q_min, cfg.q_max});
    conf["c"] = ojson::array({cfg.c_min, cfg.c_max});
    conf["zeta_scale"] = cfg.zeta_scale;
    conf["seed"] = cfg.seed;
    conf["frame"] = detail::frame_mode_name(cfg.frame_mode);
    conf["tol"] = cfg.tol;
    conf["eq_tol"] = cfg.eq_tol;
    conf["identity_tol"] = cfg.identity_tol;
    conf["random_x_per_instance"] = cfg.random_x_per_instance;
    j["config"] = std::move(conf);
    j["instances_run"] = s.instances_run;
    ojson checks;
    checks["theorem1"] = detail::check_stats_to_json(s.theorem1);
    checks["theorem2"] = detail::check_stats_to_json(s.theorem2);
    checks["lemma2"] = detail::check_stats_to_json(s.lemma2);
    j["checks"] = std::move(checks);
    j["theorem1_condition_mismatches"] = s.theorem1_condition_mismatches;
    ojson ident;
    ident["max_residual"] = s.identity_max_residual;
    ident["argmax_index"] = s.identity_argmax_index;
    ident["violations"] = detail::violations_to_json(s.identity_violations);
    j["identities"] = std::move(ident);
    j["equality_hits"] = s.equality_hits;
    j["worst_gap"] = s.worst_gap;
    j["worst_check"] = s.worst_check;
    j["worst_index"] = s.worst_index;
    if (s.worst_instance) j["worst_instance"] = instance_to_json(*s.worst_instance);
    return j;
}

inline const char* search_target_name(SearchTarget t) {
    switch (t) {
        case SearchTarget::theorem1: return "theorem1";
        case SearchTarget::theorem2: return "theorem2";
        case SearchTarget::lemma2: return "lemma2";
    }
    return "lemma2";
}

inline ojson search_result_to_json(const SearchResult& res, int iters, int restarts) {
    ojson j;
    j["target"] = search_target_name(res.target);
    j["iters"] = iters;
    j["restarts"] = restarts;
    j["best_gap"] = res.best_gap;
    j["seed_gap"] = res.seed_gap;
    j["best_restart"] = res.best_restart;
    j["best_verdict"] = verdict_to_json(res.best_verdict);
    if (res.instance) j["instance"] = instance_to_json(*res.instance);
    if (res.family) {
        ojson fam = ojson::array();
        for (const auto& m : res.family->mats()) fam.push_back(detail::matrix_to_json(m));
        j["family"] = std::move(fam);
    }
    return j;
}

} // namespace ddvv
