#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "verification.hpp"

namespace irt {

/// One convergence run or one verification suite.  beta_plus/beta_minus
/// are the diffusion values on each side, as in the problem statements.
struct RunConfig
{
    std::string problem = "example1";
    Method method = Method::immersed;
    double eta = 1.0;
    std::vector<int> n_list{8, 16, 32, 64};
    double r0 = 0.5;
    double beta_plus = 1e-2;
    double beta_minus = 1.0;
    std::string output_path;
    std::uint64_t seed = 42;
    std::string suite;
    double solver_tolerance = 1e-10;
    Backend backend = Backend::sparse_lu;
};

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    }
    catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
}

/// "8,16,32" or the doubling range "8..256".
inline std::vector<int> parse_n_list(const std::string& text)
{
    std::vector<int> out;
    const std::string s = trim(text);
    auto to_int = [&](const std::string& v) {
        const double x = parse_real("N", trim(v));
        if (x != std::floor(x) || x < 1 || x > 1 << 20) throw ConfigError("N entries must be positive integers");
        return static_cast<int>(x);
    };
    if (const auto dots = s.find(".."); dots != std::string::npos) {
        const int lo = to_int(s.substr(0, dots)), hi = to_int(s.substr(dots + 2));
        if (hi < lo) throw ConfigError("empty N range '" + s + "'");
        for (int n = lo; n <= hi; n *= 2) out.push_back(n);
        if (out.back() != hi) throw ConfigError("N range end must be the start times a power of two");
        return out;
    }
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(to_int(item));
    return out;
}

inline std::string normalize_key(std::string key)
{
    std::replace(key.begin(), key.end(), '-', '_');
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    return key;
}

/// Applies one key=value setting.
inline void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = normalize_key(trim(raw_key));
    const std::string v = trim(raw_value);
    if (key == "problem") cfg.problem = v;
    else if (key == "method") cfg.method = parse_method(v);
    else if (key == "eta") cfg.eta = parse_real(key, v);
    else if (key == "n" || key == "n_list") cfg.n_list = parse_n_list(v);
    else if (key == "r0") cfg.r0 = parse_real(key, v);
    else if (key == "beta_plus") cfg.beta_plus = parse_real(key, v);
    else if (key == "beta_minus") cfg.beta_minus = parse_real(key, v);
    else if (key == "out" || key == "output_path") cfg.output_path = v;
    else if (key == "seed") {
        const double s = parse_real(key, v);
        if (s < 0 || s != std::floor(s)) throw ConfigError("seed must be a nonnegative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    else if (key == "suite") cfg.suite = v;
    else if (key == "solver_tolerance" || key == "tolerance") cfg.solver_tolerance = parse_real(key, v);
    else if (key == "solver" || key == "backend") cfg.backend = parse_backend(v);
    else throw ConfigError("unknown setting '" + raw_key + "'");
}

/// key = value lines; '#' starts a comment.
inline void apply_config_text(RunConfig& cfg, std::istream& in)
{
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    apply_config_text(cfg, in);
}

inline void validate(const RunConfig& cfg)
{
    const auto ids = problem_ids();
    if (std::find(ids.begin(), ids.end(), cfg.problem) == ids.end())
        throw ConfigError("unknown problem '" + cfg.problem + "'");
    if (!(cfg.eta >= 0.0)) throw ConfigError("eta must be nonnegative");
    if (!(cfg.r0 > 0.0 && cfg.r0 < 1.0)) throw ConfigError("r0 must lie in (0, 1)");
    if (!(cfg.beta_plus > 0.0) || !(cfg.beta_minus > 0.0)) throw ConfigError("coefficients must be positive");
    if (!(cfg.solver_tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
    check_n_list(cfg.n_list);
    if (!cfg.suite.empty() && cfg.suite != "all") {
        const auto s = suite_ids();
        if (std::find(s.begin(), s.end(), cfg.suite) == s.end()) throw ConfigError("unknown suite '" + cfg.suite + "'");
    }
}

inline ProblemSpec problem_of(const RunConfig& cfg)
{
    return make_problem(cfg.problem, cfg.r0, cfg.beta_plus, cfg.beta_minus);
}

inline ErrorReport run(const RunConfig& cfg)
{
    validate(cfg);
    SolverOptions opt;
    opt.backend = cfg.backend;
    opt.tolerance = cfg.solver_tolerance;
    return convergence_table(problem_of(cfg), cfg.method, cfg.eta, cfg.n_list, opt);
}

/// The patch criterion: exact flux and the discrete divergence identity.
inline bool patch_passed(const ErrorReport& rep)
{
    return std::all_of(rep.rows.begin(), rep.rows.end(),
                       [](const ErrorRow& r) { return r.err_p <= 1e-9 && r.divergence_defect <= 1e-9; });
}

/// Sibling path with a different extension, e.g. out.csv -> out.txt.
inline std::string with_extension(const std::string& path, const std::string& ext)
{
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
    return path.substr(0, dot) + ext;
}

} // namespace irt
