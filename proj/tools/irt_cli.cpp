// Command-line front end: convergence tables and property suites.
//
//   irt_cli --problem example1 --method immersed --eta 1 --N 8..256 --out ex1.csv
//   irt_cli --suite unisolvence --seed 42

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "irt/irt.hpp"

namespace {

enum ExitCode { ok = 0, failed = 1, config_error = 2, assumption_violation = 3, solver_failure = 4 };

nlohmann::ordered_json to_json(const irt::SuiteResult& r)
{
    nlohmann::ordered_json j;
    j["suite"] = r.name;
    j["passed"] = r.passed;
    j["checks"] = r.samples;
    j["failures"] = r.failures;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    j["metrics"] = m;
    j["messages"] = r.messages;
    return j;
}

int verify(const irt::RunConfig& cfg)
{
    const std::vector<std::string> ids = cfg.suite == "all" ? irt::suite_ids() : std::vector<std::string>{cfg.suite};
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& id : ids) {
        const irt::SuiteResult r = irt::run_suite(id, cfg.seed);
        all = all && r.passed;
        out.push_back(to_json(r));
    }
    const nlohmann::ordered_json summary = ids.size() == 1 ? out[0] : out;
    std::cout << summary.dump(2) << '\n';
    if (!cfg.output_path.empty()) {
        std::ofstream f(cfg.output_path);
        if (!f) throw irt::ConfigError("cannot write '" + cfg.output_path + "'");
        f << summary.dump(2) << '\n';
    }
    return all ? ok : failed;
}

int convergence(const irt::RunConfig& cfg)
{
    const irt::ErrorReport rep = irt::run(cfg);
    irt::write_table(rep, std::cout);
    if (!cfg.output_path.empty()) {
        std::ofstream csv(cfg.output_path);
        if (!csv) throw irt::ConfigError("cannot write '" + cfg.output_path + "'");
        irt::write_csv(rep, csv);
        std::ofstream table(irt::with_extension(cfg.output_path, ".txt"));
        irt::write_table(rep, table);
    }
    if (cfg.problem == "patch") {
        const bool pass = irt::patch_passed(rep);
        std::cout << (pass ? "PASS" : "FAIL") << '\n';
        return pass ? ok : failed;
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Immersed Raviart-Thomas mixed finite elements for elliptic interface problems"};
    std::string config_file, problem, method, n_text, out, suite, solver;
    double eta = 0, r0 = 0, beta_plus = 0, beta_minus = 0, tolerance = 0;
    std::uint64_t seed = 0;

    app.add_option("--config", config_file, "key = value settings file; flags override it");
    app.add_option("--problem", problem, "example1 | example2 | patch | zero");
    app.add_option("--method", method, "immersed | traditional");
    app.add_option("--eta", eta, "penalty parameter (>= 0)");
    app.add_option("--N", n_text, "mesh sizes, e.g. 8,16,32 or 8..256");
    app.add_option("--r0", r0, "interface radius");
    app.add_option("--beta-plus", beta_plus, "diffusion outside the circle");
    app.add_option("--beta-minus", beta_minus, "diffusion inside the circle");
    app.add_option("--out", out, "CSV path (the table goes next to it as .txt), or JSON path for --suite");
    app.add_option("--seed", seed, "seed for randomized suites");
    app.add_option("--suite", suite, "unisolvence | commuting | interpolation | auxiliary | geometry | all");
    app.add_option("--tolerance", tolerance, "relative residual tolerance of the solver");
    app.add_option("--solver", solver, "sparse_lu | schur_cg");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        irt::RunConfig cfg;
        if (!config_file.empty()) irt::apply_config_file(cfg, config_file);
        auto given = [&](const char* flag) { return app.count(flag) > 0; };
        if (given("--problem")) cfg.problem = problem;
        if (given("--method")) cfg.method = irt::parse_method(method);
        if (given("--eta")) cfg.eta = eta;
        if (given("--N")) cfg.n_list = irt::parse_n_list(n_text);
        if (given("--r0")) cfg.r0 = r0;
        if (given("--beta-plus")) cfg.beta_plus = beta_plus;
        if (given("--beta-minus")) cfg.beta_minus = beta_minus;
        if (given("--out")) cfg.output_path = out;
        if (given("--seed")) cfg.seed = seed;
        if (given("--suite")) cfg.suite = suite;
        if (given("--tolerance")) cfg.solver_tolerance = tolerance;
        if (given("--solver")) cfg.backend = irt::parse_backend(solver);
        irt::validate(cfg);
        return cfg.suite.empty() ? convergence(cfg) : verify(cfg);
    }
    catch (const irt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }
    catch (const irt::SingularSystem& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return solver_failure;
    }
    catch (const irt::NonConvergence& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return solver_failure;
    }
    catch (const irt::Error& e) {
        std::cerr << "assumption violation: " << e.what() << '\n';
        return assumption_violation;
    }
}
