#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "irt/driver.hpp"

using namespace irt;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    int code = -1;
    std::string out;
};

Outcome run_cli(const std::string& args)
{
    const std::string cmd = std::string(IRT_CLI_PATH) + " " + args + " 2>/dev/null";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return o;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) o.out += buf;
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliFiles : public ::testing::Test
{
protected:
    fs::path dir;
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / (std::string("irt_cli_") + info->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
};

} // namespace

TEST(Config, NListForms)
{
    EXPECT_EQ(parse_n_list("8..256"), (std::vector<int>{8, 16, 32, 64, 128, 256}));
    EXPECT_EQ(parse_n_list(" 8, 16 ,32"), (std::vector<int>{8, 16, 32}));
    EXPECT_EQ(parse_n_list("4"), (std::vector<int>{4}));
    EXPECT_THROW(parse_n_list("8..20"), ConfigError);
    EXPECT_THROW(parse_n_list("16..8"), ConfigError);
    EXPECT_THROW(parse_n_list("0"), ConfigError);
    EXPECT_THROW(parse_n_list("8,x"), ConfigError);
    EXPECT_THROW(parse_n_list("2.5"), ConfigError);
}

TEST(Config, KeyValueText)
{
    RunConfig cfg;
    std::istringstream in("# sweep\nproblem = example2\nMethod = traditional  # comparator\n\nbeta-plus = 0.5\n"
                          "N = 8..32\nsolver = schur_cg\nseed = 7\n");
    apply_config_text(cfg, in);
    EXPECT_EQ(cfg.problem, "example2");
    EXPECT_EQ(cfg.method, Method::traditional);
    EXPECT_EQ(cfg.beta_plus, 0.5);
    EXPECT_EQ(cfg.n_list, (std::vector<int>{8, 16, 32}));
    EXPECT_EQ(cfg.backend, Backend::schur_cg);
    EXPECT_EQ(cfg.seed, 7u);
    EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, BadSettings)
{
    RunConfig cfg;
    std::istringstream no_eq("problem example1\n");
    EXPECT_THROW(apply_config_text(cfg, no_eq), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "colour", "red"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "eta", "1e"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "seed", "-1"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "method", "fitted"), ConfigError);
    EXPECT_THROW(apply_config_file(cfg, "/nonexistent/irt.cfg"), ConfigError);

    auto invalid = [](auto edit) {
        RunConfig c;
        edit(c);
        return c;
    };
    EXPECT_THROW(validate(invalid([](RunConfig& c) { c.problem = "example3"; })), ConfigError);
    EXPECT_THROW(validate(invalid([](RunConfig& c) { c.eta = -1; })), ConfigError);
    EXPECT_THROW(validate(invalid([](RunConfig& c) { c.r0 = 1.2; })), ConfigError);
    EXPECT_THROW(validate(invalid([](RunConfig& c) { c.beta_minus = 0; })), ConfigError);
    EXPECT_THROW(validate(invalid([](RunConfig& c) { c.solver_tolerance = 0; })), ConfigError);
    EXPECT_THROW(validate(invalid([](RunConfig& c) { c.suite = "everything"; })), ConfigError);
    EXPECT_NO_THROW(validate(invalid([](RunConfig& c) { c.suite = "all"; })));
}

TEST(Config, SiblingPath)
{
    EXPECT_EQ(with_extension("out/ex1.csv", ".txt"), "out/ex1.txt");
    EXPECT_EQ(with_extension("ex1", ".txt"), "ex1.txt");
    EXPECT_EQ(with_extension("run.d/ex1", ".txt"), "run.d/ex1.txt");
}

TEST(Config, RunHonorsSettings)
{
    RunConfig cfg;
    cfg.problem = "patch";
    cfg.method = Method::traditional;
    cfg.eta = 0.0;
    cfg.n_list = {2, 4};
    const ErrorReport rep = run(cfg);
    EXPECT_EQ(rep.problem, "patch");
    EXPECT_EQ(rep.method, "traditional");
    ASSERT_EQ(rep.rows.size(), 2u);
    EXPECT_TRUE(patch_passed(rep));
}

TEST_F(CliFiles, PatchPrintsPass)
{
    const Outcome o = run_cli("--problem patch --method traditional --N 8");
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("PASS"), std::string::npos) << o.out;
}

TEST_F(CliFiles, WritesCsvAndTable)
{
    const fs::path csv = dir / "ex1.csv";
    const Outcome o = run_cli("--problem example1 --method immersed --eta 1 --N 8,16 --out " + csv.string());
    ASSERT_EQ(o.code, 0) << o.out;
    std::istringstream in(slurp(csv));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "N,err_p,rate_p,err_u,rate_u,jump_seminorm");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 2);
    const std::string table = slurp(dir / "ex1.txt");
    EXPECT_EQ(table, o.out);
    EXPECT_NE(table.find("example1, immersed, eta = 1"), std::string::npos);
}

TEST_F(CliFiles, IdenticalRunsGiveIdenticalBytes)
{
    const fs::path a = dir / "a.csv", b = dir / "b.csv";
    const std::string args = "--problem example2 --method immersed --eta 1 --N 8,16 --seed 3 --out ";
    ASSERT_EQ(run_cli(args + a.string()).code, 0);
    ASSERT_EQ(run_cli(args + b.string()).code, 0);
    EXPECT_FALSE(slurp(a).empty());
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(CliFiles, FlagsOverrideConfigFile)
{
    const fs::path cfg = dir / "run.cfg";
    std::ofstream(cfg) << "problem = example1\nmethod = traditional\neta = 5\nN = 8\n";
    const Outcome from_file = run_cli("--config " + cfg.string());
    EXPECT_EQ(from_file.code, 0);
    EXPECT_NE(from_file.out.find("example1, traditional, eta = 5"), std::string::npos) << from_file.out;
    const Outcome overridden = run_cli("--config " + cfg.string() + " --method immersed --eta 0");
    EXPECT_EQ(overridden.code, 0);
    EXPECT_NE(overridden.out.find("example1, immersed, eta = 0"), std::string::npos) << overridden.out;
}

TEST(Cli, ConfigErrorsExitWithTwo)
{
    EXPECT_EQ(run_cli("--method fitted").code, 2);
    EXPECT_EQ(run_cli("--problem nowhere").code, 2);
    EXPECT_EQ(run_cli("--eta -1").code, 2);
    EXPECT_EQ(run_cli("--N 8..20").code, 2);
    EXPECT_EQ(run_cli("--bogus-flag").code, 2);
    EXPECT_EQ(run_cli("--config /nonexistent/irt.cfg").code, 2);
    EXPECT_EQ(run_cli("--suite everything").code, 2);
}

TEST(Cli, AssumptionViolationExitsWithThree)
{
    // A circle of radius 0.05 on a single-cell mesh crosses one edge twice.
    EXPECT_EQ(run_cli("--problem example1 --r0 0.05 --N 1").code, 3);
}

TEST(Cli, SolverFailureExitsWithFour)
{
    EXPECT_EQ(run_cli("--problem example1 --N 8 --tolerance 1e-30").code, 4);
    EXPECT_EQ(run_cli("--problem example1 --N 8 --solver schur_cg --tolerance 1e-30").code, 4);
}

TEST(Cli, SuiteEmitsJson)
{
    const Outcome o = run_cli("--suite commuting --seed 5");
    EXPECT_EQ(o.code, 0);
    const auto j = nlohmann::json::parse(o.out);
    EXPECT_EQ(j.at("suite"), "commuting");
    EXPECT_TRUE(j.at("passed").get<bool>());
    EXPECT_EQ(j.at("failures").get<long>(), 0);
    EXPECT_LE(j.at("metrics").at("max_defect").get<double>(), 1e-11);
    EXPECT_GT(j.at("checks").get<long>(), 20);
}

TEST_F(CliFiles, SuiteJsonIsReproducible)
{
    const fs::path a = dir / "a.json", b = dir / "b.json";
    ASSERT_EQ(run_cli("--suite geometry --out " + a.string()).code, 0);
    ASSERT_EQ(run_cli("--suite geometry --out " + b.string()).code, 0);
    const auto j = nlohmann::json::parse(slurp(a));
    EXPECT_EQ(j.at("suite"), "geometry");
    EXPECT_EQ(slurp(a), slurp(b));
}
