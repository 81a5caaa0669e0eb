#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "qjsd/cli.hpp"

using namespace qjsd;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("qjsd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    int run(const cli::RunConfig& c)
    {
        out_.str("");
        err_.str("");
        return cli::run(c, out_, err_);
    }

    // Runs the installed binary; returns its exit status.
    int shell(const std::string& args) const
    {
        const std::string cmd = std::string(QJSD_CLI_PATH) + " " + args + " > " + path("stdout.txt") + " 2> " +
                                path("stderr.txt");
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    }

    std::string read(const std::string& p) const
    {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    void write(const std::string& name, const DensityMatrix& rho) const { write_state_file(path(name), rho); }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

cli::RunConfig config(const std::string& sub)
{
    cli::RunConfig c;
    c.subcommand = sub;
    return c;
}

DensityMatrix ket(std::size_t k) { return density_from_pure(PureState::basis(2, k)); }

} // namespace

TEST_F(CliTest, AuditQubitsFindNoViolations)
{
    EXPECT_EQ(shell("audit --dim 2 --samples 100000 --seed 1 --out " + path("q")), 0);
    const auto report = nlohmann::json::parse(read(path("q_report.json")));
    EXPECT_EQ(report["violations"], 0);
    EXPECT_EQ(report["samples"], 100000);
}

TEST_F(CliTest, AuditSmallRunWritesCompleteCsv)
{
    auto c = config("audit");
    c.dim = 4;
    c.samples = 10;
    c.out = path("small");
    EXPECT_EQ(run(c), cli::kExitOk);
    std::istringstream csv(read(path("small_histogram.csv")));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "bin_low,bin_high,count,probability");
    std::uint64_t total = 0;
    int rows = 0;
    while (std::getline(csv, line)) {
        if (line.rfind("# ", 0) == 0) {
            total += std::stoull(line.substr(line.find(',') + 1));
            continue;
        }
        ++rows;
        std::istringstream row(line);
        std::string low, high, count, prob;
        std::getline(row, low, ',');
        std::getline(row, high, ',');
        std::getline(row, count, ',');
        std::getline(row, prob, ',');
        EXPECT_NEAR(std::stod(high) - std::stod(low), 0.002, 1e-12);
        EXPECT_NEAR(std::stod(prob), std::stod(count) / 10.0, 1e-12);
        total += std::stoull(count);
    }
    EXPECT_EQ(rows, 200);
    EXPECT_EQ(total, 10u);
}

TEST_F(CliTest, AuditReportIndependentOfWorkers)
{
    ASSERT_EQ(shell("audit --dim 2 --samples 100000 --seed 1 --out " + path("w1")), 0);
    ASSERT_EQ(shell("audit --dim 2 --samples 100000 --seed 1 --workers 8 --out " + path("w8")), 0);
    EXPECT_EQ(read(path("w1_report.json")), read(path("w8_report.json")));
    EXPECT_EQ(read(path("w1_histogram.csv")), read(path("w8_histogram.csv")));
}

TEST_F(CliTest, AuditBadBinningIsAUsageError)
{
    EXPECT_EQ(shell("audit --dim 2 --samples 10 --bin-width 0.3"), cli::kExitUsage);
}

TEST_F(CliTest, AuditUnwritableOutputIsAnIoError)
{
    auto c = config("audit");
    c.samples = 2;
    c.out = path("missing_dir/x");
    EXPECT_EQ(run(c), cli::kExitIo);
}

TEST_F(CliTest, AnnealSymmetrizedQubits)
{
    EXPECT_EQ(shell("anneal --dim 2 --objective symmetrized --seed 3 --out " + path("a.json")), 0);
    const auto r = nlohmann::json::parse(read(path("a.json")));
    EXPECT_LT(r["best_objective"].get<double>(), 1e-4);
}

TEST_F(CliTest, AnnealRepeatsExactly)
{
    ASSERT_EQ(shell("anneal --dim 3 --restarts 1 --seed 3 --out " + path("r1.json")), 0);
    ASSERT_EQ(shell("anneal --dim 3 --restarts 1 --seed 3 --out " + path("r2.json")), 0);
    EXPECT_EQ(read(path("r1.json")), read(path("r2.json")));
}

// The single defect vanishes at xi = rho and at xi = sigma; either merge is a minimum.
TEST_F(CliTest, AnnealSingleObjectiveMergesPivotWithAnEndpoint)
{
    ASSERT_EQ(shell("anneal --dim 2 --objective single --seed 7 --out " + path("s.json")), 0);
    const auto r = nlohmann::json::parse(read(path("s.json")));
    EXPECT_LT(r["best_objective"].get<double>(), 1e-4);
    const auto rho = state_from_json(r["decoded_states"][0]);
    const auto xi = state_from_json(r["decoded_states"][1]);
    const auto sigma = state_from_json(r["decoded_states"][2]);
    EXPECT_LT(std::min(hilbert_schmidt_distance(rho, xi), hilbert_schmidt_distance(xi, sigma)), 1e-2);
}

TEST_F(CliTest, AnnealUnknownObjectiveIsAUsageError)
{
    EXPECT_EQ(shell("anneal --objective sideways"), cli::kExitUsage);
}

TEST_F(CliTest, AnnealBadScheduleIsAUsageError)
{
    auto c = config("anneal");
    c.schedule.cooling_ratio = 1.5;
    EXPECT_EQ(run(c), cli::kExitUsage);
}

TEST_F(CliTest, CompareSameFile)
{
    StateSampler s(3, 1);
    write("a.json", sample_state(s));
    auto c = config("compare");
    c.inputs = {path("a.json"), path("a.json")};
    ASSERT_EQ(run(c), cli::kExitOk);
    const auto t = nlohmann::json::parse(out_.str());
    for (const char* key : {"qjsd", "qjsd_spectral", "qjsd_sqrt", "hilbert_schmidt", "d_h_closed_form", "djs1_lower_bound"})
        EXPECT_NEAR(t[key].get<double>(), 0.0, 1e-12) << key;
    EXPECT_EQ(t["fidelity"], 1.0);
    EXPECT_FALSE(t.contains("wootters"));
}

TEST_F(CliTest, CompareOrthogonalPureStates)
{
    write("zero.json", ket(0));
    write("one.json", ket(1));
    EXPECT_EQ(shell("compare " + path("zero.json") + " " + path("one.json")), 0);
    const auto t = nlohmann::json::parse(read(path("stdout.txt")));
    EXPECT_NEAR(t["qjsd"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(t["fidelity"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(t["wootters"].get<double>(), std::numbers::pi / 2, 1e-12);
}

TEST_F(CliTest, CompareMixedAgainstPure)
{
    write("mixed.json", DensityMatrix::maximally_mixed(2));
    write("zero.json", ket(0));
    auto c = config("compare");
    c.inputs = {path("mixed.json"), path("zero.json")};
    ASSERT_EQ(run(c), cli::kExitOk);
    const auto t = nlohmann::json::parse(out_.str());
    EXPECT_NEAR(t["qjsd"].get<double>(), 0.3112781245, 1e-9);
    EXPECT_NEAR(t["qjsd_spectral"].get<double>(), 0.3112781245, 1e-9);
}

TEST_F(CliTest, CompareErrors)
{
    write("two.json", ket(0));
    write("three.json", DensityMatrix::maximally_mixed(3));
    {
        std::ofstream f(path("bad.json"));
        f << "{\"dim\": 2, \"matrix\": 7}";
    }
    EXPECT_EQ(shell("compare " + path("two.json") + " " + path("three.json")), cli::kExitData);
    EXPECT_EQ(shell("compare " + path("two.json") + " " + path("bad.json")), cli::kExitData);
    EXPECT_EQ(shell("compare " + path("two.json") + " " + path("absent.json")), cli::kExitIo);
}

TEST_F(CliTest, SampleWritesValidFilesDeterministically)
{
    ASSERT_EQ(shell("sample --dim 3 --samples 2 --seed 5 --out " + path("first")), 0);
    ASSERT_EQ(shell("sample --dim 3 --samples 2 --seed 5 --out " + path("second")), 0);
    for (int i = 0; i < 2; ++i) {
        const auto a = read(path("first_" + std::to_string(i) + ".json"));
        EXPECT_EQ(a, read(path("second_" + std::to_string(i) + ".json")));
        EXPECT_EQ(read_state_file(path("first_" + std::to_string(i) + ".json")).dim(), 3u);
    }
    EXPECT_FALSE(fs::exists(path("first_2.json")));
}

TEST_F(CliTest, SampleRespectsMixednessFloor)
{
    auto c = config("sample");
    c.dim = 2;
    c.samples = 1000;
    c.mixedness_floor = 0.45;
    ASSERT_EQ(run(c), cli::kExitOk);
    const auto arr = nlohmann::json::parse(out_.str());
    ASSERT_EQ(arr.size(), 1000u);
    for (const auto& doc : arr) EXPECT_GE(state_from_json(doc).linear_entropy(), 0.45 - 1e-12);
}

TEST_F(CliTest, SampleDefaultsToOneState)
{
    EXPECT_EQ(shell("sample --dim 2 --seed 4"), 0);
    EXPECT_EQ(nlohmann::json::parse(read(path("stdout.txt"))).size(), 1u);
}

TEST_F(CliTest, PurescanDefault)
{
    EXPECT_EQ(shell("purescan"), 0);
    const auto r = nlohmann::json::parse(read(path("stdout.txt")));
    EXPECT_GE(r["min_g"].get<double>(), -1e-12);
    EXPECT_EQ(r["grid_steps"], 25);
}

TEST_F(CliTest, PurescanCorners)
{
    auto c = config("purescan");
    c.grid_steps = 2;
    EXPECT_EQ(run(c), cli::kExitOk);
}

TEST_F(CliTest, PurescanMinimumAtDegeneracy)
{
    auto c = config("purescan");
    ASSERT_EQ(run(c), cli::kExitOk);
    const auto r = nlohmann::json::parse(out_.str());
    const double x = r["x"], y = r["y"], z = r["z"];
    EXPECT_NEAR(r["min_g"].get<double>(), 0.0, 1e-12);
    EXPECT_TRUE(std::abs(y - x) < 1e-9 || std::abs(z - x) < 1e-9 || std::abs(y - 1) < 1e-9 || std::abs(z - 1) < 1e-9);
}

TEST_F(CliTest, PurescanBadGridIsAUsageError)
{
    auto c = config("purescan");
    c.grid_steps = 1;
    EXPECT_EQ(run(c), cli::kExitUsage);
}

TEST_F(CliTest, UnknownSubcommand)
{
    EXPECT_EQ(run(config("plot")), cli::kExitUsage);
    EXPECT_EQ(shell("plot"), cli::kExitUsage);
}
