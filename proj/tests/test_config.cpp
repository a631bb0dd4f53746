#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "frx/config.hpp"
#include "frx/runner.hpp"

using namespace frx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// CSV text with the trailing step_ms column removed from every line.
std::string without_timing(const std::string& csv) {
    std::stringstream in(csv), out;
    std::string line;
    while (std::getline(in, line)) out << line.substr(0, line.rfind(',')) << "\n";
    return out.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("frx_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string error_of(const std::string& text) {
    try {
        validate(parse_config_text(text));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

RunConfig small_icv(const fs::path& out) {
    RunConfig c;
    c.kind = CaseKind::icv;
    c.schemes = {Scheme::A, Scheme::B};
    c.p = 2;
    c.elements = std::array<int, 3>{4, 4, 1};
    c.tEnd = 0.5;
    c.output = out.string();
    return c;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FRX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST(ConfigParse, MinimalTgvGetsDefaults) {
    const auto c = parse_config_text("case = \"tgv\"\nre = 1600\nma = 0.1\np = 3\nelements = [8, 8, 8]\n");
    EXPECT_NO_THROW(validate(c));
    EXPECT_EQ(c.kind, CaseKind::tgv);
    EXPECT_EQ(c.re, 1600.0);
    EXPECT_EQ(c.ma, 0.1);
    EXPECT_EQ(c.p, 3);
    EXPECT_EQ(c.grid(), (std::array<int, 3>{8, 8, 8}));
    EXPECT_EQ(c.pr, 0.71);
    EXPECT_EQ(c.gamma, 1.4);
    EXPECT_EQ(c.precision, Precision::fp64);
    EXPECT_EQ(c.cfl, 0.4);
    EXPECT_FALSE(c.dt.has_value());
    EXPECT_EQ(c.schemes.size(), 4u);
}

TEST(ConfigParse, CommentsQuotesAndLists) {
    const auto c = parse_config_text(
        "# desk run\n"
        "case = 'icv'  # inline\n"
        "scheme = [\"A\", \"D\"]\n"
        "precision = \"fp32\"\n"
        "profile = true\n"
        "tend = 2.5\n"
        "output = \"out/#1\"\n");
    EXPECT_EQ(c.kind, CaseKind::icv);
    EXPECT_EQ(c.schemes, (std::vector<Scheme>{Scheme::A, Scheme::D}));
    EXPECT_EQ(c.precision, Precision::fp32);
    EXPECT_TRUE(c.profile);
    EXPECT_EQ(c.end_time(), 2.5);
    EXPECT_EQ(c.output, "out/#1");
    EXPECT_EQ(c.grid(), (std::array<int, 3>{8, 8, 1}));
}

TEST(ConfigParse, NegativeOrderIsRangeError) {
    const auto msg = error_of("p = -1\n");
    EXPECT_NE(msg.find("p: out of range"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[0, "), std::string::npos) << msg;
}

TEST(ConfigParse, UnknownSchemeListsChoices) {
    const auto msg = error_of("scheme = \"E\"\n");
    EXPECT_NE(msg.find("{A, B, C, D}"), std::string::npos) << msg;
    EXPECT_NE(msg.find("config:1"), std::string::npos) << msg;
}

TEST(ConfigParse, UnknownKeyListsValidKeys) {
    const auto msg = error_of("reynolds = 400\n");
    EXPECT_NE(msg.find("reynolds"), std::string::npos);
    for (const auto& k : config_keys()) EXPECT_NE(msg.find(k), std::string::npos) << k;
}

TEST(ConfigParse, MalformedInputs) {
    EXPECT_FALSE(error_of("[run]\np = 2\n").empty());
    EXPECT_FALSE(error_of("p = 2\np = 3\n").empty());
    EXPECT_FALSE(error_of("p 2\n").empty());
    EXPECT_FALSE(error_of("p = 2.5\n").empty());
    EXPECT_FALSE(error_of("elements = [4, 4]\n").empty());
    EXPECT_FALSE(error_of("case = \"channel\"\n").empty());
    EXPECT_FALSE(error_of("precision = \"fp16\"\n").empty());
    EXPECT_FALSE(error_of("cfl = 0\n").empty());
    EXPECT_FALSE(error_of("re = -5\n").empty());
    EXPECT_FALSE(error_of("elements = [4, 0, 4]\n").empty());
    EXPECT_TRUE(error_of("p = 2\n").empty());
}

TEST(ConfigParse, FlagStyleParsers) {
    EXPECT_EQ(parse_scheme_list("A, C"), (std::vector<Scheme>{Scheme::A, Scheme::C}));
    EXPECT_EQ(parse_elements("8,8,1"), (std::array<int, 3>{8, 8, 1}));
    EXPECT_THROW(parse_elements("8,8"), ConfigError);
    EXPECT_THROW(parse_scheme("E"), ConfigError);
    EXPECT_EQ(parse_precision("fp32"), Precision::fp32);
    EXPECT_EQ(parse_case("remainder"), CaseKind::remainder);
}

TEST(ConfigParse, MissingFileRaises) {
    EXPECT_THROW(parse_config_file("/nonexistent/frx.toml"), ConfigError);
}

// ---------------------------------------------------------------------------
// Runner

TEST(Runner, SmallIcvWritesOneCsvPerScheme) {
    const auto dir = scratch("icv");
    std::ostringstream log;
    EXPECT_EQ(run(small_icv(dir), log), kCompleted);
    for (const char* s : {"A", "B"}) {
        const auto path = dir / (std::string("icv_") + s + "_fp64.csv");
        ASSERT_TRUE(fs::exists(path));
        const auto text = slurp(path);
        EXPECT_EQ(text.substr(0, text.find('\n')), "t,Ek,eps1,eps2,err_rho,step_ms");
    }
    EXPECT_FALSE(fs::exists(dir / "icv_C_fp64.csv"));
    EXPECT_NE(log.str().find("completed"), std::string::npos);
}

TEST(Runner, FinalSampleAtEndTime) {
    const auto dir = scratch("final");
    auto c = small_icv(dir);
    c.schemes = {Scheme::D};
    c.sampleEvery = 7;
    std::ostringstream log;
    ASSERT_EQ(run(c, log), kCompleted);
    const auto text = slurp(dir / "icv_D_fp64.csv");
    std::stringstream in(text);
    std::string line, last;
    while (std::getline(in, line)) last = line;
    EXPECT_NEAR(std::stod(last.substr(0, last.find(','))), 0.5, 1e-12);
}

TEST(Runner, CsvIsReproducibleApartFromTiming) {
    const auto a = scratch("rep_a"), b = scratch("rep_b");
    std::ostringstream log;
    run(small_icv(a), log);
    run(small_icv(b), log);
    for (const char* s : {"icv_A_fp64.csv", "icv_B_fp64.csv"})
        EXPECT_EQ(without_timing(slurp(a / s)), without_timing(slurp(b / s))) << s;
}

TEST(Runner, SinglePrecisionRun) {
    const auto dir = scratch("fp32");
    auto c = small_icv(dir);
    c.precision = Precision::fp32;
    std::ostringstream log;
    EXPECT_EQ(run(c, log), kCompleted);
    EXPECT_TRUE(fs::exists(dir / "icv_A_fp32.csv"));
}

TEST(Runner, TgvReportsEnstrophy) {
    const auto dir = scratch("tgv");
    RunConfig c;
    c.kind = CaseKind::tgv;
    c.schemes = {Scheme::C};
    c.p = 2;
    c.elements = std::array<int, 3>{2, 2, 2};
    c.tEnd = 0.2;
    c.sampleEvery = 1;
    c.output = dir.string();
    std::ostringstream log;
    ASSERT_EQ(run(c, log), kCompleted);
    std::stringstream in(slurp(dir / "tgv_C_fp64.csv"));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::vector<double> cols;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cols.push_back(std::stod(cell));
    ASSERT_EQ(cols.size(), 6u);
    EXPECT_EQ(cols[0], 0.0);
    EXPECT_NEAR(cols[1], 0.125, 0.01);
    EXPECT_GT(cols[3], 0.0);
    EXPECT_TRUE(std::isnan(cols[4]));
}

TEST(Runner, ProfileWritesTimingTable) {
    const auto dir = scratch("profile");
    RunConfig c;
    c.kind = CaseKind::tgv;
    c.p = 2;
    c.elements = std::array<int, 3>{2, 2, 2};
    c.profile = true;
    c.profileSteps = 2;
    c.output = dir.string();
    std::ostringstream log;
    ASSERT_EQ(run(c, log), kCompleted);
    const auto text = slurp(dir / "timing.txt");
    std::stringstream in(text);
    std::string head, name;
    std::getline(in, head);
    EXPECT_NE(head.find("scheme"), std::string::npos);
    EXPECT_NE(head.find("mean_ms"), std::string::npos);
    EXPECT_NE(head.find("saving_pct"), std::string::npos);
    double ms = 0, saving = 0;
    int rows = 0;
    while (in >> name >> ms >> saving) {
        EXPECT_GT(ms, 0.0);
        if (name == "A") EXPECT_EQ(saving, 0.0);
        ++rows;
    }
    EXPECT_EQ(rows, 4);
}

TEST(Runner, TimingTableSavingConvention) {
    std::ostringstream os;
    write_timing_table(os, {{Scheme::A, 10.0, 0.0}, {Scheme::C, 8.0, 20.0}});
    EXPECT_NE(os.str().find("20.00"), std::string::npos);
}

TEST(Runner, RemainderCsvColumns) {
    const auto dir = scratch("rem");
    RunConfig c;
    c.kind = CaseKind::remainder;
    c.pMin = 2;
    c.pMax = 3;
    c.samples = 5;
    c.output = dir.string();
    std::ostringstream log;
    ASSERT_EQ(run(c, log), kCompleted);
    std::stringstream in(slurp(dir / "remainder.csv"));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "p,variant,normInterp,normGrad,edgeL,edgeR,bound_r2,bound_r4");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
        ++rows;
    }
    EXPECT_EQ(rows, 4);  // two orders, two variants
}

TEST(Runner, DivergedRunKeepsPartialCsv) {
    const auto dir = scratch("diverge");
    RunConfig c;
    c.kind = CaseKind::tgv;
    c.schemes = {Scheme::B};
    c.p = 2;
    c.elements = std::array<int, 3>{2, 2, 2};
    c.dt = 2.0;
    c.tEnd = 40.0;
    c.sampleEvery = 1;
    c.output = dir.string();
    std::ostringstream log;
    EXPECT_EQ(run(c, log), kDiverged);
    const auto text = slurp(dir / "tgv_B_fp64.csv");
    EXPECT_GE(std::count(text.begin(), text.end(), '\n'), 2);
    EXPECT_NE(log.str().find("diverged"), std::string::npos);
}

TEST(Runner, InvalidConfigRaises) {
    RunConfig c;
    c.p = 11;
    std::ostringstream log;
    EXPECT_THROW(run(c, log), ConfigError);
}

// ---------------------------------------------------------------------------
// Command line

TEST(Cli, RunWithFlagOverrides) {
    const auto dir = scratch("cli");
    const auto cfg = dir / "run.toml";
    std::ofstream(cfg) << "case = \"icv\"\np = 5\nelements = [4, 4, 1]\ntend = 0.2\nscheme = \"D\"\n";
    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --p 2 --scheme A,C --output " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "icv_A_fp64.csv"));
    EXPECT_TRUE(fs::exists(dir / "icv_C_fp64.csv"));
    EXPECT_FALSE(fs::exists(dir / "icv_D_fp64.csv"));
}

TEST(Cli, ErrorsExitWithOne) {
    const auto dir = scratch("cli_err");
    const auto cfg = dir / "bad.toml";
    std::ofstream(cfg) << "p = -1\n";
    EXPECT_EQ(run_cli("run --config " + cfg.string()), 1);
    EXPECT_EQ(run_cli("run --config /nonexistent.toml"), 1);
    EXPECT_EQ(run_cli("bogus"), 1);
    std::ofstream(cfg) << "case = \"icv\"\n";
    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --scheme E"), 1);
}

TEST(Cli, RemainderSubcommand) {
    const auto dir = scratch("cli_rem");
    EXPECT_EQ(run_cli("remainder --p-min 2 --p-max 2 --samples 3 --output " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "remainder.csv"));
}

TEST(Cli, DivergenceExitsWithTwo) {
    const auto dir = scratch("cli_div");
    const auto cfg = dir / "div.toml";
    std::ofstream(cfg) << "case = \"tgv\"\nscheme = \"B\"\np = 2\nelements = [2, 2, 2]\ndt = 2.0\ntend = 40\n";
    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --output " + dir.string()), 2);
}

TEST(Recipes, CheckedInConfigsValidate) {
    int n = 0;
    for (const auto& entry : fs::directory_iterator(FRX_CONFIG_DIR)) {
        if (entry.path().extension() != ".toml") continue;
        ++n;
        RunConfig c;
        EXPECT_NO_THROW(c = parse_config_file(entry.path().string())) << entry.path();
        EXPECT_NO_THROW(validate(c)) << entry.path();
        if (c.kind == CaseKind::tgv && !c.profile) EXPECT_LE(c.cfl, 0.3) << entry.path();
    }
    EXPECT_GE(n, 3);
}
