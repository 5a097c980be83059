#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "randhull/cli/cli.hpp"

using namespace randhull;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string body(const std::string& text) { return text.substr(text.find('\n') + 1); }

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "randhull_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

const std::string gaussian2 = R"({"kind":"gaussian","dim":2})";

}  // namespace

TEST(Parsing, NList) {
    EXPECT_EQ(cli::parse_n_list("3,4,8"), (std::vector<std::uint64_t>{3, 4, 8}));
    EXPECT_EQ(cli::parse_n_list("3:6,9"), (std::vector<std::uint64_t>{3, 4, 5, 6, 9}));
    EXPECT_THROW(cli::parse_n_list("6:3"), invalid_input);
    EXPECT_THROW(cli::parse_n_list("x"), invalid_input);
}

TEST(Parsing, MergeOverrides) {
    const std::vector<std::string> stored{"estimate", "--spec", "a.json", "--n", "4", "--seed", "1"};
    const auto m = cli::merge_overrides(stored, {"--n", "6,8", "--threads", "2"});
    EXPECT_EQ(m, (std::vector<std::string>{"estimate", "--spec", "a.json", "--seed", "1", "--n", "6,8", "--threads",
                                           "2"}));
    EXPECT_EQ(cli::merge_overrides(stored, {}), stored);
}

TEST(Estimate, GaussianFourPointsNearHalf) {
    const auto r = invoke({"estimate", "--spec", gaussian2, "--n", "4", "--trials", "20000", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    bool found = false;
    while (std::getline(lines, line)) {
        if (line.rfind("4,", 0) != 0) continue;
        const auto cells = cli::split(line, ',');
        const double est = std::stod(cells[1]), se = std::stod(cells[2]);
        EXPECT_NEAR(est, 0.5, 4.0 * se);
        EXPECT_EQ(std::stod(cells.back()), 0.5);
        found = true;
    }
    EXPECT_TRUE(found) << r.out;
}

TEST(Estimate, SameSeedSameBody) {
    const std::vector<std::string> args{"estimate", "--spec", gaussian2, "--n", "3:5", "--trials", "3000"};
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    EXPECT_EQ(body(invoke(args).out), body(invoke(threaded).out));
}

TEST(Bounds, DepthSandwichNumbers) {
    const auto r = invoke({"bounds", "--d", "3", "--alpha", "0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("depth,N_lower,1,"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("depth,N_upper,18,"), std::string::npos) << r.out;
}

TEST(Formats, JsonAndTable) {
    const auto j = invoke({"bounds", "--d", "2", "--alpha", "0.25", "--format", "json"});
    ASSERT_EQ(j.code, 0) << j.err;
    EXPECT_NO_THROW((void)nlohmann::json::parse(j.out.substr(j.out.find('{'))));
    const auto t = invoke({"bounds", "--d", "2", "--alpha", "0.25", "--format", "table"});
    EXPECT_EQ(t.code, 0);
    EXPECT_EQ(invoke({"bounds", "--d", "2", "--format", "xml"}).code, 2);
}

TEST(Errors, ExitCodes) {
    EXPECT_EQ(invoke({"estimate", "--spec", gaussian2, "--bogus"}).code, 2);
    EXPECT_EQ(invoke({"estimate", "--spec", R"({"kind":"gaussian"})", "--n", "4"}).code, 2);
    EXPECT_EQ(invoke({"estimate", "--spec", "{not json", "--n", "4"}).code, 2);
    EXPECT_EQ(invoke({"estimate", "--spec", "/no/such/file.json", "--n", "4"}).code, 2);
    EXPECT_EQ(invoke({"reproduce", "no-such-suite"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
    const auto bad = invoke({"estimate", "--spec", R"({"kind":"two_point","epsilon":1.5})", "--n", "4"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("epsilon"), std::string::npos) << bad.err;
}

TEST(Errors, CubatureBudgetExitsThree) {
    const auto r = invoke({"cubature", "--spec", gaussian2, "--theta", "50,50"});
    EXPECT_EQ(r.code, 3) << r.out << r.err;
}

TEST(Manifest, ReplayReproducesAndOverrides) {
    const fs::path out = scratch("est.csv");
    const std::vector<std::string> args{"estimate", "--spec", gaussian2, "--n", "4", "--trials", "2000",
                                        "--seed",   "9",      "--out",   out.string()};
    const auto first = invoke(args);
    ASSERT_EQ(first.code, 0) << first.err;
    const fs::path mf = out.string() + ".manifest.json";
    ASSERT_TRUE(fs::exists(mf));
    const auto manifest = nlohmann::json::parse(slurp(mf));
    EXPECT_EQ(manifest.at("seed"), 9);
    EXPECT_EQ(manifest.at("argv").get<std::vector<std::string>>(), args);
    EXPECT_EQ(slurp(out), first.out);

    const auto replay = invoke({"--manifest", mf.string(), "--threads", "4"});
    ASSERT_EQ(replay.code, 0) << replay.err;
    EXPECT_EQ(body(replay.out), body(first.out));

    const auto changed = invoke({"--manifest", mf.string(), "--seed", "10"});
    ASSERT_EQ(changed.code, 0) << changed.err;
    EXPECT_NE(body(changed.out), body(first.out));

    EXPECT_EQ(invoke({"--manifest", scratch("missing.json").string()}).code, 2);
}

TEST(Reproduce, GaussNxContainsTwoD) {
    const auto r = invoke({"reproduce", "gauss-nx", "--d", "2", "--trials", "2000"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("gaussian(2),2,0.5,4,"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("# verdict: pass"), std::string::npos);
}

TEST(Reproduce, CubatureTrigBound) {
    const auto r = invoke({"reproduce", "cubature-trig", "--d", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find(",108,true"), std::string::npos) << r.out;
}

TEST(Reproduce, TwoPointSeven) {
    const auto r = invoke({"reproduce", "two-point", "--epsilon", "0.1", "--nmax", "8", "--trials", "5000"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find(",N,7,7,"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("# verdict: pass"), std::string::npos) << r.out;
}

TEST(Reproduce, RegistryListsEverySuite) {
    for (const char* name : {"wendel-table", "two-point", "gauss-nx", "nx-sandwich", "g-grid", "sandwich",
                             "increments", "smoothing", "cubature", "cubature-trig", "interior-gauss",
                             "floating", "be-table"})
        EXPECT_TRUE(cli::suites::registry().count(name)) << name;
}
