#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "welltris/cli.hpp"

namespace welltris {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
    int code;
    std::string out;
    std::string err;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("welltris_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p.string();
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static Result run(std::vector<std::string> args) {
        args.insert(args.begin(), "welltris");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return {code, out.str(), err.str()};
    }

    // 3-attribute example: r(a,b) = {(0,0),(1,1)}, s(b,c) = {(0,0),(1,0)}.
    std::vector<std::string> example() {
        return {file("r.csv", "a,b\n0,0\n1,1\n"), file("s.csv", "b,c\n0,0\n1,0\n")};
    }

    std::string preprocess(const std::vector<std::string>& csvs, const std::string& name = "idx") {
        std::vector<std::string> args{"preprocess"};
        args.insert(args.end(), csvs.begin(), csvs.end());
        args.push_back("-o");
        args.push_back(path(name));
        const Result r = run(args);
        EXPECT_EQ(r.code, 0) << r.err;
        return path(name);
    }

    fs::path dir_;
};

TEST_F(CliTest, PreprocessWritesIndexAndEncoding) {
    const std::string idx = preprocess(example());
    EXPECT_EQ(slurp(idx).rfind("welltris-index v1 ", 0), 0u);
    EXPECT_EQ(slurp(idx + ".enc").rfind("welltris-encoding v1 ", 0), 0u);
}

TEST_F(CliTest, PreprocessMissingFile) {
    const Result r = run({"preprocess", path("nope.csv"), "-o", path("idx")});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, PreprocessIsByteIdentical) {
    const auto csvs = example();
    const std::string a = preprocess(csvs, "a");
    const std::string b = preprocess(csvs, "b");
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(a + ".enc"), slurp(b + ".enc"));
}

TEST_F(CliTest, EstimateCrossProduct) {
    const std::string idx = preprocess({file("r.csv", "a\n1\n2\n3\n4\n"), file("s.csv", "b\nx\ny\nz\nw\n")});
    const Result r = run({"estimate", idx});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["estimate"], 16);
    EXPECT_EQ(j["iterations"], 0);
    for (const char* key : {"epsilon", "delta", "seed", "boxes_in_E", "samples_drawn", "k_used", "wall_ms"})
        EXPECT_TRUE(j.contains(key)) << key;
}

TEST_F(CliTest, EstimateEmptyTable) {
    const std::string idx = preprocess({file("r.csv", "a,b\n1,2\n3,4\n"), file("s.csv", "b\n")});
    const Result r = run({"estimate", idx});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["estimate"], 0);
}

TEST_F(CliTest, EstimateSameSeedSameOutput) {
    const std::string idx = preprocess(example());
    json first = json::parse(run({"estimate", idx, "--seed", "9", "--epsilon", "0.3"}).out);
    json second = json::parse(run({"estimate", idx, "--seed", "9", "--epsilon", "0.3"}).out);
    first.erase("wall_ms");
    second.erase("wall_ms");
    EXPECT_EQ(first, second);
    EXPECT_GE(first["estimate"].get<std::uint64_t>(), 2u);
}

TEST_F(CliTest, EstimateMalformedIndex) {
    const Result r = run({"estimate", file("bad", "welltris-index v1 d=x\n")});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_EQ(run({"estimate", path("missing")}).code, cli::kInputError);
}

TEST_F(CliTest, EstimateBadParameters) {
    const std::string idx = preprocess(example());
    EXPECT_EQ(run({"estimate", idx, "--delta", "2"}).code, cli::kInputError);
    EXPECT_EQ(run({"estimate", idx, "--k", "0"}).code, cli::kInputError);
}

TEST_F(CliTest, SampleSingleRowJoin) {
    const std::string idx = preprocess({file("r.csv", "a,b\nx,y\n")});
    const Result r = run({"sample", idx, "--q", "1", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "a,b\nx,y\n");
}

TEST_F(CliTest, SampleZeroRowsHeaderOnly) {
    const std::string idx = preprocess(example());
    const Result r = run({"sample", idx, "--q", "0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "a,b,c\n");
}

TEST_F(CliTest, SampleRowsBelongToJoin) {
    const std::string idx = preprocess(example());
    const Result r = run({"sample", idx, "--q", "40", "--seed", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "a,b,c");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_TRUE(line == "0,0,0" || line == "1,1,0") << line;
        ++rows;
    }
    EXPECT_EQ(rows, 40);
}

TEST_F(CliTest, SampleEmptyJoin) {
    const std::string idx = preprocess({file("r.csv", "a,b\n0,0\n"), file("s.csv", "b,c\n1,0\n")});
    const Result r = run({"sample", idx, "--q", "2"});
    EXPECT_EQ(r.code, cli::kEmptyJoin);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, ExactExample) {
    const Result r = run({"exact", example()[0], example()[1], "--rows"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["z"], 2);
    EXPECT_EQ(j["attributes"], json({"a", "b", "c"}));
    EXPECT_EQ(j["rows"], json({{"0", "0", "0"}, {"1", "1", "0"}}));
}

TEST_F(CliTest, ExactDisjointAndGuard) {
    const auto r = file("r.csv", "a,b\n1,p\n2,q\n");
    const auto s = file("s.csv", "b,c\nz,1\n");
    EXPECT_EQ(json::parse(run({"exact", r, s}).out)["z"], 0);
    const auto x = file("x.csv", "a\n1\n2\n3\n");
    const auto y = file("y.csv", "c\n1\n2\n3\n");
    EXPECT_EQ(json::parse(run({"exact", x, y}).out)["z"], 9);
    EXPECT_EQ(run({"exact", x, y, "--max-rows", "4"}).code, cli::kOracleGuard);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, cli::kInputError);
    EXPECT_EQ(run({"bogus"}).code, cli::kInputError);
    EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST_F(CliTest, BinaryExitCodes) {
    const char* bin = std::getenv("WELLTRIS_BIN");
    if (bin == nullptr) GTEST_SKIP() << "WELLTRIS_BIN not set";
    auto exit_of = [&](const std::string& args) {
        const std::string cmd = std::string("\"") + bin + "\" " + args + " > \"" + path("out") + "\" 2> \"" +
                                path("err") + "\"";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    const auto csvs = example();
    EXPECT_EQ(exit_of("preprocess \"" + csvs[0] + "\" \"" + csvs[1] + "\" -o \"" + path("idx") + "\""), 0);
    EXPECT_EQ(exit_of("estimate \"" + path("idx") + "\" --seed 1"), 0);
    EXPECT_GE(json::parse(slurp(path("out")))["estimate"].get<std::uint64_t>(), 2u);
    EXPECT_EQ(exit_of("preprocess \"" + path("none.csv") + "\" -o \"" + path("idx2") + "\""), 2);
    EXPECT_FALSE(slurp(path("err")).empty());
    const auto e0 = file("e0.csv", "a,b\n0,0\n");
    const auto e1 = file("e1.csv", "b,c\n1,0\n");
    EXPECT_EQ(exit_of("preprocess \"" + e0 + "\" \"" + e1 + "\" -o \"" + path("empty") + "\""), 0);
    EXPECT_EQ(exit_of("sample \"" + path("empty") + "\" --q 1"), 3);
    EXPECT_EQ(exit_of("exact \"" + csvs[0] + "\" \"" + csvs[1] + "\" --max-rows 1"), 4);
}

}  // namespace
}  // namespace welltris
