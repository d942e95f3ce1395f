#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spectral_gamma/cli.hpp"

using namespace sgamma;

namespace {

const std::string kData = SPECTRAL_GAMMA_DATA_DIR;

struct Run {
    int code;
    std::string out, err;
    Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "spectral-gamma");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::path(::testing::TempDir()) / ("sgamma_" + name);
    std::ofstream(p) << content;
    return p.string();
}

}  // namespace

TEST(Io, ElementRoundTrip) {
    auto a = element_from_json(io::load_json(kData + "/a.json"));
    EXPECT_EQ(a.group().spec().to_string(), "free:2");
    EXPECT_EQ(a.size(), 3u);
    auto b = element_from_json(element_to_json(a));
    EXPECT_TRUE(a == b);
    auto z2 = make_group(GroupSpec::lattice(2));
    auto c = element_from_json(Json::parse(R"({"terms": [{"word": [1, -2], "coeff": [0.5, 1]}]})"), z2);
    EXPECT_EQ(c.coeff(z2->parse("(1,-2)")), Complex(0.5, 1));
}

TEST(Io, ParseErrorsNameTheField) {
    auto expect_field = [](const char* text, const char* field) {
        try {
            element_from_json(Json::parse(text));
            ADD_FAILURE() << "no error for " << text;
        } catch (const ParseError& e) {
            EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
        }
    };
    expect_field(R"({"terms": []})", "group");
    expect_field(R"({"group": "free:2"})", "terms");
    expect_field(R"({"group": "free:2", "terms": [{"re": 1}]})", "terms[0].word");
    expect_field(R"({"group": "free:2", "terms": [{"word": "x", "re": "one"}]})", "terms[0]");
    expect_field(R"({"group": "free:2", "terms": [{"word": "x"}, {"word": "q"}]})", "terms[1].word");
    expect_field(R"({"group": {"kind": "free"}, "terms": []})", "group.rank");
    expect_field(R"({"group": {"kind": "banana"}, "terms": []})", "group.kind");
    EXPECT_THROW(io::parse_json("{not json"), ParseError);
    EXPECT_THROW(io::load_json("/nonexistent/file.json"), Error);
}

TEST(Io, GroupOverrideMustAgree) {
    auto j = io::load_json(kData + "/a.json");
    EXPECT_THROW(element_from_json(j, make_group(GroupSpec::lattice(2))), ParseError);
    EXPECT_NO_THROW(element_from_json(j, make_group(GroupSpec::free(2))));
}

TEST(Io, MatrixAndEstimateRoundTrip) {
    auto m = matrix_from_json(io::load_json(kData + "/m_nondiag.json"));
    EXPECT_EQ(m.rows(), 2);
    EXPECT_TRUE(matrix_from_json(matrix_to_json(m)).isApprox(m));
    EXPECT_THROW(matrix_from_json(Json::parse("[[1, 2], [3]]")), ParseError);
    SpectralEstimate e;
    e.value = e.upper = 2;
    e.lower = 1.5;
    e.n_max = 64;
    e.method = "x";
    e.trace = {{1, 3.0}, {2, 2.5}};
    auto back = estimate_from_json(estimate_to_json(e));
    EXPECT_EQ(back.lower, 1.5);
    EXPECT_EQ(back.trace.size(), 2u);
    EXPECT_EQ(back.n_max, 64u);
}

TEST(Cli, RadiusEnvelope) {
    auto r = run({"radius", "--element", kData + "/x_plus_xinv.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    EXPECT_EQ(j["tool"], kToolName);
    EXPECT_EQ(j["version"], kVersion);
    EXPECT_EQ(j["command"], "radius");
    EXPECT_EQ(j["status"], "ok");
    EXPECT_DOUBLE_EQ(j["result"]["r_l1"]["upper"].get<double>(), 2.0);
    EXPECT_EQ(j["parameters"]["n_max"], 1024);
}

TEST(Cli, Sigma1ViolationOnFreeSemigroupElement) {
    auto r = run({"sigma1", "--element", kData + "/a.json", "--n-max", "256"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    EXPECT_EQ(j["result"]["verdict"], "violation-witness");
    EXPECT_GE(j["result"]["margin"].get<double>(), 0.7);
}

TEST(Cli, NormOfBaseElementNearSqrtFive) {
    auto r = run({"norm", "--element", kData + "/a_base.json", "--n-max", "256"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json()["result"]["opnorm"];
    EXPECT_LE(j["lower"].get<double>(), std::sqrt(5.0) + 1e-9);
    EXPECT_GE(j["upper"].get<double>(), std::sqrt(5.0) - 1e-9);
}

TEST(Cli, KestenCalcKcountRanksWeights) {
    auto k = run({"kesten", "--group", "lattice:2", "--n-max", "256"});
    ASSERT_EQ(k.code, 0) << k.err;
    EXPECT_TRUE(k.json()["result"]["amenable_consistent"].get<bool>());

    auto c = run({"calc", "--matrix", kData + "/m.json", "--function", "chi"});
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_NE(c.out.find("\"converged\""), std::string::npos);

    auto kc = run({"kcount", "--matrix", kData + "/m.json", "--region", kData + "/omega0.json"});
    ASSERT_EQ(kc.code, 0) << kc.err;
    EXPECT_EQ(kc.json()["result"]["counts"], Json::parse("[2]"));

    auto rk = run({"ranks", "--space", "sphere:2", "--k", "0..2"});
    ASSERT_EQ(rk.code, 0) << rk.err;
    EXPECT_NE(rk.out.find("sphere:2,0,1,exact-formula"), std::string::npos) << rk.out;

    auto w = run({"weights", "--group", "lattice:2", "--n-max", "64", "--format", "csv"});
    ASSERT_EQ(w.code, 0) << w.err;
    EXPECT_EQ(w.out.rfind("n,value", 0), 0u);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"radius", "--element", "/nonexistent.json"}).code, 2);
    EXPECT_EQ(run({"radius", "--element", kData + "/a.json", "--n-max", "100"}).code, 2);
    EXPECT_EQ(run({"radius", "--element", kData + "/a.json", "--tol", "-1"}).code, 2);
    EXPECT_EQ(run({"radius", "--element", kData + "/a.json", "--group", "lattice:2"}).code, 2);
    EXPECT_EQ(run({"radius", "--element", kData + "/a.json", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"radius", "--element", kData + "/a.json", "--format", "csv"}).code, 2);
    EXPECT_EQ(run({"kesten", "--group", "free:0"}).code, 2);
    EXPECT_EQ(run({"ranks", "--space", "ball:3"}).code, 2);
    EXPECT_EQ(run({"calc", "--matrix", kData + "/m.json", "--nodes", "2"}).code, 2);
    auto bad = run({"radius", "--element", temp_file("bad.json", R"({"group": "free:2", "terms": [{"word": 7}]})")});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("terms[0].word"), std::string::npos) << bad.err;
    // resource cap on the support of products
    auto big = temp_file("big.json", R"({"group": "free:2", "terms": [
        {"word": "x y", "re": 1}, {"word": "y x", "re": -1}, {"word": "x^-1", "re": 0.5}]})");
    EXPECT_EQ(run({"radius", "--element", big, "--cap-support", "10"}).code, 3);
    auto heis = temp_file("heis.json", R"({"group": "heisenberg", "terms": [{"word": "X^3 Y^3", "re": 1}]})");
    EXPECT_EQ(run({"weights", "--element", heis, "--cap-ball", "10", "--n-max", "8"}).code, 3);
}

TEST(Cli, StrictInconclusive) {
    // at n = 2 the trace-moment lower bound is far below the radius
    auto f = temp_file("hx.json", R"({"group": "heisenberg", "terms": [{"word": "X", "re": 1}, {"word": "Y", "re": -1}]})");
    auto loose = run({"sigma1", "--element", f, "--n-max", "2"});
    ASSERT_EQ(loose.code, 0) << loose.err;
    EXPECT_EQ(loose.json()["status"], "inconclusive");
    auto strict = run({"sigma1", "--element", f, "--n-max", "2", "--strict"});
    EXPECT_EQ(strict.code, 4);
    EXPECT_FALSE(strict.out.empty());
    EXPECT_EQ(run({"sigma1", "--element", kData + "/a.json", "--n-max", "64", "--strict"}).code, 0);
}

TEST(Cli, DeterministicAcrossThreadCounts) {
    std::vector<std::string> args{"weights", "--group", "lattice:1", "--norm-a", "l2", "--norm-b", "l1",
                                  "--samples", "300", "--seed", "11"};
    setenv("SPECTRAL_GAMMA_THREADS", "1", 1);
    auto a = run(args);
    setenv("SPECTRAL_GAMMA_THREADS", "4", 1);
    auto b = run(args);
    unsetenv("SPECTRAL_GAMMA_THREADS");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    auto c = run({"weights", "--group", "lattice:1", "--norm-a", "l2", "--norm-b", "l1", "--samples", "300",
                  "--seed", "12"});
    EXPECT_NE(a.out, c.out);
}

TEST(Cli, ReportMergesAndCrossReferences) {
    auto radius = run({"radius", "--element", kData + "/a.json", "--n-max", "64"});
    auto sigma = run({"sigma1", "--element", kData + "/a.json", "--n-max", "64"});
    auto ranks = run({"ranks", "--space", "torus:2", "--format", "json"});
    ASSERT_EQ(radius.code, 0);
    ASSERT_EQ(sigma.code, 0);
    ASSERT_EQ(ranks.code, 0);
    auto f1 = temp_file("r1.json", radius.out), f2 = temp_file("r2.json", sigma.out), f3 = temp_file("r3.json", ranks.out);
    auto r = run({"report", f1, f2, f3});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json()["result"];
    EXPECT_EQ(j["inputs"].size(), 3u);
    EXPECT_TRUE(j["sections"].contains("radius"));
    EXPECT_TRUE(j["sections"].contains("ranks"));
    ASSERT_EQ(j["cross_reference"].size(), 1u);
    EXPECT_EQ(j["cross_reference"][0]["verdict"], "violation-witness");
    EXPECT_TRUE(j["cross_reference"][0]["radius_intervals_overlap"].get<bool>());

    // input order does not matter
    auto r2 = run({"report", f3, f1, f2});
    EXPECT_EQ(r.out, r2.out);

    auto other_seed = temp_file("r4.json", run({"ranks", "--space", "torus:2", "--format", "json", "--seed", "5"}).out);
    EXPECT_EQ(run({"report", f1, other_seed}).code, 2);
    auto j1 = Json::parse(radius.out);
    j1["version"] = "0.0.1";
    EXPECT_EQ(run({"report", temp_file("old.json", j1.dump())}).code, 2);
    EXPECT_EQ(run({"report", temp_file("nested.json", r.out)}).code, 2);
    EXPECT_EQ(run({"report", temp_file("junk.json", "[1, 2]")}).code, 2);

    auto empty = run({"report"});
    ASSERT_EQ(empty.code, 0) << empty.err;
    EXPECT_TRUE(empty.json()["result"]["inputs"].empty());
}
