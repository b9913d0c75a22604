#include "gkz/commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace gkz;
using nlohmann::json;

namespace {

std::string sample(const std::string& name) {
    std::ifstream in(std::filesystem::path(GKZ_SAMPLES_DIR) / name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunConfig quick() {
    RunConfig rc;
    rc.extra_lattice_samples = 3;
    rc.threads = 1;
    return rc;
}

}  // namespace

TEST(CmdSystem, Gaussian) {
    auto r = cmd_system(sample("gaussian_1d.json"));
    EXPECT_EQ(r.exit_code, 0);
    const auto& d = r.document;
    EXPECT_EQ(d["lattice_basis"], json::array());
    EXPECT_EQ(d["exponent_matrix"], json::parse("[[2]]"));
    EXPECT_EQ(d["euler_operators"][0]["weights"]["(2)"], 2);
    EXPECT_EQ(d["euler_operators"][0]["rhs"], -1);
    EXPECT_EQ(d["alpha"], json::parse("[-1]"));
}

TEST(CmdSystem, CrossTerm) {
    auto d = cmd_system(sample("gaussian_2d_cross.json")).document;
    EXPECT_EQ(d["lattice_basis"], json::parse("[[1,-2,1]]"));
    const auto& pair = d["toric_pairs_for_basis"][0];
    EXPECT_EQ(pair["lhs"], json::parse("[[2,0],[0,2]]"));
    EXPECT_EQ(pair["rhs"], json::parse("[[1,1],[1,1]]"));
    EXPECT_EQ(pair["moment_index"], json::parse("[2,2]"));
    EXPECT_EQ(d["euler_operators"][1]["weights"]["(1,1)"], 1);
}

TEST(CmdSystem, Errors) {
    auto r = cmd_system(sample("non_spanning_2d.json"));
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_EQ(r.document["error"]["kind"], "input");
    EXPECT_EQ(cmd_system("{}").exit_code, 3);
}

TEST(CmdIntegrate, Examples) {
    auto r = cmd_integrate(sample("gaussian_1d.json"), quick());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NEAR(r.document["Z"]["re"].get<double>(), std::sqrt(std::numbers::pi), 1e-8);
    EXPECT_EQ(r.document["contour"]["kind"], "real_axes");

    auto rot = cmd_integrate(sample("pure_quartic_1d.json"), quick());
    EXPECT_EQ(rot.exit_code, 0);

    auto cubic = cmd_integrate(sample("cubic_1d.json"), quick());
    EXPECT_EQ(cubic.exit_code, 2);
    EXPECT_EQ(cubic.document["error"]["kind"], "contour");

    RunConfig explicit_rays = quick();
    explicit_rays.contour = "pi,pi/3";
    EXPECT_EQ(cmd_integrate(sample("cubic_1d.json"), explicit_rays).exit_code, 0);

    RunConfig bad = quick();
    bad.quad_tol = -1;
    EXPECT_EQ(cmd_integrate(sample("gaussian_1d.json"), bad).exit_code, 3);
}

TEST(CmdMoments, DefaultsAndExplicitIndices) {
    auto r = cmd_moments(sample("quartic_1d.json"), quick());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.document["moments"].size(), 3u);  // Z, M_2, M_4
    auto s = cmd_moments(sample("gaussian_1d.json"), quick(), {{4}});
    ASSERT_EQ(s.exit_code, 0);
    EXPECT_NEAR(s.document["moments"][1]["re"].get<double>(), 3 * std::sqrt(std::numbers::pi) / 4, 1e-8);
    EXPECT_EQ(cmd_moments(sample("gaussian_1d.json"), quick(), {{1, 2}}).exit_code, 3);
}

TEST(CmdVerify, Verdicts) {
    EXPECT_EQ(cmd_verify(sample("quartic_1d.json"), quick()).exit_code, 0);
    EXPECT_EQ(cmd_verify(sample("cubic_1d.json"), quick()).exit_code, 2);
    EXPECT_EQ(cmd_verify(sample("non_spanning_2d.json"), quick()).exit_code, 3);
    EXPECT_EQ(cmd_verify("[1,2]", quick()).exit_code, 3);
    RunConfig mutated = quick();
    mutated.debug_alpha_zero = true;
    auto r = cmd_verify(sample("gaussian_1d.json"), mutated);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(r.document["verdict"], "fail");
}

TEST(CmdVerify, TimingOnlyWhenRequested) {
    RunConfig rc = quick();
    EXPECT_FALSE(cmd_verify(sample("gaussian_1d.json"), rc).document.contains("wall_seconds"));
    rc.timing = true;
    EXPECT_TRUE(cmd_verify(sample("gaussian_1d.json"), rc).document.contains("wall_seconds"));
}

TEST(CmdVerify, ThreadCountDoesNotChangeOutput) {
    RunConfig one = quick(), many = quick();
    many.threads = 8;
    for (const char* name : {"quartic_1d.json", "gaussian_2d_cross.json"}) {
        EXPECT_EQ(render(cmd_verify(sample(name), one).document), render(cmd_verify(sample(name), many).document))
            << name;
    }
}

TEST(CmdSelftest, PassesAtDefaultAndLooseTolerance) {
    auto r = cmd_selftest(quick());
    EXPECT_EQ(r.exit_code, 0) << render(r.document);
    RunConfig loose = quick();
    loose.quad_tol = 1e-4;
    EXPECT_EQ(cmd_selftest(loose).exit_code, 0);
}
