#include "gkz/report.hpp"
#include "gkz/verifier.hpp"

#include <gtest/gtest.h>

#include <deque>
#include <numbers>

using namespace gkz;

namespace {

Polynomial cross(double b) {
    return Polynomial::from_terms(2, {{MultiIndex{2, 0}, -1.0}, {MultiIndex{1, 1}, b}, {MultiIndex{0, 2}, -1.0}});
}

VerifyConfig fast_config() {
    VerifyConfig cfg;
    cfg.extra_lattice_samples = 3;
    return cfg;
}

// Finite differences on demand; the deque keeps returned references valid.
struct FdOnDemand {
    const Polynomial& p;
    Contour contour;
    double quad_tol;
    std::deque<detail::FdOutcome> store;

    const detail::FdOutcome& operator()(const DerivativeMultiset& d) {
        FdOptions opt;
        opt.quadrature.tol = quad_tol;
        detail::FdOutcome out;
        try {
            out.result = fd_derivative(d, p, contour, opt);
        } catch (const ContourError& e) {
            out.error = e.what();
        }
        store.push_back(std::move(out));
        return store.back();
    }
};

}  // namespace

TEST(VerdictLogic, CombineAndExitCodes) {
    EXPECT_EQ(combine(Verdict::Pass, Verdict::Pass), Verdict::Pass);
    EXPECT_EQ(combine(Verdict::Pass, Verdict::Inconclusive), Verdict::Inconclusive);
    EXPECT_EQ(combine(Verdict::Inconclusive, Verdict::Fail), Verdict::Fail);
    EXPECT_EQ(exit_code(Verdict::Pass), 0);
    EXPECT_EQ(exit_code(Verdict::Fail), 1);
    EXPECT_EQ(exit_code(Verdict::Inconclusive), 2);
    EXPECT_EQ(exit_code(Verdict::InputError), 3);
    EXPECT_STREQ(to_string(Verdict::Inconclusive), "inconclusive");
}

TEST(VerifyAll, Gaussian) {
    auto p = Polynomial::from_terms(1, {{MultiIndex{2}, -1.0}});
    auto r = verify_all(p, fast_config());
    EXPECT_EQ(r.verdict, Verdict::Pass);
    EXPECT_TRUE(r.basis.empty());
    EXPECT_TRUE(r.toric.empty());
    ASSERT_EQ(r.euler.size(), 1u);
    EXPECT_EQ(r.euler[0].verdict, Verdict::Pass);
    EXPECT_LT(r.euler[0].relative, 1e-12);
    ASSERT_TRUE(r.z.has_value());
    EXPECT_NEAR(r.z->value.real(), std::sqrt(std::numbers::pi), 1e-9);
}

TEST(VerifyAll, Quartic) {
    auto p = Polynomial::from_terms(1, {{MultiIndex{2}, 1.0}, {MultiIndex{4}, -1.0}});
    auto r = verify_all(p, fast_config());
    EXPECT_EQ(r.verdict, Verdict::Pass);
    ASSERT_EQ(r.basis.rank(), 1u);
    EXPECT_EQ(r.basis.vectors[0], (LatticeVector{2, -1}));
    ASSERT_FALSE(r.toric.empty());
    EXPECT_EQ(r.toric[0].source, "basis");
    for (const auto& t : r.toric) {
        EXPECT_TRUE(t.in_lattice);
        EXPECT_TRUE(t.index_equal);
        EXPECT_NE(t.verdict, Verdict::Fail);
    }
    EXPECT_EQ(r.toric[0].verdict, Verdict::Pass);
}

TEST(VerifyAll, CrossTermGaussian) {
    auto r = verify_all(cross(0.3), fast_config());
    EXPECT_EQ(r.verdict, Verdict::Pass);
    ASSERT_EQ(r.basis.rank(), 1u);
    EXPECT_EQ(r.basis.vectors[0], (LatticeVector{1, -2, 1}));
    EXPECT_EQ(r.euler.size(), 2u);
    EXPECT_FALSE(r.bridge.empty());
    for (const auto& b : r.bridge) EXPECT_EQ(b.verdict, Verdict::Pass) << b.exponent.to_string();
}

TEST(VerifyAll, CubicIsInconclusive) {
    auto p = Polynomial::from_terms(1, {{MultiIndex{3}, 1.0}});
    auto r = verify_all(p, fast_config());
    EXPECT_EQ(r.verdict, Verdict::Inconclusive);
    EXPECT_FALSE(r.contour.has_value());
    ASSERT_FALSE(r.errors.empty());
}

TEST(VerifyAll, NonSpanningIsInputError) {
    auto p = Polynomial::from_terms(2, {{MultiIndex{1, 1}, -1.0}});
    EXPECT_EQ(verify_all(p, fast_config()).verdict, Verdict::InputError);
}

TEST(VerifyAll, AlphaMutationIsCaught) {
    auto cfg = fast_config();
    cfg.alpha_override = 0;
    auto r = verify_all(Polynomial::from_terms(1, {{MultiIndex{2}, -1.0}}), cfg);
    EXPECT_EQ(r.verdict, Verdict::Fail);
    ASSERT_EQ(r.euler.size(), 1u);
    EXPECT_EQ(r.euler[0].verdict, Verdict::Fail);
    EXPECT_NEAR(std::abs(r.euler[0].residual), std::sqrt(std::numbers::pi), 1e-8);
}

TEST(VerifyAll, DeterministicAcrossRunsAndThreads) {
    auto p = Polynomial::from_terms(1, {{MultiIndex{2}, 1.0}, {MultiIndex{4}, -1.0}});
    auto cfg = fast_config();
    const auto a = doc::report(verify_all(p, cfg)).dump();
    const auto b = doc::report(verify_all(p, cfg)).dump();
    cfg.threads = 4;
    const auto c = doc::report(verify_all(p, cfg)).dump();
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    EXPECT_EQ(a.find("wall_seconds"), std::string::npos);
}

TEST(VerifyToric, NonKernelVectorFails) {
    auto p = cross(0.0);
    auto basis = kernel_basis(p.support);
    auto moments = moment_table(p, Contour::real_axes(2), {MultiIndex{2, 2}}, {}, 1);
    FdOnDemand fd{p, Contour::real_axes(2), 1e-11, {}};
    auto bad = verify_toric(p, basis, {1, -1, 0}, moments, fd, VerifyConfig{});
    EXPECT_EQ(bad.verdict, Verdict::Fail);
    EXPECT_FALSE(bad.in_lattice);
    EXPECT_FALSE(bad.index_equal);

    auto good = verify_toric(p, basis, {1, -2, 1}, moments, fd, VerifyConfig{});
    EXPECT_EQ(good.verdict, Verdict::Pass);
    EXPECT_NEAR(good.fd_lhs.real(), std::numbers::pi / 4, 1e-3);
    EXPECT_NEAR(good.fd_rhs.real(), std::numbers::pi / 4, 1e-3);
    EXPECT_LE(good.fd_gap, 1e-3 * good.gap_scale);
}

TEST(VerifyToric, MembershipIsBasisIndependent) {
    auto p = cross(0.0);
    auto basis = kernel_basis(p.support);
    LatticeBasis flipped{basis.support_size, {{-1, 2, -1}}};
    auto moments = moment_table(p, Contour::real_axes(2), {MultiIndex{4, 4}}, {}, 1);
    FdOnDemand fd{p, Contour::real_axes(2), 1e-11, {}};
    auto a = verify_toric(p, basis, {2, -4, 2}, moments, fd, VerifyConfig{});
    auto b = verify_toric(p, flipped, {2, -4, 2}, moments, fd, VerifyConfig{});
    EXPECT_TRUE(a.in_lattice);
    EXPECT_EQ(a.in_lattice, b.in_lattice);
    EXPECT_TRUE(a.high_fd_order);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_NE(a.verdict, Verdict::Fail);
}

TEST(SampleLatticeVectors, BoundedAndDeterministic) {
    PolynomialSupport s(1, {MultiIndex{1}, MultiIndex{2}, MultiIndex{3}, MultiIndex{4}});
    auto basis = kernel_basis(s);
    auto a = sample_lattice_vectors(basis, 25, 6, 0);
    EXPECT_EQ(a, sample_lattice_vectors(basis, 25, 6, 0));
    EXPECT_EQ(a.size(), 25u);
    for (const auto& v : a) {
        EXPECT_LE(l1_norm(v), 6);
        EXPECT_TRUE(lattice_membership(basis, v));
    }
    EXPECT_TRUE(sample_lattice_vectors(kernel_basis(PolynomialSupport(1, {MultiIndex{2}})), 25, 6, 0).empty());
}
