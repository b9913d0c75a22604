// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// nonzero if any criterion fails.

#include "gkz/gkz.hpp"
#include "test_support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace gkz;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

std::vector<std::pair<std::string, std::string>> corpus() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : std::filesystem::directory_iterator(GKZ_SAMPLES_DIR)) {
        if (e.path().extension() != ".json") continue;
        std::ifstream in(e.path());
        std::ostringstream s;
        s << in.rdbuf();
        out.emplace_back(e.path().filename().string(), s.str());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// 1. Closed-form oracle agreement at quad_tol = 1e-9.
Outcome oracle_agreement() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(0.3, 3.0);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 1 + i % 3;
        std::vector<Complex> diag;
        for (std::size_t j = 0; j < n; ++j) diag.push_back(-d(rng));
        auto form = oracle::GaussianForm::diagonal(diag);
        auto p = detail::gaussian_polynomial(form);
        auto z = integrate_Z(p, admissible_contour(p, ContourPolicy::auto_search()), 1e-9);
        worst = std::max(worst, rel(z.value, oracle::gaussian_Z(form)));
    }
    for (int m = 1; m <= 3; ++m) {
        const double a = 0.5 + m;
        auto p = Polynomial::from_terms(1, {{MultiIndex{2 * m}, -a}});
        auto z = integrate_Z(p, admissible_contour(p, ContourPolicy::auto_search()), 1e-9);
        worst = std::max(worst, rel(z.value, oracle::monomial_Z(m, a)));
    }
    return {worst <= 1e-8, "20 Gaussians + 3 monomials, max rel err " + fmt("%.2e", worst) + " (tol 1e-8)"};
}

// 2. Euler residuals on random admissible polynomials, plus the alpha mutation.
Outcome euler_residuals() {
    std::mt19937_64 rng(2);
    VerifyConfig cfg;
    double worst = 0;
    int axes = 0;
    bool all_pass = true;
    for (int i = 0; i < 30; ++i) {
        auto p = test_oracle::random_admissible(rng, 1 + i % 2, 6, 3);
        auto contour = admissible_contour(p, ContourPolicy::auto_search());
        auto table = moment_table(p, contour, p.support.exponents(), {cfg.quad_tol}, 1);
        for (const auto& rec : verify_euler(p, table, cfg)) {
            ++axes;
            worst = std::max(worst, rec.relative);
            all_pass = all_pass && rec.verdict == Verdict::Pass && rec.relative <= 1e-6;
        }
    }
    auto gauss = Polynomial::from_terms(1, {{MultiIndex{2}, -1.0}});
    cfg.alpha_override = 0;
    auto table = moment_table(gauss, Contour::real_axes(1), gauss.support.exponents(), {cfg.quad_tol}, 1);
    const auto mutated = verify_euler(gauss, table, cfg).front();
    const double r = std::abs(mutated.residual);
    const double z = std::abs(table.at(MultiIndex{0}).value);
    const bool flip = mutated.verdict == Verdict::Fail && std::abs(r - z) <= 1e-8 * z && r > 1;
    return {all_pass && flip, std::to_string(axes) + " axes, max |r|/budget " + fmt("%.2e", worst) +
                                  " (tol 1e-6); alpha=0 gives |r| = " + fmt("%.6f", r) + (flip ? " -> fail" : "")};
}

// 3. Exact toric index equality on basis + 25 samples; non-kernel vectors fail.
Outcome toric_exact() {
    std::vector<Polynomial> polys;
    for (const auto& [name, text] : corpus()) {
        auto p = parse_polynomial(text);
        if (check_spanning(p.support)) polys.push_back(p);
    }
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) polys.push_back(test_oracle::random_admissible(rng, 1 + i % 3, 6, 4));
    int checked = 0, mutated = 0;
    bool ok = true;
    for (const auto& p : polys) {
        auto basis = kernel_basis(p.support);
        if (basis.empty()) continue;
        auto vs = basis.vectors;
        for (auto& v : sample_lattice_vectors(basis, 25, 6, 0)) vs.push_back(v);
        ok = ok && vs.size() == basis.rank() + 25;
        for (const auto& v : vs) {
            auto pair = toric_pair(p.support, basis, v);
            ok = ok && pair.lhs_index == pair.rhs_index;
            ++checked;
            // Bump one coordinate whose exponent is nonzero: leaves the kernel.
            auto w = v;
            for (std::size_t t = 0; t < w.size(); ++t)
                if (!p.support[t].is_zero()) {
                    ++w[t];
                    break;
                }
            const bool rejected = !lattice_membership(basis, w) && !unchecked_toric_pair(p.support, w).indices_equal();
            bool threw = false;
            try {
                toric_pair(p.support, basis, w);
            } catch (const std::invalid_argument&) {
                threw = true;
            }
            ok = ok && rejected && threw;
            ++mutated;
        }
    }
    return {ok && checked > 0, std::to_string(checked) + " lattice vectors equal-index, " + std::to_string(mutated) +
                                   " non-kernel replacements rejected"};
}

// 4. Finite-difference derivative vs moment at quad_tol 1e-11.
Outcome fd_bridge() {
    const Polynomial polys[] = {
        Polynomial::from_terms(1, {{MultiIndex{2}, 1.0}, {MultiIndex{4}, -1.0}}),
        Polynomial::from_terms(2, {{MultiIndex{2, 0}, -1.0}, {MultiIndex{1, 1}, 0.3}, {MultiIndex{0, 2}, -1.0}}),
    };
    FdOptions opt;
    opt.quadrature.tol = 1e-11;
    double worst = 0;
    int count = 0;
    for (const auto& p : polys) {
        auto c = admissible_contour(p, ContourPolicy::auto_search());
        for (const auto& k : p.support.exponents()) {
            auto fd = fd_derivative({{k, 1}}, p, c, opt);
            auto m = moment(k, p, c, 1e-11);
            worst = std::max(worst, rel(fd.value, m.value));
            ++count;
        }
    }
    return {worst <= 1e-4, std::to_string(count) + " derivatives, max rel gap " + fmt("%.2e", worst) + " (tol 1e-4)"};
}

// 5. Toric numerical check for v = (1,-2,1) at c = (-1, 0, -1).
Outcome toric_numeric() {
    auto p = Polynomial::from_terms(2, {{MultiIndex{2, 0}, -1.0}, {MultiIndex{1, 1}, 0.0}, {MultiIndex{0, 2}, -1.0}});
    auto basis = kernel_basis(p.support);
    auto pair = toric_pair(p.support, basis, {1, -2, 1});
    FdOptions opt;
    opt.quadrature.tol = 1e-11;
    auto c = Contour::real_axes(2);
    const Complex lhs = fd_derivative(pair.lhs_derivs, p, c, opt).value;
    const Complex rhs = fd_derivative(pair.rhs_derivs, p, c, opt).value;
    const double gap = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
    const double dl = std::abs(lhs - pi / 4), dr = std::abs(rhs - pi / 4);
    return {gap <= 1e-3 && dl <= 1e-3 && dr <= 1e-3,
            "lhs " + fmt("%.9f", lhs.real()) + ", rhs " + fmt("%.9f", rhs.real()) + ", pi/4 " + fmt("%.9f", pi / 4) +
                ", rel gap " + fmt("%.2e", gap)};
}

// 6. Z(c_k t^{|k|}) t^n = Z(c).
Outcome scaling() {
    std::mt19937_64 rng(6);
    const double tol = 1e-9;
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
        const std::size_t n = 1 + i % 2;
        auto p = test_oracle::random_admissible(rng, n, 6, 3);
        auto contour = admissible_contour(p, ContourPolicy::auto_search());
        const Complex z = integrate_Z(p, contour, tol).value;
        for (double t : {0.5, 2.0}) {
            std::vector<Complex> c;
            for (std::size_t k = 0; k < p.support.size(); ++k)
                c.push_back(p.coeffs[k] * std::pow(t, p.support[k].total_degree()));
            Polynomial q(p.support, CoefficientVector(c));
            const Complex zt = integrate_Z(q, contour, tol).value * std::pow(t, static_cast<double>(n));
            worst = std::max(worst, rel(zt, z));
        }
    }
    return {worst <= 2 * tol, "10 polynomials x t in {0.5, 2}, max rel err " + fmt("%.2e", worst) + " (tol 2e-9)"};
}

// 7. Lattice basis: kernel, rank and saturation against a rational oracle.
Outcome lattice_exactness() {
    std::mt19937_64 rng(7);
    int supports = 0;
    bool ok = true;
    while (supports < 50) {
        const std::size_t n = 1 + rng() % 3;
        auto ks = test_oracle::random_exponents(rng, n, 1 + rng() % 10, 8);
        PolynomialSupport s(n, ks);
        if (!check_spanning(s)) continue;
        ++supports;
        const auto m = s.exponent_matrix();
        auto basis = kernel_basis(s);
        ok = ok && basis.rank() == s.size() - n;
        for (const auto& b : basis.vectors) ok = ok && exact::multiply(m, b) == exact::IntVector(n, 0);
        ok = ok && test_oracle::maximal_minor_gcd(basis.vectors) == 1;
        for (const auto& w : test_oracle::oracle_kernel(m)) ok = ok && lattice_membership(basis, w);
    }
    return {ok, std::to_string(supports) + " spanning supports (|K| <= 10, n <= 3)"};
}

// 8. Byte-identical reports for threads 1 and 8.
Outcome determinism() {
    RunConfig one, eight;
    one.threads = 1;
    eight.threads = 8;
    int files = 0;
    std::string mismatch;
    for (const auto& [name, text] : corpus()) {
        ++files;
        if (render(cmd_verify(text, one).document) != render(cmd_verify(text, eight).document)) mismatch += " " + name;
    }
    return {mismatch.empty() && files > 0,
            std::to_string(files) + " corpus files" + (mismatch.empty() ? ", identical" : ", differ:" + mismatch)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"oracle agreement", oracle_agreement}, {"Euler residuals", euler_residuals},
        {"toric exact check", toric_exact},     {"fd bridge", fd_bridge},
        {"toric numeric check", toric_numeric}, {"scaling covariance", scaling},
        {"lattice exactness", lattice_exactness}, {"determinism", determinism},
    };
    int failures = 0, id = 0;
    for (const auto& [name, run] : criteria) {
        ++id;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
