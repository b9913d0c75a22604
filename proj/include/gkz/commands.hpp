#pragma once

// Subcommands behind the command-line tool. Each returns the output
// document and the process exit status, so they can be tested in-process.

#include "gkz/integrator.hpp"
#include "gkz/oracle.hpp"
#include "gkz/report.hpp"
#include "gkz/verifier.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace gkz {

struct RunConfig {
    double quad_tol = 1e-9;
    double fd_h_rel = 1e-5;
    double tol_verify = 1e-6;
    double tol_fd_pair = 1e-3;
    int extra_lattice_samples = 25;
    int lattice_l1_bound = 6;
    std::uint64_t seed = 0;
    std::string contour = "auto";
    std::size_t threads = 0;  // 0 = hardware concurrency
    bool debug_alpha_zero = false;
    bool timing = false;

    void validate() const {
        if (!(quad_tol > 0) || !(fd_h_rel > 0) || !(tol_verify > 0) || !(tol_fd_pair > 0))
            throw InputError("tolerances must be strictly positive");
        if (extra_lattice_samples < 0 || lattice_l1_bound < 0) throw InputError("bounds must be nonnegative");
    }
};

/// "auto" or per-variable ray pairs "minus,plus;minus,plus". Angles are in
/// radians and accept pi multiples such as "3pi/4", "-pi/4" or "0.5*pi".
inline ContourPolicy parse_contour_policy(const std::string& text) {
    if (text == "auto" || text.empty()) return ContourPolicy::auto_search();
    auto parse_angle = [](std::string tok) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char ch) { return std::isspace(ch); }),
                  tok.end());
        if (tok.empty()) throw InputError("empty contour angle");
        const auto pi_pos = tok.find("pi");
        if (pi_pos == std::string::npos) {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw InputError("bad contour angle '" + tok + "'");
            return v;
        }
        std::string factor = tok.substr(0, pi_pos);
        std::string rest = tok.substr(pi_pos + 2);
        if (!factor.empty() && factor.back() == '*') factor.pop_back();
        double f = 1;
        if (factor == "-")
            f = -1;
        else if (!factor.empty() && factor != "+")
            f = std::stod(factor);
        double den = 1;
        if (!rest.empty()) {
            if (rest.front() != '/') throw InputError("bad contour angle '" + tok + "'");
            den = std::stod(rest.substr(1));
        }
        return f * std::numbers::pi / den;
    };
    std::vector<RayPair> pairs;
    std::size_t start = 0;
    try {
        while (start <= text.size()) {
            const auto end = std::min(text.find(';', start), text.size());
            const std::string item = text.substr(start, end - start);
            const auto comma = item.find(',');
            if (comma == std::string::npos) throw InputError("contour pair '" + item + "' needs two angles");
            pairs.push_back({parse_angle(item.substr(0, comma)), parse_angle(item.substr(comma + 1))});
            start = end + 1;
        }
    } catch (const std::logic_error&) {
        throw InputError("malformed contour specification '" + text + "'");
    }
    return ContourPolicy::fixed(std::move(pairs));
}

inline VerifyConfig to_verify_config(const RunConfig& rc) {
    rc.validate();
    VerifyConfig c;
    c.quad_tol = rc.quad_tol;
    c.fd_quad_tol = std::min(rc.quad_tol, 1e-11);
    c.fd_h_rel = rc.fd_h_rel;
    c.tol_verify = rc.tol_verify;
    c.tol_fd_pair = rc.tol_fd_pair;
    c.extra_lattice_samples = rc.extra_lattice_samples;
    c.lattice_l1_bound = rc.lattice_l1_bound;
    c.seed = rc.seed;
    c.contour_policy = parse_contour_policy(rc.contour);
    c.threads = rc.threads;
    if (rc.debug_alpha_zero) c.alpha_override = 0;
    return c;
}

struct CommandResult {
    nlohmann::json document;
    int exit_code = 0;
};

/// Pretty-printed document followed by a newline.
inline std::string render(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

namespace detail {

inline CommandResult input_error(const std::string& message) {
    return {{{"error", {{"kind", "input"}, {"message", message}}}}, 3};
}

inline CommandResult contour_error(const std::string& message) {
    return {{{"error", {{"kind", "contour"}, {"message", message}}}}, 2};
}

inline Polynomial load_spanning(const std::string& text) {
    Polynomial p = parse_polynomial(text);
    if (!check_spanning(p.support)) throw InputError("exponents do not span the ambient space");
    return p;
}

}  // namespace detail

inline CommandResult cmd_system(const std::string& input) {
    try {
        return {doc::system(detail::load_spanning(input)), 0};
    } catch (const InputError& e) {
        return detail::input_error(e.what());
    }
}

inline CommandResult cmd_integrate(const std::string& input, const RunConfig& rc) {
    try {
        const VerifyConfig cfg = to_verify_config(rc);
        const Polynomial p = detail::load_spanning(input);
        const Contour c = admissible_contour(p, cfg.contour_policy);
        const auto z = integrate_Z(p, c, cfg.quad_tol);
        return {{{"contour", doc::contour(c)}, {"Z", doc::integral(z)}}, z.converged ? 0 : 2};
    } catch (const InputError& e) {
        return detail::input_error(e.what());
    } catch (const ContourError& e) {
        return detail::contour_error(e.what());
    }
}

/// Moments for the requested indices (default: Z and every k in K).
inline CommandResult cmd_moments(const std::string& input, const RunConfig& rc,
                                 const std::vector<std::vector<int>>& indices = {}) {
    try {
        const VerifyConfig cfg = to_verify_config(rc);
        const Polynomial p = detail::load_spanning(input);
        const Contour c = admissible_contour(p, cfg.contour_policy);
        std::vector<MultiIndex> js;
        for (const auto& e : indices) {
            if (e.size() != p.support.dimension()) throw InputError("moment index has wrong length");
            for (int x : e)
                if (x < 0) throw InputError("moment index entries must be nonnegative");
            js.emplace_back(e);
        }
        if (indices.empty())
            for (const auto& k : p.support.exponents()) js.push_back(k);
        const auto table = moment_table(p, c, js, QuadratureOptions{cfg.quad_tol}, cfg.threads);
        nlohmann::json moments = nlohmann::json::array();
        bool converged = true;
        for (const auto& [j, r] : table.entries) {
            auto entry = doc::integral(r);
            entry["j"] = j.entries();
            moments.push_back(std::move(entry));
            converged = converged && r.converged;
        }
        return {{{"contour", doc::contour(c)}, {"moments", std::move(moments)}}, converged ? 0 : 2};
    } catch (const InputError& e) {
        return detail::input_error(e.what());
    } catch (const ContourError& e) {
        return detail::contour_error(e.what());
    }
}

inline CommandResult cmd_verify(const std::string& input, const RunConfig& rc) {
    try {
        const VerifyConfig cfg = to_verify_config(rc);
        const Polynomial p = parse_polynomial(input);
        const auto report = verify_all(p, cfg);
        return {doc::report(report, rc.timing), exit_code(report.verdict)};
    } catch (const InputError& e) {
        return detail::input_error(e.what());
    }
}

// ---------------------------------------------------------------------------

namespace detail {

struct SelftestCase {
    std::string name;
    Polynomial polynomial;
    MultiIndex index;
    Complex expected;
};

inline Polynomial gaussian_polynomial(const oracle::GaussianForm& form) {
    const std::size_t n = form.dimension();
    std::vector<std::pair<ExponentIndex, Complex>> terms;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            std::vector<int> k(n, 0);
            ++k[i];
            ++k[j];
            const Complex a = form.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            const Complex c = i == j ? a : 2.0 * a;
            if (i == j || c != Complex{}) terms.emplace_back(MultiIndex(k), c);
        }
    return Polynomial::from_terms(n, std::move(terms));
}

inline std::vector<SelftestCase> selftest_cases() {
    using oracle::GaussianForm;
    std::vector<SelftestCase> cases;
    auto gauss = [&](std::string name, const GaussianForm& f, MultiIndex j) {
        cases.push_back({std::move(name), gaussian_polynomial(f), j, oracle::gaussian_moment(f, j)});
    };
    gauss("gaussian n=1 a=-1", GaussianForm::diagonal({-1.0}), MultiIndex{0});
    gauss("gaussian n=1 a=-2", GaussianForm::diagonal({-2.0}), MultiIndex{0});
    gauss("gaussian n=1 a=-1+0.5i", GaussianForm::diagonal({Complex{-1.0, 0.5}}), MultiIndex{0});
    gauss("gaussian n=2 diag", GaussianForm::diagonal({-1.0, -1.0}), MultiIndex{0, 0});
    gauss("gaussian n=3 diag", GaussianForm::diagonal({-1.0, -1.5, -0.7}), MultiIndex{0, 0, 0});
    oracle::ComplexMatrix cross(2, 2);
    cross << -1.0, 0.15, 0.15, -1.0;
    gauss("gaussian n=2 cross term", GaussianForm(cross), MultiIndex{0, 0});
    gauss("gaussian moment j=(2)", GaussianForm::diagonal({-1.0}), MultiIndex{2});
    gauss("gaussian moment j=(1)", GaussianForm::diagonal({-1.0}), MultiIndex{1});
    gauss("gaussian moment j=(2,2)", GaussianForm::diagonal({-1.0, -1.0}), MultiIndex{2, 2});
    gauss("gaussian cross-term moment j=(1,1)", GaussianForm(cross), MultiIndex{1, 1});
    for (int m = 1; m <= 3; ++m) {
        Polynomial p = Polynomial::from_terms(1, {{MultiIndex{2 * m}, Complex{-1.0, 0.0}}});
        cases.push_back({"monomial m=" + std::to_string(m), p, MultiIndex{0}, oracle::monomial_Z(m, 1.0)});
    }
    cases.push_back({"monomial m=2 moment x^4", Polynomial::from_terms(1, {{MultiIndex{4}, Complex{-1.0, 0.0}}}),
                     MultiIndex{4}, oracle::monomial_moment(2, 1.0, 4)});
    cases.push_back({"monomial m=2 a=1-0.5i",
                     Polynomial::from_terms(1, {{MultiIndex{4}, Complex{-1.0, 0.5}}}), MultiIndex{0},
                     oracle::monomial_Z(2, Complex{1.0, -0.5})});
    return cases;
}

}  // namespace detail

/// Oracle-vs-integrator suite. Each case passes when the relative error is
/// within 10 * quad_tol (absolute against the L1 mass when the exact value is 0).
inline CommandResult cmd_selftest(const RunConfig& rc) {
    try {
        const VerifyConfig cfg = to_verify_config(rc);
        const auto cases = detail::selftest_cases();
        std::vector<IntegralResult> results(cases.size());
        parallel_for(cases.size(), cfg.threads, [&](std::size_t i) {
            const auto& c = cases[i];
            const Contour contour = admissible_contour(c.polynomial, ContourPolicy::auto_search());
            results[i] = moment(c.index, c.polynomial, contour, cfg.quad_tol);
        });
        const double tol = 10 * cfg.quad_tol;
        nlohmann::json checks = nlohmann::json::array();
        bool all = true;
        for (std::size_t i = 0; i < cases.size(); ++i) {
            const auto& c = cases[i];
            const auto& r = results[i];
            const double scale = std::abs(c.expected) > 0 ? std::abs(c.expected) : r.l1;
            const double rel = std::abs(r.value - c.expected) / scale;
            const bool pass = rel <= tol;
            all = all && pass;
            checks.push_back({{"name", c.name},
                              {"j", c.index.entries()},
                              {"value", doc::integral(r)},
                              {"expected", doc::complex(c.expected)},
                              {"relative_error", rel},
                              {"tolerance", tol},
                              {"pass", pass}});
        }
        return {{{"checks", std::move(checks)}, {"verdict", all ? "pass" : "fail"}}, all ? 0 : 1};
    } catch (const InputError& e) {
        return detail::input_error(e.what());
    }
}

}  // namespace gkz
