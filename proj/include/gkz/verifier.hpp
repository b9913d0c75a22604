#pragma once

// End-to-end check that the numerically computed Z satisfies the toric and
// Euler equations attached to the support of S.

#include "gkz/contour.hpp"
#include "gkz/integrator.hpp"
#include "gkz/lattice.hpp"
#include "gkz/operators.hpp"
#include "gkz/parallel.hpp"
#include "gkz/support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace gkz {

enum class Verdict { Pass, Fail, Inconclusive, InputError };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::InputError: return "input_error";
    }
    return "?";
}

/// Exit status for a verdict: pass 0, fail 1, inconclusive 2, input error 3.
inline int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Pass: return 0;
        case Verdict::Fail: return 1;
        case Verdict::Inconclusive: return 2;
        case Verdict::InputError: return 3;
    }
    return 3;
}

/// Fail dominates inconclusive, which dominates pass.
inline Verdict combine(Verdict a, Verdict b) {
    auto rank = [](Verdict v) {
        switch (v) {
            case Verdict::Pass: return 0;
            case Verdict::Inconclusive: return 1;
            case Verdict::Fail: return 2;
            case Verdict::InputError: return 3;
        }
        return 3;
    };
    return rank(a) >= rank(b) ? a : b;
}

struct VerifyConfig {
    double quad_tol = 1e-9;
    double fd_h_rel = 1e-5;
    double fd_quad_tol = 1e-11;  // quadrature tolerance for finite-difference evaluations
    double tol_verify = 1e-6;
    double tol_fd = 1e-4;        // fd-vs-moment bridge, first derivatives
    double tol_fd_pair = 1e-3;
    double fd_floor = 1e-12;
    int extra_lattice_samples = 25;
    int lattice_l1_bound = 6;
    std::uint64_t seed = 0;
    ContourPolicy contour_policy = ContourPolicy::auto_search();
    std::size_t threads = 1;
    std::optional<int> alpha_override;  // replaces every <a, alpha>; mutation testing only
};

struct EulerRecord {
    std::size_t axis = 0;
    std::vector<int> weights;
    int rhs = -1;
    Complex residual{};
    double budget = 0;
    double relative = 0;
    double tolerance = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

struct ToricRecord {
    LatticeVector vector;
    std::string source;  // "basis" or "sample"
    bool in_lattice = false;
    ToricPair pair;
    bool index_equal = false;
    int lhs_order = 0;
    int rhs_order = 0;
    bool high_fd_order = false;
    Complex fd_lhs{};
    Complex fd_rhs{};
    double fd_gap = 0;
    double gap_scale = 0;
    Complex moment{};
    double bridge_lhs = 0;  // |fd_lhs - M| / scale
    double bridge_rhs = 0;
    double tolerance = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

struct BridgeRecord {
    ExponentIndex exponent;
    Complex fd{};
    Complex moment{};
    double scale = 0;
    double relative = 0;
    double tolerance = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

struct VerificationReport {
    std::optional<Polynomial> polynomial;
    bool spanning = false;
    bool has_constant_term = false;
    exact::IntMatrix exponent_matrix;
    LatticeBasis basis;
    std::optional<Contour> contour;
    double certificate_margin = 0;
    std::optional<IntegralResult> z;
    std::vector<EulerRecord> euler;
    std::vector<ToricRecord> toric;
    std::vector<BridgeRecord> bridge;
    int samples_requested = 0;
    int samples_obtained = 0;
    VerifyConfig config;
    std::size_t integrations = 0;
    std::size_t evaluations = 0;
    std::vector<std::string> errors;
    Verdict verdict = Verdict::Inconclusive;
    double wall_seconds = 0;
};

// ---------------------------------------------------------------------------

/// Lattice vectors with l1 norm <= l1_bound, drawn as combinations of the
/// basis with coefficients in [-2, 2]. Deterministic in the seed.
inline std::vector<LatticeVector> sample_lattice_vectors(const LatticeBasis& basis, int count, int l1_bound,
                                                         std::uint64_t seed) {
    std::vector<LatticeVector> out;
    if (basis.empty() || count <= 0) return out;
    std::mt19937_64 rng(seed);
    const int max_attempts = 400 * count;
    for (int attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count; ++attempt) {
        auto v = random_lattice_vector(basis, 2, rng());
        if (l1_norm(v) <= l1_bound) out.push_back(std::move(v));
    }
    return out;
}

namespace detail {

using FdKey = std::vector<std::pair<std::size_t, int>>;  // (term index, multiplicity)

inline FdKey fd_key(const PolynomialSupport& s, const DerivativeMultiset& d) {
    FdKey key;
    for (const auto& t : d) key.emplace_back(*s.index_of(t.exponent), t.multiplicity);
    std::sort(key.begin(), key.end());
    return key;
}

struct FdOutcome {
    std::optional<FdResult> result;
    std::string error;
};

}  // namespace detail

/// Euler residuals r_i = sum_k k_i c_k M_k + Z for every axis.
inline std::vector<EulerRecord> verify_euler(const Polynomial& p, const MomentTable& moments,
                                             const VerifyConfig& cfg) {
    std::vector<EulerRecord> out;
    for (std::size_t axis = 1; axis <= p.support.dimension(); ++axis) {
        EulerOperator op = euler_operator(p.support, axis);
        if (cfg.alpha_override) op.rhs_scalar = *cfg.alpha_override;
        EulerRecord rec;
        rec.axis = axis;
        rec.weights = op.weights;
        rec.rhs = op.rhs_scalar;
        rec.tolerance = cfg.tol_verify;
        bool converged = moments.at(MultiIndex(p.support.dimension())).converged;
        for (std::size_t t = 0; t < p.support.size(); ++t)
            if (op.weights[t] != 0) converged = converged && moments.at(p.support[t]).converged;
        rec.residual = euler_residual(op, p.support, p.coeffs, moments);
        rec.budget = euler_budget(op, p.support, p.coeffs, moments);
        rec.relative = rec.budget > 0 ? std::abs(rec.residual) / rec.budget : std::abs(rec.residual);
        if (op.degenerate()) {
            rec.verdict = Verdict::Fail;
            rec.note = "all weights zero: spanning assumption violated";
        } else if (!converged) {
            rec.verdict = Verdict::Inconclusive;
            rec.note = "unconverged moment";
        } else {
            rec.verdict = rec.relative <= cfg.tol_verify ? Verdict::Pass : Verdict::Fail;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

/// Toric relation check for one vector: exact index equality, then
/// agreement of the two finite-difference sides with each other and with
/// the moment at the shared index. `fd` supplies derivative estimates.
template <class FdLookup>
ToricRecord verify_toric(const Polynomial& p, const LatticeBasis& basis, const LatticeVector& v,
                         const MomentTable& moments, FdLookup&& fd, const VerifyConfig& cfg) {
    ToricRecord rec;
    rec.vector = v;
    rec.tolerance = cfg.tol_fd_pair;
    rec.in_lattice = lattice_membership(basis, v);
    rec.pair = unchecked_toric_pair(p.support, v);
    rec.index_equal = rec.pair.indices_equal();
    rec.lhs_order = total_order(rec.pair.lhs_derivs);
    rec.rhs_order = total_order(rec.pair.rhs_derivs);
    rec.high_fd_order = std::max(rec.lhs_order, rec.rhs_order) > 2;
    if (!rec.in_lattice || !rec.index_equal) {
        rec.verdict = Verdict::Fail;
        rec.note = rec.index_equal ? "vector not in lattice" : "moment indices differ";
        return rec;
    }
    const detail::FdOutcome& lhs = fd(rec.pair.lhs_derivs);
    const detail::FdOutcome& rhs = fd(rec.pair.rhs_derivs);
    if (!lhs.result || !rhs.result) {
        rec.verdict = Verdict::Inconclusive;
        rec.note = "finite difference failed: " + (lhs.result ? rhs.error : lhs.error);
        return rec;
    }
    const IntegralResult& m = moments.at(rec.pair.lhs_index);
    rec.fd_lhs = lhs.result->value;
    rec.fd_rhs = rhs.result->value;
    rec.moment = m.value;
    rec.fd_gap = std::abs(rec.fd_lhs - rec.fd_rhs);
    rec.gap_scale = std::max({std::abs(rec.fd_lhs), std::abs(rec.fd_rhs), m.l1, cfg.fd_floor});
    rec.bridge_lhs = std::abs(rec.fd_lhs - m.value) / rec.gap_scale;
    rec.bridge_rhs = std::abs(rec.fd_rhs - m.value) / rec.gap_scale;
    const bool ok = rec.fd_gap <= cfg.tol_fd_pair * rec.gap_scale && rec.bridge_lhs <= cfg.tol_fd_pair &&
                    rec.bridge_rhs <= cfg.tol_fd_pair;
    if (!lhs.result->converged || !rhs.result->converged || !m.converged) {
        rec.verdict = Verdict::Inconclusive;
        rec.note = "unconverged quadrature";
    } else if (ok) {
        rec.verdict = Verdict::Pass;
    } else if (rec.high_fd_order) {
        rec.verdict = Verdict::Inconclusive;
        rec.note = "finite differences of order > 2 outside tolerance";
    } else {
        rec.verdict = Verdict::Fail;
    }
    return rec;
}

/// Full pipeline: spanning, contour, moments, Euler checks, toric checks on
/// basis and sampled vectors, fd-vs-moment bridge for every k in K.
inline VerificationReport verify_all(const Polynomial& p, const VerifyConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.polynomial = p;
    rep.config = cfg;
    rep.has_constant_term = p.support.has_constant_term();
    rep.exponent_matrix = p.support.exponent_matrix();
    rep.spanning = check_spanning(p.support);
    auto finish = [&](Verdict v) {
        rep.verdict = v;
        rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rep;
    };
    if (!rep.spanning) {
        rep.errors.push_back("exponents do not span the ambient space");
        return finish(Verdict::InputError);
    }
    rep.basis = kernel_basis(p.support);

    try {
        rep.contour = admissible_contour(p, cfg.contour_policy);
        rep.certificate_margin = certify(p, *rep.contour).margin;
    } catch (const ContourError& e) {
        rep.errors.push_back(std::string("contour search failed: ") + e.what());
        return finish(Verdict::Inconclusive);
    }
    const Contour& contour = *rep.contour;
    const std::size_t n = p.support.dimension();

    // Lattice vectors to check.
    std::vector<std::pair<LatticeVector, std::string>> vectors;
    for (const auto& b : rep.basis.vectors) vectors.emplace_back(b, "basis");
    rep.samples_requested = rep.basis.empty() ? 0 : cfg.extra_lattice_samples;
    for (auto& v : sample_lattice_vectors(rep.basis, cfg.extra_lattice_samples, cfg.lattice_l1_bound, cfg.seed))
        vectors.emplace_back(std::move(v), "sample");
    rep.samples_obtained = static_cast<int>(vectors.size() - rep.basis.vectors.size());

    // Moments: Z, every k, and each toric index.
    std::set<MultiIndex> needed{MultiIndex(n)};
    for (const auto& k : p.support.exponents()) needed.insert(k);
    for (const auto& [v, src] : vectors) {
        auto pair = unchecked_toric_pair(p.support, v);
        if (pair.indices_equal()) needed.insert(pair.lhs_index);
    }
    MomentCache cache(p, contour, QuadratureOptions{cfg.quad_tol});
    cache.prefetch(std::vector<MultiIndex>(needed.begin(), needed.end()), cfg.threads);
    const MomentTable moments = cache.table();
    rep.z = moments.at(MultiIndex(n));
    for (const auto& [j, r] : moments.entries) {
        ++rep.integrations;
        rep.evaluations += r.evaluations;
    }

    // Finite differences: every single k, and both sides of each toric pair.
    std::map<detail::FdKey, DerivativeMultiset> fd_requests;
    for (const auto& k : p.support.exponents()) {
        DerivativeMultiset d{{k, 1}};
        fd_requests.emplace(detail::fd_key(p.support, d), d);
    }
    for (const auto& [v, src] : vectors) {
        if (!lattice_membership(rep.basis, v)) continue;
        auto pair = unchecked_toric_pair(p.support, v);
        if (!pair.indices_equal()) continue;
        fd_requests.emplace(detail::fd_key(p.support, pair.lhs_derivs), pair.lhs_derivs);
        fd_requests.emplace(detail::fd_key(p.support, pair.rhs_derivs), pair.rhs_derivs);
    }
    std::vector<detail::FdKey> keys;
    for (const auto& [key, d] : fd_requests) keys.push_back(key);
    std::vector<detail::FdOutcome> outcomes(keys.size());
    FdOptions fd_opt;
    fd_opt.h_rel = cfg.fd_h_rel;
    fd_opt.quadrature = QuadratureOptions{cfg.fd_quad_tol};
    fd_opt.threads = 1;
    parallel_for(keys.size(), cfg.threads, [&](std::size_t i) {
        try {
            outcomes[i].result = fd_derivative(fd_requests.at(keys[i]), p, contour, fd_opt);
        } catch (const std::exception& e) {
            outcomes[i].error = e.what();
        }
    });
    std::map<detail::FdKey, const detail::FdOutcome*> fd_index;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        fd_index.emplace(keys[i], &outcomes[i]);
        if (outcomes[i].result) {
            rep.integrations += outcomes[i].result->integrations;
            rep.evaluations += outcomes[i].result->evaluations;
        }
    }
    auto fd_lookup = [&](const DerivativeMultiset& d) -> const detail::FdOutcome& {
        return *fd_index.at(detail::fd_key(p.support, d));
    };

    Verdict verdict = Verdict::Pass;

    rep.euler = verify_euler(p, moments, cfg);
    for (const auto& e : rep.euler) verdict = combine(verdict, e.verdict);

    for (const auto& [v, src] : vectors) {
        auto rec = verify_toric(p, rep.basis, v, moments, fd_lookup, cfg);
        rec.source = src;
        verdict = combine(verdict, rec.verdict);
        rep.toric.push_back(std::move(rec));
    }

    for (const auto& k : p.support.exponents()) {
        BridgeRecord b;
        b.exponent = k;
        b.tolerance = cfg.tol_fd;
        const auto& m = moments.at(k);
        b.moment = m.value;
        const auto& fd = fd_lookup({{k, 1}});
        if (!fd.result) {
            b.verdict = Verdict::Inconclusive;
            b.note = "finite difference failed: " + fd.error;
        } else {
            b.fd = fd.result->value;
            b.scale = std::max({std::abs(m.value), m.l1, cfg.fd_floor});
            b.relative = std::abs(b.fd - b.moment) / b.scale;
            if (!fd.result->converged || !m.converged) {
                b.verdict = Verdict::Inconclusive;
                b.note = "unconverged quadrature";
            } else {
                b.verdict = b.relative <= cfg.tol_fd ? Verdict::Pass : Verdict::Fail;
            }
        }
        verdict = combine(verdict, b.verdict);
        rep.bridge.push_back(std::move(b));
    }
    return finish(verdict);
}

}  // namespace gkz
