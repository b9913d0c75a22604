#pragma once

// JSON documents for systems, integrals and verification reports.

#include "gkz/contour.hpp"
#include "gkz/lattice.hpp"
#include "gkz/moment_table.hpp"
#include "gkz/operators.hpp"
#include "gkz/verifier.hpp"

#include <nlohmann/json.hpp>

namespace gkz::doc {

using nlohmann::json;

inline json complex(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline json integral(const IntegralResult& r) {
    return {{"re", r.value.real()}, {"im", r.value.imag()}, {"err", r.error}, {"converged", r.converged}};
}

inline json contour(const Contour& c) {
    json angles = json::array();
    for (const auto& r : c.angles) angles.push_back({r.minus, r.plus});
    return {{"kind", to_string(c.kind)}, {"angles", std::move(angles)}};
}

inline json matrix(const exact::IntMatrix& m) {
    json out = json::array();
    for (const auto& row : m) out.push_back(row);
    return out;
}

inline json multiset(const DerivativeMultiset& d) {
    json out = json::array();
    for (const auto& t : d)
        for (int q = 0; q < t.multiplicity; ++q) out.push_back(t.exponent.entries());
    return out;
}

inline json toric_pair(const ToricPair& p) {
    json doc = {{"v", p.lattice_vector}, {"lhs", multiset(p.lhs_derivs)}, {"rhs", multiset(p.rhs_derivs)}};
    if (p.indices_equal())
        doc["moment_index"] = p.lhs_index.entries();
    else
        doc["moment_index"] = {{"lhs", p.lhs_index.entries()}, {"rhs", p.rhs_index.entries()}};
    return doc;
}

inline json euler_operator(const EulerOperator& op, const PolynomialSupport& s) {
    json weights = json::object();
    for (std::size_t t = 0; t < s.size(); ++t) weights[s[t].to_string()] = op.weights[t];
    return {{"axis", op.axis}, {"weights", std::move(weights)}, {"rhs", op.rhs_scalar}};
}

inline json exponents(const PolynomialSupport& s) {
    json out = json::array();
    for (const auto& k : s.exponents()) out.push_back(k.entries());
    return out;
}

/// {exponent_matrix, lattice_basis, euler_operators, alpha, toric_pairs_for_basis}
inline json system(const Polynomial& p) {
    const auto basis = kernel_basis(p.support);
    json ops = json::array();
    for (std::size_t i = 1; i <= p.support.dimension(); ++i)
        ops.push_back(euler_operator(gkz::euler_operator(p.support, i), p.support));
    json pairs = json::array();
    for (const auto& v : basis.vectors) pairs.push_back(toric_pair(gkz::toric_pair(p.support, basis, v)));
    return {{"n", p.support.dimension()},
            {"exponents", exponents(p.support)},
            {"has_constant_term", p.support.has_constant_term()},
            {"exponent_matrix", matrix(p.support.exponent_matrix())},
            {"lattice_basis", matrix(basis.vectors)},
            {"euler_operators", std::move(ops)},
            {"alpha", AlphaParameter(p.support.dimension()).entries},
            {"toric_pairs_for_basis", std::move(pairs)}};
}

inline json config(const VerifyConfig& c) {
    return {{"quad_tol", c.quad_tol},       {"fd_h_rel", c.fd_h_rel},     {"fd_quad_tol", c.fd_quad_tol},
            {"tol_verify", c.tol_verify},   {"tol_fd", c.tol_fd},         {"tol_fd_pair", c.tol_fd_pair},
            {"fd_floor", c.fd_floor},       {"alpha_override", c.alpha_override ? json(*c.alpha_override) : json()}};
}

/// Verification report. Contains no thread count and, unless requested, no
/// wall time, so identical inputs give byte-identical documents.
inline json report(const VerificationReport& r, bool include_timing = false) {
    json doc;
    if (r.polynomial) doc["polynomial"] = serialize_polynomial(*r.polynomial);
    json support = {{"spanning", r.spanning},
                    {"has_constant_term", r.has_constant_term},
                    {"exponent_matrix", matrix(r.exponent_matrix)},
                    {"lattice_basis", matrix(r.basis.vectors)}};
    if (r.polynomial) {
        support["n"] = r.polynomial->support.dimension();
        support["size"] = r.polynomial->support.size();
        support["exponents"] = exponents(r.polynomial->support);
    }
    doc["support"] = std::move(support);
    doc["contour"] = r.contour ? contour(*r.contour) : json();
    doc["certificate_margin"] = r.certificate_margin;
    doc["Z"] = r.z ? integral(*r.z) : json();

    json euler = json::array();
    for (const auto& e : r.euler) {
        euler.push_back({{"axis", e.axis},
                         {"weights", e.weights},
                         {"rhs", e.rhs},
                         {"residual", complex(e.residual)},
                         {"budget", e.budget},
                         {"relative", e.relative},
                         {"tolerance", e.tolerance},
                         {"verdict", to_string(e.verdict)},
                         {"note", e.note}});
    }
    doc["euler"] = std::move(euler);

    json toric = json::array();
    for (const auto& t : r.toric) {
        toric.push_back({{"v", t.vector},
                         {"source", t.source},
                         {"pair", toric_pair(t.pair)},
                         {"in_lattice", t.in_lattice},
                         {"index_equal", t.index_equal},
                         {"lhs_order", t.lhs_order},
                         {"rhs_order", t.rhs_order},
                         {"high_fd_order", t.high_fd_order},
                         {"fd_lhs", complex(t.fd_lhs)},
                         {"fd_rhs", complex(t.fd_rhs)},
                         {"fd_gap", t.fd_gap},
                         {"scale", t.gap_scale},
                         {"moment", complex(t.moment)},
                         {"bridge_lhs", t.bridge_lhs},
                         {"bridge_rhs", t.bridge_rhs},
                         {"tolerance", t.tolerance},
                         {"verdict", to_string(t.verdict)},
                         {"note", t.note}});
    }
    doc["toric"] = std::move(toric);

    json bridge = json::array();
    for (const auto& b : r.bridge) {
        bridge.push_back({{"k", b.exponent.entries()},
                          {"fd", complex(b.fd)},
                          {"moment", complex(b.moment)},
                          {"scale", b.scale},
                          {"relative", b.relative},
                          {"tolerance", b.tolerance},
                          {"verdict", to_string(b.verdict)},
                          {"note", b.note}});
    }
    doc["bridge"] = std::move(bridge);
    doc["lattice_samples"] = {{"requested", r.samples_requested},
                              {"obtained", r.samples_obtained},
                              {"l1_bound", r.config.lattice_l1_bound},
                              {"seed", r.config.seed}};
    doc["tolerances"] = config(r.config);
    doc["counts"] = {{"integrations", r.integrations}, {"evaluations", r.evaluations}};
    doc["errors"] = r.errors;
    doc["verdict"] = to_string(r.verdict);
    if (include_timing) doc["wall_seconds"] = r.wall_seconds;
    return doc;
}

}  // namespace gkz::doc
