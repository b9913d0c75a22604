#pragma once

#include "gkz/exact.hpp"
#include "gkz/support.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <vector>

namespace gkz {

using LatticeVector = exact::IntVector;

/// Integer basis of B = Z^K ∩ Ker(pi), one row per basis vector, indexed by
/// the support's canonical exponent order.
struct LatticeBasis {
    std::size_t support_size = 0;
    std::vector<LatticeVector> vectors;

    bool empty() const noexcept { return vectors.empty(); }
    std::size_t rank() const noexcept { return vectors.size(); }
};

/// The coordinate functional a_k = k_i of the annihilator of Ker(pi).
struct EulerRow {
    std::size_t axis;  // 1-based
    std::vector<int> weights;
};

/// The parameter vector; every entry is -1.
struct AlphaParameter {
    std::vector<int> entries;

    explicit AlphaParameter(std::size_t n) : entries(n, -1) {}

    /// <a, alpha> for a given in the coordinates dual to the axes.
    template <class T>
    T pair_with(const std::vector<T>& axis_coefficients) const {
        T s{};
        for (std::size_t i = 0; i < entries.size(); ++i) s += axis_coefficients[i] * static_cast<T>(entries[i]);
        return s;
    }
};

inline std::int64_t l1_norm(const LatticeVector& v) {
    std::int64_t s = 0;
    for (auto x : v) s += std::abs(x);
    return s;
}

namespace detail {

inline void sign_normalize(LatticeVector& v) {
    auto it = std::find_if(v.begin(), v.end(), [](auto x) { return x != 0; });
    if (it != v.end() && *it < 0)
        for (auto& x : v) x = -x;
}

}  // namespace detail

/// Saturated integer kernel basis of the exponent matrix: LLL-reduced,
/// sign-normalized (first nonzero entry positive) and sorted by (l1, lex).
inline LatticeBasis kernel_basis(const PolynomialSupport& support) {
    if (!check_spanning(support)) throw InputError("exponents do not span the ambient space");
    auto rows = exact::saturated_kernel(support.exponent_matrix());
    exact::lll_reduce(rows);
    for (auto& r : rows) detail::sign_normalize(r);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        const auto na = l1_norm(a), nb = l1_norm(b);
        if (na != nb) return na < nb;
        return a > b;
    });
    return LatticeBasis{support.size(), std::move(rows)};
}

inline std::vector<EulerRow> euler_rows(const PolynomialSupport& support) {
    std::vector<EulerRow> rows;
    for (std::size_t i = 0; i < support.dimension(); ++i) {
        EulerRow row{i + 1, {}};
        for (const auto& k : support.exponents()) row.weights.push_back(k[i]);
        rows.push_back(std::move(row));
    }
    return rows;
}

/// A nonzero integer combination of basis rows with coefficients in
/// [-bound, bound]. Deterministic for a given seed.
inline LatticeVector random_lattice_vector(const LatticeBasis& basis, int bound, std::uint64_t seed) {
    if (basis.empty()) throw std::invalid_argument("random_lattice_vector: empty basis");
    if (bound <= 0) throw std::invalid_argument("random_lattice_vector: bound must be positive");
    std::mt19937_64 rng(seed);
    const auto span = static_cast<std::uint64_t>(2 * bound + 1);
    while (true) {
        LatticeVector v(basis.support_size, 0);
        bool nonzero_combination = false;
        for (const auto& row : basis.vectors) {
            const auto coef = static_cast<std::int64_t>(rng() % span) - bound;
            if (coef == 0) continue;
            nonzero_combination = true;
            for (std::size_t j = 0; j < v.size(); ++j) v[j] += coef * row[j];
        }
        // Rows are independent, so a nonzero combination is a nonzero vector.
        if (nonzero_combination) return v;
    }
}

/// True iff v is an integer combination of the basis rows (exact).
inline bool lattice_membership(const LatticeBasis& basis, const LatticeVector& v) {
    if (v.size() != basis.support_size) throw std::invalid_argument("lattice_membership: length mismatch");
    auto lambda = exact::solve_combination(basis.vectors, v);
    if (!lambda) return false;
    return std::all_of(lambda->begin(), lambda->end(),
                       [](const exact::Rational& q) { return denominator(q) == 1; });
}

}  // namespace gkz
