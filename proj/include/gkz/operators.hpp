#pragma once

#include "gkz/lattice.hpp"
#include "gkz/moment_table.hpp"
#include "gkz/support.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace gkz {

/// A derivative multiset over the support: k -> multiplicity.
struct DerivativeTerm {
    ExponentIndex exponent;
    int multiplicity;

    friend bool operator==(const DerivativeTerm&, const DerivativeTerm&) = default;
};
using DerivativeMultiset = std::vector<DerivativeTerm>;

inline int total_order(const DerivativeMultiset& d) {
    int s = 0;
    for (const auto& t : d) s += t.multiplicity;
    return s;
}

/// Sum of the exponents in the multiset: differentiating Z once per entry
/// under the integral sign gives the moment with this index.
inline MultiIndex moment_index(const DerivativeMultiset& derivs, std::size_t n) {
    MultiIndex j(n);
    for (const auto& t : derivs) j += t.exponent.scaled(t.multiplicity);
    return j;
}

/// Moment symbol M_j; index zero denotes Z.
struct MomentSymbol {
    MultiIndex index;
    bool is_partition_function() const { return index.is_zero(); }
};

/// prod_{n_k>0} d^{n_k}/dc_k^{n_k} Z = prod_{n_k<0} d^{-n_k}/dc_k^{-n_k} Z.
struct ToricPair {
    LatticeVector lattice_vector;
    DerivativeMultiset lhs_derivs;
    DerivativeMultiset rhs_derivs;
    MultiIndex lhs_index;
    MultiIndex rhs_index;

    bool indices_equal() const { return lhs_index == rhs_index; }
};

namespace detail {

inline ToricPair split_lattice_vector(const PolynomialSupport& support, const LatticeVector& v) {
    if (v.size() != support.size()) throw std::invalid_argument("lattice vector length does not match support");
    if (std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; }))
        throw std::invalid_argument("toric pair of the zero vector");
    ToricPair pair;
    pair.lattice_vector = v;
    for (std::size_t t = 0; t < v.size(); ++t) {
        if (v[t] > 0) pair.lhs_derivs.push_back({support[t], static_cast<int>(v[t])});
        if (v[t] < 0) pair.rhs_derivs.push_back({support[t], static_cast<int>(-v[t])});
    }
    pair.lhs_index = moment_index(pair.lhs_derivs, support.dimension());
    pair.rhs_index = moment_index(pair.rhs_derivs, support.dimension());
    return pair;
}

}  // namespace detail

/// Toric relation for a lattice vector v in B. Rejects v = 0 and v outside B.
inline ToricPair toric_pair(const PolynomialSupport& support, const LatticeBasis& basis, const LatticeVector& v) {
    if (!lattice_membership(basis, v)) throw std::invalid_argument("vector is not in the kernel lattice");
    return detail::split_lattice_vector(support, v);
}

/// Same split without the membership precondition. Used to exercise the
/// exact index check on vectors that are deliberately outside B.
inline ToricPair unchecked_toric_pair(const PolynomialSupport& support, const LatticeVector& v) {
    return detail::split_lattice_vector(support, v);
}

/// sum_k k_i c_k dZ/dc_k = rhs_scalar * Z.
struct EulerOperator {
    std::size_t axis;  // 1-based
    std::vector<int> weights;
    int rhs_scalar = -1;

    bool degenerate() const {
        return std::all_of(weights.begin(), weights.end(), [](int w) { return w == 0; });
    }
};

inline EulerOperator euler_operator(const PolynomialSupport& support, std::size_t axis) {
    if (axis < 1 || axis > support.dimension()) throw std::out_of_range("axis out of range");
    const AlphaParameter alpha(support.dimension());
    EulerOperator op{axis, {}, alpha.entries[axis - 1]};
    for (const auto& k : support.exponents()) op.weights.push_back(k[axis - 1]);
    return op;
}

/// r = sum_k w_k c_k M_k - rhs * Z, for arbitrary (e.g. rational) weights.
inline Complex euler_residual(std::span<const double> weights, double rhs_scalar, const PolynomialSupport& support,
                              const CoefficientVector& coeffs, const MomentTable& moments) {
    Complex r = -rhs_scalar * moments.at(MultiIndex(support.dimension())).value;
    for (std::size_t t = 0; t < support.size(); ++t) {
        if (weights[t] == 0) continue;
        r += weights[t] * coeffs[t] * moments.at(support[t]).value;
    }
    return r;
}

inline Complex euler_residual(const EulerOperator& op, const PolynomialSupport& support,
                              const CoefficientVector& coeffs, const MomentTable& moments) {
    std::vector<double> w(op.weights.begin(), op.weights.end());
    return euler_residual(w, op.rhs_scalar, support, coeffs, moments);
}

/// sum_k |k_i c_k M_k| + |Z|, the scale a residual is judged against.
inline double euler_budget(const EulerOperator& op, const PolynomialSupport& support,
                           const CoefficientVector& coeffs, const MomentTable& moments) {
    double b = std::abs(moments.at(MultiIndex(support.dimension())).value);
    for (std::size_t t = 0; t < support.size(); ++t) {
        if (op.weights[t] == 0) continue;
        b += std::abs(static_cast<double>(op.weights[t]) * coeffs[t] * moments.at(support[t]).value);
    }
    return b;
}

}  // namespace gkz
