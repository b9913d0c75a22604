#pragma once

// Exact integer and rational linear algebra on small dense matrices.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gkz::exact {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;  // row-major

namespace detail {

inline std::int64_t to_int64(const Integer& x) {
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("integer entry does not fit in 64 bits");
    return x.convert_to<std::int64_t>();
}

inline std::size_t column_count(const IntMatrix& m) { return m.empty() ? 0 : m.front().size(); }

// a*s + b*t = g >= 0
inline void extended_gcd(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t) {
    Integer old_r = a, r = b, old_s = 1, s1 = 0, old_t = 0, t1 = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s1;
        old_s = s1;
        s1 = tmp;
        tmp = old_t - q * t1;
        old_t = t1;
        t1 = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    g = old_r;
    s = old_s;
    t = old_t;
}

}  // namespace detail

/// Rank over the rationals, by fraction-free (Bareiss) elimination.
inline std::size_t rational_rank(const IntMatrix& m) {
    const std::size_t rows = m.size(), cols = detail::column_count(m);
    std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];

    std::size_t rank = 0;
    Integer prev = 1;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

/// Basis of the integer kernel {v in Z^m : M v = 0} of an r x m matrix M.
///
/// Unimodular column operations bring M to lower echelon form M U = [H | 0].
/// The columns of U matching the zero block span the full kernel lattice,
/// because U is invertible over Z and H has full column rank. The result is
/// returned as rows.
inline IntMatrix saturated_kernel(const IntMatrix& m) {
    const std::size_t rows = m.size(), cols = detail::column_count(m);
    std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];
    std::vector<std::vector<Integer>> u(cols, std::vector<Integer>(cols));
    for (std::size_t j = 0; j < cols; ++j) u[j][j] = 1;

    // Replace columns (p, q) of both a and u by (s*p + t*q, x*p + y*q).
    auto combine = [&](std::size_t p, std::size_t q, const Integer& s, const Integer& t, const Integer& x,
                       const Integer& y) {
        auto apply = [&](std::vector<std::vector<Integer>>& mat) {
            for (auto& row : mat) {
                Integer vp = row[p], vq = row[q];
                row[p] = s * vp + t * vq;
                row[q] = x * vp + y * vq;
            }
        };
        apply(a);
        apply(u);
    };

    std::size_t pivot_col = 0;
    for (std::size_t i = 0; i < rows && pivot_col < cols; ++i) {
        for (std::size_t j = pivot_col + 1; j < cols; ++j) {
            if (a[i][j] == 0) continue;
            if (a[i][pivot_col] == 0) {
                combine(pivot_col, j, 0, 1, 1, 0);  // swap
                continue;
            }
            Integer g, s, t;
            detail::extended_gcd(a[i][pivot_col], a[i][j], g, s, t);
            Integer x = -(a[i][j] / g), y = a[i][pivot_col] / g;
            combine(pivot_col, j, s, t, x, y);
        }
        if (a[i][pivot_col] != 0) ++pivot_col;
    }

    IntMatrix kernel;
    for (std::size_t j = pivot_col; j < cols; ++j) {
        IntVector v(cols);
        for (std::size_t r = 0; r < cols; ++r) v[r] = detail::to_int64(u[r][j]);
        kernel.push_back(std::move(v));
    }
    return kernel;
}

/// LLL reduction (delta = 0.99) of linearly independent integer rows.
/// Only unimodular row operations are applied, so the generated lattice is
/// unchanged; Gram-Schmidt data is floating point and affects only quality.
inline void lll_reduce(IntMatrix& basis, double delta = 0.99) {
    const std::size_t k_count = basis.size();
    if (k_count < 2) return;
    const std::size_t dim = basis.front().size();

    auto dot = [dim](const std::vector<long double>& x, const std::vector<long double>& y) {
        long double s = 0;
        for (std::size_t i = 0; i < dim; ++i) s += x[i] * y[i];
        return s;
    };

    std::vector<std::vector<long double>> star(k_count, std::vector<long double>(dim));
    std::vector<std::vector<long double>> mu(k_count, std::vector<long double>(k_count, 0));
    std::vector<long double> norm2(k_count);
    auto gram_schmidt = [&] {
        for (std::size_t i = 0; i < k_count; ++i) {
            for (std::size_t d = 0; d < dim; ++d) star[i][d] = static_cast<long double>(basis[i][d]);
            std::vector<long double> bi = star[i];
            for (std::size_t j = 0; j < i; ++j) {
                mu[i][j] = dot(bi, star[j]) / norm2[j];
                for (std::size_t d = 0; d < dim; ++d) star[i][d] -= mu[i][j] * star[j][d];
            }
            norm2[i] = dot(star[i], star[i]);
        }
    };

    gram_schmidt();
    std::size_t k = 1;
    std::size_t guard = 0;
    while (k < k_count) {
        if (++guard > 100000) throw std::runtime_error("LLL reduction did not terminate");
        for (std::size_t jj = k; jj-- > 0;) {
            long double q = std::round(mu[k][jj]);
            if (q != 0) {
                auto qi = static_cast<std::int64_t>(q);
                for (std::size_t d = 0; d < dim; ++d) basis[k][d] -= qi * basis[jj][d];
                gram_schmidt();
            }
        }
        if (norm2[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norm2[k - 1]) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            gram_schmidt();
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
}

/// Exact solution lambda of sum_i lambda_i * rows[i] = v, if one exists.
/// Rows must be linearly independent (the solution is then unique).
inline std::optional<std::vector<Rational>> solve_combination(const IntMatrix& rows, const IntVector& v) {
    const std::size_t k = rows.size(), m = v.size();
    for (const auto& r : rows)
        if (r.size() != m) throw std::invalid_argument("row length mismatch");

    // Augmented system: m equations in k unknowns, [rows^T | v].
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(k + 1));
    for (std::size_t e = 0; e < m; ++e) {
        for (std::size_t i = 0; i < k; ++i) a[e][i] = rows[i][e];
        a[e][k] = v[e];
    }
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < k && r < m; ++c) {
        std::size_t p = r;
        while (p < m && a[p][c] == 0) ++p;
        if (p == m) continue;
        std::swap(a[p], a[r]);
        Rational inv = 1 / a[r][c];
        for (auto& x : a[r]) x *= inv;
        for (std::size_t e = 0; e < m; ++e) {
            if (e == r || a[e][c] == 0) continue;
            Rational f = a[e][c];
            for (std::size_t j = c; j <= k; ++j) a[e][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    for (std::size_t e = r; e < m; ++e)
        if (a[e][k] != 0) return std::nullopt;
    if (pivots.size() != k) throw std::invalid_argument("rows are linearly dependent");
    std::vector<Rational> lambda(k);
    for (std::size_t i = 0; i < r; ++i) lambda[pivots[i]] = a[i][k];
    return lambda;
}

inline IntVector multiply(const IntMatrix& m, const IntVector& v) {
    IntVector out(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    }
    return out;
}

}  // namespace gkz::exact
