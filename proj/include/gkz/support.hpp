#pragma once

#include "gkz/exact.hpp"
#include "gkz/multi_index.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gkz {

using Complex = std::complex<double>;

/// Raised for inputs that violate the polynomial document format or the
/// standing assumptions on the support.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The support K of S(x) = sum_{k in K} c_k x^k in n variables, stored in
/// canonical graded order. Immutable after construction.
class PolynomialSupport {
public:
    PolynomialSupport(std::size_t n, std::vector<ExponentIndex> exponents) : n_(n), exponents_(std::move(exponents)) {
        if (n_ == 0) throw InputError("dimension n must be positive");
        if (exponents_.empty()) throw InputError("empty support");
        for (const auto& k : exponents_)
            if (k.size() != n_)
                throw InputError("exponent " + k.to_string() + " has length " + std::to_string(k.size()) +
                                 ", expected " + std::to_string(n_));
        std::sort(exponents_.begin(), exponents_.end(), GradedLexLess{});
        auto dup = std::adjacent_find(exponents_.begin(), exponents_.end());
        if (dup != exponents_.end()) throw InputError("duplicate exponent " + dup->to_string());
    }

    std::size_t dimension() const noexcept { return n_; }
    std::size_t size() const noexcept { return exponents_.size(); }
    const std::vector<ExponentIndex>& exponents() const noexcept { return exponents_; }
    const ExponentIndex& operator[](std::size_t i) const { return exponents_[i]; }

    std::optional<std::size_t> index_of(const ExponentIndex& k) const {
        auto it = std::lower_bound(exponents_.begin(), exponents_.end(), k, GradedLexLess{});
        if (it == exponents_.end() || *it != k) return std::nullopt;
        return static_cast<std::size_t>(it - exponents_.begin());
    }

    bool has_constant_term() const {
        return std::any_of(exponents_.begin(), exponents_.end(), [](const auto& k) { return k.is_zero(); });
    }

    int max_degree() const {
        int d = 0;
        for (const auto& k : exponents_) d = std::max(d, k.total_degree());
        return d;
    }

    /// n x |K| matrix whose column for k is k itself (the map pi).
    exact::IntMatrix exponent_matrix() const {
        exact::IntMatrix m(n_, exact::IntVector(exponents_.size()));
        for (std::size_t c = 0; c < exponents_.size(); ++c)
            for (std::size_t i = 0; i < n_; ++i) m[i][c] = exponents_[c][i];
        return m;
    }

    friend bool operator==(const PolynomialSupport&, const PolynomialSupport&) = default;

private:
    std::size_t n_;
    std::vector<ExponentIndex> exponents_;
};

/// Complex coefficients c_k, aligned with the support's canonical order.
class CoefficientVector {
public:
    CoefficientVector() = default;
    explicit CoefficientVector(std::vector<Complex> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    const Complex& operator[](std::size_t i) const { return values_[i]; }
    Complex& operator[](std::size_t i) { return values_[i]; }
    const std::vector<Complex>& values() const noexcept { return values_; }

    Complex at(const PolynomialSupport& support, const ExponentIndex& k) const {
        auto i = support.index_of(k);
        if (!i) throw std::out_of_range("exponent " + k.to_string() + " not in support");
        return values_[*i];
    }

    friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

private:
    std::vector<Complex> values_;
};

/// A support together with matching coefficients.
struct Polynomial {
    PolynomialSupport support;
    CoefficientVector coeffs;

    Polynomial(PolynomialSupport s, CoefficientVector c) : support(std::move(s)), coeffs(std::move(c)) {
        if (coeffs.size() != support.size()) throw InputError("coefficient count does not match support size");
    }

    /// Build from unordered (k, c_k) pairs; the pairs are reordered canonically.
    static Polynomial from_terms(std::size_t n, std::vector<std::pair<ExponentIndex, Complex>> terms) {
        std::vector<ExponentIndex> ks;
        ks.reserve(terms.size());
        for (const auto& t : terms) ks.push_back(t.first);
        PolynomialSupport support(n, ks);
        std::vector<Complex> values(support.size());
        for (const auto& [k, c] : terms) values[*support.index_of(k)] = c;
        return Polynomial(std::move(support), CoefficientVector(std::move(values)));
    }

    Complex evaluate(std::span<const Complex> x) const {
        Complex s = 0;
        for (std::size_t t = 0; t < support.size(); ++t) {
            Complex m = coeffs[t];
            for (std::size_t i = 0; i < x.size(); ++i)
                for (int p = 0; p < support[t][i]; ++p) m *= x[i];
            s += m;
        }
        return s;
    }
};

/// True iff the exponents span Q^n (rank n of the exponent matrix, exact).
inline bool check_spanning(const PolynomialSupport& support) {
    return exact::rational_rank(support.exponent_matrix()) == support.dimension();
}

namespace detail {

inline double json_number(const nlohmann::json& j, const char* what) {
    if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
    return j.get<double>();
}

}  // namespace detail

/// Parse a polynomial document {"n": int, "terms": [{"k": [...], "c": [re, im]}, ...]}.
inline Polynomial parse_polynomial(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InputError("polynomial document must be an object");
    if (!doc.contains("n") || !doc["n"].is_number_integer()) throw InputError("field 'n' must be an integer");
    const auto n_signed = doc["n"].get<long long>();
    if (n_signed <= 0) throw InputError("field 'n' must be positive");
    const auto n = static_cast<std::size_t>(n_signed);
    if (!doc.contains("terms") || !doc["terms"].is_array()) throw InputError("field 'terms' must be an array");
    if (doc["terms"].empty()) throw InputError("empty support");

    std::vector<std::pair<ExponentIndex, Complex>> terms;
    std::set<std::vector<int>> seen;
    for (const auto& term : doc["terms"]) {
        if (!term.is_object() || !term.contains("k") || !term.contains("c"))
            throw InputError("each term must be an object with fields 'k' and 'c'");
        const auto& k = term["k"];
        if (!k.is_array() || k.size() != n)
            throw InputError("exponent 'k' must be an array of " + std::to_string(n) + " integers");
        std::vector<int> entries;
        for (const auto& e : k) {
            if (!e.is_number_integer()) throw InputError("exponent entries must be integers");
            const auto v = e.get<long long>();
            if (v < 0) throw InputError("negative exponent in term");
            if (v > 1000) throw InputError("exponent too large");
            entries.push_back(static_cast<int>(v));
        }
        const auto& c = term["c"];
        if (!c.is_array() || c.size() != 2) throw InputError("coefficient 'c' must be [re, im]");
        Complex value(detail::json_number(c[0], "coefficient real part"),
                      detail::json_number(c[1], "coefficient imaginary part"));
        if (!seen.insert(entries).second)
            throw InputError("duplicate exponent " + MultiIndex(entries).to_string());
        terms.emplace_back(MultiIndex(std::move(entries)), value);
    }
    return Polynomial::from_terms(n, std::move(terms));
}

inline Polynomial parse_polynomial(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed document: ") + e.what());
    }
    return parse_polynomial(doc);
}

/// Canonical serialization; parse(serialize(p)) == p.
inline nlohmann::json serialize_polynomial(const Polynomial& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t t = 0; t < p.support.size(); ++t)
        terms.push_back({{"k", p.support[t].entries()}, {"c", {p.coeffs[t].real(), p.coeffs[t].imag()}}});
    return {{"n", p.support.dimension()}, {"terms", std::move(terms)}};
}

}  // namespace gkz
