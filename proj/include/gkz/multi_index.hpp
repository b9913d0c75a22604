#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gkz {

/// A multi-index of nonnegative integers. Used both for the exponent k of a
/// monomial x^k and for the index j of a moment integral.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : entries_(n, 0) {}
    explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
        for (int e : entries_)
            if (e < 0) throw std::invalid_argument("negative exponent in multi-index");
    }
    MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

    std::size_t size() const noexcept { return entries_.size(); }
    int operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<int>& entries() const noexcept { return entries_; }

    int total_degree() const noexcept { return std::accumulate(entries_.begin(), entries_.end(), 0); }
    bool is_zero() const noexcept {
        return std::all_of(entries_.begin(), entries_.end(), [](int e) { return e == 0; });
    }

    MultiIndex& operator+=(const MultiIndex& other) {
        if (other.size() != size()) throw std::invalid_argument("multi-index dimension mismatch");
        for (std::size_t i = 0; i < size(); ++i) entries_[i] += other.entries_[i];
        return *this;
    }
    friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }

    MultiIndex scaled(int m) const {
        MultiIndex r = *this;
        for (int& e : r.entries_) e *= m;
        return r;
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.entries_ <=> b.entries_; }

    /// "(2,0,1)"
    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(entries_[i]);
        }
        return s + ")";
    }

private:
    std::vector<int> entries_;
};

using ExponentIndex = MultiIndex;

/// Canonical monomial order: total degree ascending, ties broken by
/// lexicographic descending order, so (2,0) < (1,1) < (0,2).
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const int da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        return a.entries() > b.entries();
    }
};

}  // namespace gkz
