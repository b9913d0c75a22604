#pragma once

#include "gkz/contour.hpp"
#include "gkz/multi_index.hpp"
#include "gkz/support.hpp"

#include <map>
#include <stdexcept>

namespace gkz {

/// Result of one numerical integral: value, quadrature error estimate, the
/// absolute mass ∫|f||dx| it was judged against, and whether the estimate
/// met the requested tolerance.
struct IntegralResult {
    Complex value{};
    double error = 0;
    double l1 = 0;
    bool converged = false;
    std::size_t evaluations = 0;
};

/// Moments M_j = ∫ x^j e^{S(x)} dx evaluated on one contour; M_0 is Z.
struct MomentTable {
    std::map<MultiIndex, IntegralResult> entries;
    Contour contour;
    CoefficientVector coeffs;

    const IntegralResult& at(const MultiIndex& j) const {
        auto it = entries.find(j);
        if (it == entries.end()) throw std::out_of_range("moment " + j.to_string() + " missing from table");
        return it->second;
    }
    bool contains(const MultiIndex& j) const { return entries.count(j) != 0; }
};

}  // namespace gkz
