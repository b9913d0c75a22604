#pragma once

// Closed forms used as ground truth: Gaussian integrals and moments, and
// ∫ x^p e^{-a x^{2m}} dx over the real line.

#include "gkz/multi_index.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gkz::oracle {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// S(x) = x^T A x with A complex symmetric and Re A negative definite.
class GaussianForm {
public:
    explicit GaussianForm(ComplexMatrix a) : a_(std::move(a)) {
        if (a_.rows() != a_.cols() || a_.rows() == 0) throw std::invalid_argument("Gaussian form must be square");
        const auto n = a_.rows();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < i; ++j)
                if (a_(i, j) != a_(j, i)) throw std::invalid_argument("Gaussian form must be symmetric");
        // Leading principal minors of -Re A must be positive.
        const Eigen::MatrixXd neg_re = -a_.real();
        for (Eigen::Index k = 1; k <= n; ++k)
            if (!(neg_re.topLeftCorner(k, k).determinant() > 0))
                throw std::invalid_argument("Re A is not negative definite");
    }

    static GaussianForm diagonal(const std::vector<Complex>& d) {
        ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) a(i, i) = d[i];
        return GaussianForm(a);
    }

    const ComplexMatrix& matrix() const { return a_; }
    std::size_t dimension() const { return static_cast<std::size_t>(a_.rows()); }

private:
    ComplexMatrix a_;
};

/// π^{n/2} / sqrt(det(-A)); the square root is the product of principal
/// roots of the eigenvalues of -A (all in the right half plane).
inline Complex gaussian_Z(const GaussianForm& form) {
    const ComplexMatrix neg = -form.matrix();
    Eigen::ComplexEigenSolver<ComplexMatrix> es(neg, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
    Complex root{1.0, 0.0};
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) root *= std::sqrt(es.eigenvalues()(i));
    const double n = static_cast<double>(form.dimension());
    return std::pow(std::numbers::pi, n / 2) / root;
}

/// ∫ x^j e^{x^T A x} dx = Z * E[x^j] under covariance C = (-2A)^{-1},
/// expanded by Isserlis' pairing recursion. Odd total degree gives 0.
inline Complex gaussian_moment(const GaussianForm& form, const MultiIndex& j) {
    if (j.size() != form.dimension()) throw std::invalid_argument("moment index dimension mismatch");
    if (j.total_degree() % 2) return 0.0;
    const ComplexMatrix cov = (-2.0 * form.matrix()).inverse();
    std::vector<Eigen::Index> slots;
    for (std::size_t i = 0; i < j.size(); ++i)
        for (int q = 0; q < j[i]; ++q) slots.push_back(static_cast<Eigen::Index>(i));

    std::function<Complex(std::vector<Eigen::Index>)> pairings = [&](std::vector<Eigen::Index> s) -> Complex {
        if (s.empty()) return 1.0;
        const Eigen::Index first = s.front();
        Complex total = 0.0;
        for (std::size_t q = 1; q < s.size(); ++q) {
            std::vector<Eigen::Index> rest;
            for (std::size_t r = 1; r < s.size(); ++r)
                if (r != q) rest.push_back(s[r]);
            total += cov(first, s[q]) * pairings(rest);
        }
        return total;
    };
    return gaussian_Z(form) * pairings(slots);
}

/// ∫_R x^p e^{-a x^{2m}} dx = Γ((p+1)/(2m)) a^{-(p+1)/(2m)} / m for even p.
inline Complex monomial_moment(int m, Complex a, int p) {
    if (m <= 0) throw std::invalid_argument("m must be positive");
    if (!(a.real() > 0)) throw std::invalid_argument("Re a must be positive");
    if (p < 0) throw std::invalid_argument("moment order must be nonnegative");
    if (p % 2) return 0.0;
    const double s = (p + 1.0) / (2.0 * m);
    return std::tgamma(s) * std::pow(a, -s) / static_cast<double>(m);
}

/// ∫_R e^{-a x^{2m}} dx.
inline Complex monomial_Z(int m, Complex a) { return monomial_moment(m, a, 0); }

}  // namespace gkz::oracle
