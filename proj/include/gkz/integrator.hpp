#pragma once

// Numerical evaluation of Z = ∫ e^{S(x)} dx and the moments
// M_j = ∫ x^j e^{S(x)} dx over a certified product-ray contour, plus finite
// differences of Z in coefficient space.

#include "gkz/contour.hpp"
#include "gkz/moment_table.hpp"
#include "gkz/operators.hpp"
#include "gkz/parallel.hpp"
#include "gkz/quadrature.hpp"
#include "gkz/support.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gkz {

struct QuadratureOptions {
    double tol = 1e-9;              // relative to ∫|f|
    std::size_t max_panels = 400;   // per one-dimensional adaptive call
};

namespace detail {

// Envelope e^{Re S} |x^j| drops below peak * 1e-19 beyond the truncation
// radius. The threshold does not depend on the tolerance.
constexpr double kLogTruncation = -43.7;

struct ReducedTerm {
    std::vector<int> exps;
    Complex coeff;
};

class MomentIntegrand {
public:
    MomentIntegrand(const Polynomial& p, const Contour& contour, const MultiIndex& j, const QuadratureOptions& opt)
        : p_(p), contour_(contour), j_(j), opt_(opt), n_(p.support.dimension()) {
        if (contour.dimension() != n_) throw std::invalid_argument("contour dimension does not match polynomial");
        if (j.size() != n_) throw std::invalid_argument("moment index dimension does not match polynomial");
        for (std::size_t t = 0; t < p.support.size(); ++t)
            if (p.coeffs[t] != Complex{}) terms_.push_back({p.support[t].entries(), p.coeffs[t]});
        radii_ = truncation_radii();
    }

    IntegralResult integrate() const {
        quad::Estimate e = level(0, terms_, Complex{1.0, 0.0});
        IntegralResult r;
        r.value = e.value;
        r.error = e.error;
        r.l1 = e.l1;
        r.evaluations = e.evaluations;
        r.converged = e.converged && std::isfinite(e.error) && e.error <= opt_.tol * e.l1;
        return r;
    }

    const std::vector<double>& radii() const { return radii_; }

private:
    double log_envelope(const std::vector<double>& r, const std::vector<double>& phase) const {
        std::vector<Complex> x(n_);
        double lg = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            x[i] = std::polar(r[i], phase[i]);
            if (j_[i] > 0) lg += j_[i] * std::log(r[i]);
        }
        return p_.evaluate(x).real() + lg;
    }

    // Per-dimension radii from a coarse scan of the log-envelope over all
    // orthants; extents double until the envelope is below threshold at the edge.
    std::vector<double> truncation_radii() const {
        const std::size_t grid = n_ == 1 ? 400 : (n_ == 2 ? 64 : 24);
        std::vector<double> extent(n_, 1.0);
        for (int iter = 0; iter < 60; ++iter) {
            std::vector<double> r(n_), phase(n_);
            double peak = -std::numeric_limits<double>::infinity();
            std::vector<double> samples;
            std::size_t total = 1;
            for (std::size_t i = 0; i < n_; ++i) total *= 2 * grid;
            samples.reserve(total);
            for (std::size_t flat = 0; flat < total; ++flat) {
                std::size_t rest = flat;
                for (std::size_t i = 0; i < n_; ++i) {
                    const std::size_t cell = rest % (2 * grid);
                    rest /= 2 * grid;
                    const bool plus = cell >= grid;
                    r[i] = extent[i] * static_cast<double>(cell % grid) / static_cast<double>(grid - 1);
                    phase[i] = plus ? contour_.angles[i].plus : contour_.angles[i].minus;
                }
                const double v = log_envelope(r, phase);
                samples.push_back(v);
                if (v > peak) peak = v;
            }
            if (!std::isfinite(peak)) throw std::runtime_error("integrand envelope is not finite on the contour");
            const double threshold = peak + kLogTruncation;
            std::vector<double> reach(n_, 0.0);
            for (std::size_t flat = 0; flat < total; ++flat) {
                if (samples[flat] < threshold) continue;
                std::size_t rest = flat;
                for (std::size_t i = 0; i < n_; ++i) {
                    const std::size_t cell = rest % (2 * grid);
                    rest /= 2 * grid;
                    reach[i] = std::max(reach[i], extent[i] * static_cast<double>(cell % grid) / (grid - 1));
                }
            }
            bool grown = false;
            for (std::size_t i = 0; i < n_; ++i) {
                const double step = extent[i] / static_cast<double>(grid - 1);
                if (reach[i] > extent[i] - 2.5 * step) {
                    extent[i] *= 2;
                    grown = true;
                }
            }
            if (!grown) {
                std::vector<double> out(n_);
                for (std::size_t i = 0; i < n_; ++i)
                    out[i] = std::min(extent[i], reach[i] + 2 * extent[i] / static_cast<double>(grid - 1));
                return out;
            }
        }
        throw std::runtime_error("truncation radius search did not terminate");
    }

    quad::Estimate level(std::size_t d, const std::vector<ReducedTerm>& terms, Complex prefactor) const {
        quad::AdaptiveOptions ao;
        ao.rel_tol = d == 0 ? opt_.tol : opt_.tol / 4;
        ao.max_panels = opt_.max_panels;
        quad::Estimate total;
        total.evaluations = 0;
        for (int side = 0; side < 2; ++side) {
            const double theta = side == 0 ? contour_.angles[d].minus : contour_.angles[d].plus;
            const Complex dir = std::polar(1.0, theta);
            const Complex jac = side == 0 ? -dir : dir;
            quad::Estimate e;
            if (d + 1 == n_) {
                // Dense univariate polynomial in x_d.
                int deg = 0;
                for (const auto& t : terms) deg = std::max(deg, t.exps[d]);
                std::vector<Complex> poly(deg + 1);
                for (const auto& t : terms) poly[t.exps[d]] += t.coeff;
                const int jd = j_[d];
                auto f = [&](double r) {
                    const Complex x = r * dir;
                    Complex s = poly[deg];
                    for (int q = deg - 1; q >= 0; --q) s = s * x + poly[q];
                    Complex v = prefactor * std::exp(s);
                    for (int q = 0; q < jd; ++q) v *= x;
                    quad::Estimate pt;
                    pt.value = v;
                    pt.l1 = std::abs(v);
                    pt.evaluations = 1;
                    return pt;
                };
                e = quad::integrate_adaptive(f, 0.0, radii_[d], ao);
            } else {
                auto f = [&](double r) {
                    const Complex x = r * dir;
                    std::vector<ReducedTerm> reduced = terms;
                    for (auto& t : reduced)
                        for (int q = 0; q < t.exps[d]; ++q) t.coeff *= x;
                    Complex pre = prefactor;
                    for (int q = 0; q < j_[d]; ++q) pre *= x;
                    return level(d + 1, reduced, pre);
                };
                e = quad::integrate_adaptive(f, 0.0, radii_[d], ao);
            }
            total.value += jac * e.value;
            total.error += e.error;
            total.l1 += e.l1;
            total.converged = total.converged && e.converged;
            total.evaluations += e.evaluations;
        }
        return total;
    }

    const Polynomial& p_;
    const Contour& contour_;
    MultiIndex j_;
    QuadratureOptions opt_;
    std::size_t n_;
    std::vector<ReducedTerm> terms_;
    std::vector<double> radii_;
};

}  // namespace detail

/// M_j = ∫ x^j e^{S(x)} dx. The contour must be admissible for p.
inline IntegralResult moment(const MultiIndex& j, const Polynomial& p, const Contour& contour,
                             const QuadratureOptions& opt = {}) {
    return detail::MomentIntegrand(p, contour, j, opt).integrate();
}

inline IntegralResult moment(const MultiIndex& j, const Polynomial& p, const Contour& contour, double tol) {
    return moment(j, p, contour, QuadratureOptions{tol});
}

/// Z = ∫ e^{S(x)} dx, i.e. M_0.
inline IntegralResult integrate_Z(const Polynomial& p, const Contour& contour, const QuadratureOptions& opt = {}) {
    return moment(MultiIndex(p.support.dimension()), p, contour, opt);
}

inline IntegralResult integrate_Z(const Polynomial& p, const Contour& contour, double tol) {
    return integrate_Z(p, contour, QuadratureOptions{tol});
}

/// Moments keyed by multi-index for one (polynomial, contour, tolerance).
/// Safe for concurrent use: each index is integrated exactly once, later
/// callers wait for the first.
class MomentCache {
public:
    MomentCache(Polynomial p, Contour contour, QuadratureOptions opt)
        : p_(std::move(p)), contour_(std::move(contour)), opt_(opt) {}

    IntegralResult get(const MultiIndex& j) {
        std::promise<IntegralResult> promise;
        std::shared_future<IntegralResult> future;
        bool owner = false;
        {
            std::lock_guard lock(mutex_);
            auto it = entries_.find(j);
            if (it == entries_.end()) {
                future = promise.get_future().share();
                entries_.emplace(j, future);
                owner = true;
            } else {
                future = it->second;
            }
        }
        if (owner) {
            try {
                promise.set_value(moment(j, p_, contour_, opt_));
            } catch (...) {
                promise.set_exception(std::current_exception());
            }
        }
        return future.get();
    }

    /// Integrate all indices (deduplicated) on `threads` workers.
    void prefetch(const std::vector<MultiIndex>& indices, std::size_t threads) {
        parallel_for(indices.size(), threads, [&](std::size_t i) { get(indices[i]); });
    }

    MomentTable table() {
        MomentTable t;
        t.contour = contour_;
        t.coeffs = p_.coeffs;
        std::lock_guard lock(mutex_);
        for (auto& [j, f] : entries_) t.entries.emplace(j, f.get());
        return t;
    }

    const Polynomial& polynomial() const { return p_; }
    const Contour& contour() const { return contour_; }

private:
    Polynomial p_;
    Contour contour_;
    QuadratureOptions opt_;
    std::mutex mutex_;
    std::map<MultiIndex, std::shared_future<IntegralResult>> entries_;
};

/// Moments for the given indices plus Z.
inline MomentTable moment_table(const Polynomial& p, const Contour& contour, std::vector<MultiIndex> indices,
                                const QuadratureOptions& opt = {}, std::size_t threads = 1) {
    MomentCache cache(p, contour, opt);
    indices.push_back(MultiIndex(p.support.dimension()));
    cache.prefetch(indices, threads);
    return cache.table();
}

// ---------------------------------------------------------------------------
// Finite differences in coefficient space

struct FdOptions {
    double h_rel = 1e-5;
    QuadratureOptions quadrature{};
    std::size_t threads = 1;
};

struct FdResult {
    Complex value{};
    int order = 0;
    double step = 0;  // relative step used for the coarse stencil
    bool converged = true;
    std::size_t integrations = 0;
    std::size_t evaluations = 0;
};

/// Relative step for a mixed derivative of total order p. First derivatives
/// use h_rel; higher orders use h_rel^{2/(p+1)} to balance the O(h^4)
/// extrapolated truncation error against eps/h^p rounding amplification.
inline double fd_step(double h_rel, int order) {
    if (order <= 1) return h_rel;
    return std::pow(h_rel, 2.0 / (order + 1));
}

namespace detail {

inline double binomial(int m, int i) {
    double b = 1;
    for (int q = 1; q <= i; ++q) b = b * (m - q + 1) / q;
    return b;
}

}  // namespace detail

/// Mixed central difference of Z with respect to the listed coefficients,
/// with one Richardson level (h, h/2). Each perturbed point is re-certified;
/// a point that loses admissibility raises ContourError naming it.
inline FdResult fd_derivative(const DerivativeMultiset& derivs, const Polynomial& p, const Contour& contour,
                              const FdOptions& opt = {}) {
    FdResult out;
    out.order = total_order(derivs);
    if (derivs.empty()) {
        auto z = integrate_Z(p, contour, opt.quadrature);
        out.value = z.value;
        out.converged = z.converged;
        out.integrations = 1;
        out.evaluations = z.evaluations;
        return out;
    }

    struct Axis {
        std::size_t term;
        int multiplicity;
        double h;
    };
    std::vector<Axis> axes;
    const double h_unit = fd_step(opt.h_rel, out.order);
    out.step = h_unit;
    for (const auto& d : derivs) {
        auto t = p.support.index_of(d.exponent);
        if (!t) throw std::invalid_argument("derivative exponent " + d.exponent.to_string() + " not in support");
        if (d.multiplicity <= 0) throw std::invalid_argument("derivative multiplicity must be positive");
        axes.push_back({*t, d.multiplicity, h_unit * std::max(1.0, std::abs(p.coeffs[*t]))});
    }

    // Stencil points: offsets (m/2 - i) * h per axis, weight (-1)^i C(m, i).
    struct Point {
        std::vector<double> offsets;  // in units of h per axis
        double weight;
    };
    std::vector<Point> stencil{{{}, 1.0}};
    for (const auto& a : axes) {
        std::vector<Point> next;
        for (const auto& pt : stencil)
            for (int i = 0; i <= a.multiplicity; ++i) {
                Point q = pt;
                q.offsets.push_back(0.5 * a.multiplicity - i);
                q.weight *= (i % 2 ? -1.0 : 1.0) * detail::binomial(a.multiplicity, i);
                next.push_back(std::move(q));
            }
        stencil = std::move(next);
    }

    const std::size_t per_level = stencil.size();
    std::vector<IntegralResult> values(2 * per_level);
    std::vector<std::string> errors(2 * per_level);
    parallel_for(2 * per_level, opt.threads, [&](std::size_t idx) {
        const double scale = idx < per_level ? 1.0 : 0.5;
        const auto& pt = stencil[idx % per_level];
        CoefficientVector c = p.coeffs;
        for (std::size_t a = 0; a < axes.size(); ++a) c[axes[a].term] += pt.offsets[a] * scale * axes[a].h;
        Polynomial perturbed(p.support, c);
        auto cert = certify(perturbed, contour);
        if (!cert.admissible) {
            std::ostringstream s;
            s << "contour loses admissibility at perturbed point";
            for (std::size_t a = 0; a < axes.size(); ++a)
                s << " c" << p.support[axes[a].term].to_string() << "+=" << pt.offsets[a] * scale * axes[a].h;
            s << ": " << cert.reason;
            errors[idx] = s.str();
            return;
        }
        values[idx] = integrate_Z(perturbed, contour, opt.quadrature);
    });
    for (const auto& e : errors)
        if (!e.empty()) throw ContourError(e);

    Complex coarse{}, fine{};
    for (std::size_t s = 0; s < per_level; ++s) {
        coarse += stencil[s].weight * values[s].value;
        fine += stencil[s].weight * values[per_level + s].value;
    }
    double denom_coarse = 1, denom_fine = 1;
    for (const auto& a : axes) {
        denom_coarse *= std::pow(a.h, a.multiplicity);
        denom_fine *= std::pow(0.5 * a.h, a.multiplicity);
    }
    coarse /= denom_coarse;
    fine /= denom_fine;
    out.value = (4.0 * fine - coarse) / 3.0;
    for (const auto& v : values) {
        out.converged = out.converged && v.converged;
        out.evaluations += v.evaluations;
    }
    out.integrations = values.size();
    return out;
}

}  // namespace gkz
