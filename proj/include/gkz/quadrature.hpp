#pragma once

// Globally adaptive Gauss-Kronrod (7, 15) quadrature for complex-valued
// integrands on a finite interval.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace gkz::quad {

struct Estimate {
    std::complex<double> value{};
    double error = 0;   // |K15 - G7| plus propagated error of nested integrals
    double l1 = 0;      // K15 estimate of ∫|f|
    bool converged = true;
    std::size_t evaluations = 0;
};

namespace detail {

// Kronrod abscissae on [0, 1) in decreasing order; odd positions are the
// Gauss-Legendre 7-point nodes.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    Estimate est;
    std::size_t order;  // creation order, breaks ties deterministically
};

struct PanelLess {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.est.error != y.est.error) return x.est.error < y.est.error;
        return x.order > y.order;
    }
};

}  // namespace detail

/// One GK15 panel. `f(x)` returns an Estimate for the integrand at x, so
/// nested integrals propagate their own error and mass; a plain integrand
/// returns {value, 0, |value|}.
template <class F>
Estimate gauss_kronrod_15(F&& f, double a, double b) {
    using detail::wg;
    using detail::wgk;
    using detail::xgk;
    const double center = 0.5 * (a + b), half = 0.5 * (b - a);
    Estimate fc = f(center);
    std::complex<double> kron = fc.value * wgk[7];
    std::complex<double> gauss = fc.value * wg[3];
    double l1 = fc.l1 * wgk[7];
    double inner_err = fc.error * wgk[7];
    bool converged = fc.converged;
    std::size_t evals = fc.evaluations;
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * xgk[i];
        Estimate lo = f(center - dx), hi = f(center + dx);
        kron += wgk[i] * (lo.value + hi.value);
        l1 += wgk[i] * (lo.l1 + hi.l1);
        inner_err += wgk[i] * (lo.error + hi.error);
        if (i % 2 == 1) gauss += wg[i / 2] * (lo.value + hi.value);
        converged = converged && lo.converged && hi.converged;
        evals += lo.evaluations + hi.evaluations;
    }
    Estimate e;
    e.value = kron * half;
    e.l1 = l1 * std::abs(half);
    e.error = std::abs((kron - gauss) * half) + inner_err * std::abs(half);
    e.converged = converged;
    e.evaluations = evals;
    return e;
}

struct AdaptiveOptions {
    double rel_tol = 1e-9;
    std::size_t initial_panels = 4;
    std::size_t max_panels = 400;
};

/// Bisect the panel with the largest error until the total error is at most
/// rel_tol * ∫|f|. The refinement sequence depends only on the integrand and
/// the interval, so a tighter tolerance continues the same path.
template <class F>
Estimate integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt) {
    std::vector<detail::Panel> panels;
    std::size_t order = 0, evaluations = 0;
    const double width = (b - a) / static_cast<double>(opt.initial_panels);
    for (std::size_t p = 0; p < opt.initial_panels; ++p) {
        const double lo = a + width * p, hi = p + 1 == opt.initial_panels ? b : a + width * (p + 1);
        panels.push_back({lo, hi, gauss_kronrod_15(f, lo, hi), order++});
        evaluations += panels.back().est.evaluations;
    }
    auto totals = [&panels] {
        Estimate s;
        for (const auto& p : panels) {
            s.value += p.est.value;
            s.error += p.est.error;
            s.l1 += p.est.l1;
            s.converged = s.converged && p.est.converged;
        }
        return s;
    };
    Estimate s = totals();
    while (s.error > opt.rel_tol * s.l1 && panels.size() < opt.max_panels) {
        auto worst = std::max_element(panels.begin(), panels.end(), detail::PanelLess{});
        const double lo = worst->a, hi = worst->b, mid = 0.5 * (lo + hi);
        detail::Panel left{lo, mid, gauss_kronrod_15(f, lo, mid), order++};
        detail::Panel right{mid, hi, gauss_kronrod_15(f, mid, hi), order++};
        evaluations += left.est.evaluations + right.est.evaluations;
        *worst = left;
        panels.push_back(right);
        std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
        s = totals();
    }
    s.evaluations = evaluations;
    s.converged = s.converged && s.error <= opt.rel_tol * s.l1;
    return s;
}

}  // namespace gkz::quad
