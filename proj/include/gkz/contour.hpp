#pragma once

// Product-of-ray-pairs contours and their decay certificates.
//
// Each variable x_j runs from infinity*e^{i*minus} through 0 to
// infinity*e^{i*plus}. The contour is admissible for S when Re S -> -inf
// along every asymptotic direction of the product, which is certified per
// orthant (choice of one ray per variable) by weighted-degree dominance:
// every variable needs a pure power x_j^{D_j} whose rotated coefficient has
// negative real part, every other monomial must have weighted degree
// sum_j k_j/D_j <= 1, and the weighted-degree-1 leading form must be
// negative on the weighted unit simplex. A numeric probe along sampled
// directions at growing radius backs the algebraic check.

#include "gkz/support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gkz {

enum class ContourKind { RealAxes, RotatedRays };

struct RayPair {
    double minus = std::numbers::pi;
    double plus = 0.0;

    friend bool operator==(const RayPair&, const RayPair&) = default;
};

struct Contour {
    ContourKind kind = ContourKind::RealAxes;
    std::vector<RayPair> angles;

    static Contour real_axes(std::size_t n) { return {ContourKind::RealAxes, std::vector<RayPair>(n)}; }
    static Contour rays(std::vector<RayPair> angles) {
        for (const auto& r : angles)
            if (std::abs(std::remainder(r.minus - r.plus, 2 * std::numbers::pi)) < 1e-12)
                throw std::invalid_argument("contour rays must be distinct");
        const bool real = std::all_of(angles.begin(), angles.end(), [](const RayPair& r) {
            return r == RayPair{};
        });
        return {real ? ContourKind::RealAxes : ContourKind::RotatedRays, std::move(angles)};
    }

    std::size_t dimension() const noexcept { return angles.size(); }
    friend bool operator==(const Contour&, const Contour&) = default;
};

inline const char* to_string(ContourKind k) { return k == ContourKind::RealAxes ? "real_axes" : "rotated_rays"; }

/// No admissible contour in the search class; not a statement about Z.
class ContourError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AdmissibilityCertificate {
    bool admissible = false;
    double margin = 0;  // min over orthants of the relative decay margin
    std::string reason;
};

/// Requested contour: automatic search or fixed angles.
struct ContourPolicy {
    bool automatic = true;
    std::vector<RayPair> angles;  // one pair, broadcast, or one per variable

    static ContourPolicy auto_search() { return {}; }
    static ContourPolicy fixed(std::vector<RayPair> a) { return {false, std::move(a)}; }
};

namespace detail {

constexpr double kDecayEps = 1e-9;

// Points u on the simplex sum u_j = 1, u_j >= 0.
inline std::vector<std::vector<double>> simplex_grid(std::size_t n) {
    std::vector<std::vector<double>> pts;
    if (n == 1) return {{1.0}};
    const int m = n == 2 ? 400 : (n == 3 ? 60 : 12);
    std::vector<int> c(n, 0);
    // Enumerate compositions of m into n parts.
    std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
        if (j + 1 == n) {
            c[j] = left;
            std::vector<double> u(n);
            for (std::size_t i = 0; i < n; ++i) u[i] = static_cast<double>(c[i]) / m;
            pts.push_back(std::move(u));
            return;
        }
        for (int v = 0; v <= left; ++v) {
            c[j] = v;
            rec(j + 1, left - v);
        }
    };
    rec(0, m);
    return pts;
}

inline std::vector<std::vector<double>> sphere_directions(std::size_t n) {
    auto pts = simplex_grid(n);
    // Thin out and map to the unit sphere in the positive orthant.
    std::vector<std::vector<double>> dirs;
    const std::size_t stride = std::max<std::size_t>(1, pts.size() / 60);
    for (std::size_t p = 0; p < pts.size(); p += stride) {
        auto u = pts[p];
        double nrm = 0;
        for (auto& x : u) {
            x = std::sqrt(x);
            nrm += x * x;
        }
        for (auto& x : u) x /= std::sqrt(nrm);
        dirs.push_back(std::move(u));
    }
    return dirs;
}

inline double real_part_at(const Polynomial& p, const std::vector<double>& radii, const std::vector<double>& phases) {
    std::vector<Complex> x(radii.size());
    for (std::size_t j = 0; j < radii.size(); ++j) x[j] = std::polar(radii[j], phases[j]);
    return p.evaluate(x).real();
}

struct OrthantCheck {
    bool ok = false;
    double margin = 0;
    std::string reason;
};

inline OrthantCheck certify_orthant(const Polynomial& p, const std::vector<double>& phases) {
    const auto& supp = p.support;
    const std::size_t n = supp.dimension();
    std::vector<Complex> rotated(supp.size());
    for (std::size_t t = 0; t < supp.size(); ++t) {
        double phase = 0;
        for (std::size_t j = 0; j < n; ++j) phase += supp[t][j] * phases[j];
        rotated[t] = p.coeffs[t] * std::polar(1.0, phase);
    }

    std::vector<int> lead_degree(n, 0);
    std::vector<std::size_t> lead_term(n, 0);
    for (std::size_t t = 0; t < supp.size(); ++t) {
        if (p.coeffs[t] == Complex{}) continue;
        const auto& k = supp[t];
        std::size_t nonzero = 0, axis = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (k[j] != 0) {
                ++nonzero;
                axis = j;
            }
        if (nonzero == 1 && k[axis] > lead_degree[axis]) {
            lead_degree[axis] = k[axis];
            lead_term[axis] = t;
        }
    }
    OrthantCheck out;
    for (std::size_t j = 0; j < n; ++j) {
        if (lead_degree[j] == 0) {
            out.reason = "x" + std::to_string(j + 1) + " has no pure power term";
            return out;
        }
        const auto t = lead_term[j];
        if (rotated[t].real() >= -kDecayEps * std::abs(p.coeffs[t])) {
            std::ostringstream s;
            s << "leading term of x" << j + 1 << " does not decay along ray angle " << phases[j];
            out.reason = s.str();
            return out;
        }
    }

    std::vector<std::size_t> leading;
    for (std::size_t t = 0; t < supp.size(); ++t) {
        if (p.coeffs[t] == Complex{} || supp[t].is_zero()) continue;
        double w = 0;
        for (std::size_t j = 0; j < n; ++j) w += static_cast<double>(supp[t][j]) / lead_degree[j];
        if (w > 1 + 1e-12) {
            out.reason = "monomial " + supp[t].to_string() + " dominates the pure powers";
            return out;
        }
        if (w > 1 - 1e-12) leading.push_back(t);
    }

    double scale = 0;
    for (auto t : leading) scale += std::abs(p.coeffs[t]);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& u : simplex_grid(n)) {
        double v = 0;
        for (auto t : leading) {
            double mono = 1;
            for (std::size_t j = 0; j < n; ++j)
                if (supp[t][j]) mono *= std::pow(u[j], static_cast<double>(supp[t][j]) / lead_degree[j]);
            v += rotated[t].real() * mono;
        }
        worst = std::max(worst, v);
    }
    out.margin = -worst / scale;
    if (out.margin <= kDecayEps) {
        out.reason = "leading form is not negative on the orthant";
        return out;
    }

    // Numeric probe at R = 10 * s^{-1/deg}, doubling out to 64 R.
    double s = std::numeric_limits<double>::infinity();
    int deg = 0;
    for (std::size_t j = 0; j < n; ++j) {
        s = std::min(s, std::abs(p.coeffs[lead_term[j]]));
        deg = std::max(deg, lead_degree[j]);
    }
    const double radius = 10.0 * std::pow(s, -1.0 / deg);
    const double at_origin = real_part_at(p, std::vector<double>(n, 0.0), phases);
    for (const auto& dir : sphere_directions(n)) {
        std::vector<double> r(n);
        double prev = 0;
        for (int m = 0; m <= 6; ++m) {
            const double rad = radius * std::ldexp(1.0, m);
            for (std::size_t j = 0; j < n; ++j) r[j] = rad * dir[j];
            const double v = real_part_at(p, r, phases);
            if (m == 6 && (v >= at_origin - 1.0 || v >= prev)) {
                out.reason = "numeric probe: Re S does not decrease at large radius";
                return out;
            }
            prev = v;
        }
    }
    out.ok = true;
    return out;
}

}  // namespace detail

/// Decay certificate for a product contour, checked on all 2^n orthants.
inline AdmissibilityCertificate certify(const Polynomial& p, const Contour& contour) {
    const std::size_t n = p.support.dimension();
    if (contour.dimension() != n) throw std::invalid_argument("contour dimension does not match polynomial");
    AdmissibilityCertificate cert{true, std::numeric_limits<double>::infinity(), ""};
    std::vector<double> phases(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        for (std::size_t j = 0; j < n; ++j)
            phases[j] = (mask >> j & 1) ? contour.angles[j].plus : contour.angles[j].minus;
        auto check = detail::certify_orthant(p, phases);
        if (!check.ok) return {false, 0.0, check.reason};
        cert.margin = std::min(cert.margin, check.margin);
    }
    return cert;
}

namespace detail {

// Rotation candidates phi (rays phi + pi and phi) for one variable, ordered
// by decay of its leading pure power, then by |phi|, positive first.
inline std::vector<double> rotation_candidates(const Polynomial& p, std::size_t j, std::size_t keep) {
    int degree = 0;
    Complex lead{};
    for (std::size_t t = 0; t < p.support.size(); ++t) {
        const auto& k = p.support[t];
        if (p.coeffs[t] == Complex{} || k[j] <= degree || k.total_degree() != k[j]) continue;
        degree = k[j];
        lead = p.coeffs[t];
    }
    if (degree == 0) return {};
    struct Scored {
        double phi, score;
    };
    std::vector<Scored> scored;
    constexpr int steps = 24;
    for (int s = -steps + 1; s <= steps; ++s) {
        const double phi = s * std::numbers::pi / steps;
        double score = std::numeric_limits<double>::infinity();
        for (double theta : {phi, phi + std::numbers::pi})
            score = std::min(score, -(lead * std::polar(1.0, degree * theta)).real() / std::abs(lead));
        if (score > 0.05) scored.push_back({phi, score});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (std::abs(a.score - b.score) > 1e-12) return a.score > b.score;
        if (std::abs(std::abs(a.phi) - std::abs(b.phi)) > 1e-12) return std::abs(a.phi) < std::abs(b.phi);
        return a.phi > b.phi;
    });
    std::vector<double> out;
    for (std::size_t i = 0; i < scored.size() && i < keep; ++i) out.push_back(scored[i].phi);
    return out;
}

inline RayPair line_at(double phi) {
    double minus = phi + std::numbers::pi;
    if (minus > std::numbers::pi) minus -= 2 * std::numbers::pi;
    return {minus, phi};
}

}  // namespace detail

/// Contour with a decay certificate. The automatic policy tries the real
/// axes, then rotated lines per variable on a pi/24 grid. Throws
/// ContourError when nothing in the search class is admissible.
inline Contour admissible_contour(const Polynomial& p, const ContourPolicy& policy) {
    const std::size_t n = p.support.dimension();
    if (!policy.automatic) {
        std::vector<RayPair> angles = policy.angles;
        if (angles.size() == 1 && n > 1) angles.assign(n, angles.front());
        if (angles.size() != n) throw ContourError("contour angle count does not match dimension");
        Contour c = Contour::rays(angles);
        auto cert = certify(p, c);
        if (!cert.admissible) throw ContourError("explicit contour not admissible: " + cert.reason);
        return c;
    }

    Contour real = Contour::real_axes(n);
    auto cert = certify(p, real);
    if (cert.admissible) return real;

    constexpr std::size_t keep = 4;
    std::vector<std::vector<double>> cands(n);
    for (std::size_t j = 0; j < n; ++j) {
        cands[j] = detail::rotation_candidates(p, j, keep);
        if (cands[j].empty())
            throw ContourError("no admissible contour in search class: x" + std::to_string(j + 1) +
                               " has no leading power that decays along a rotated line (" + cert.reason + ")");
    }
    // Combinations ordered by total rank, then lexicographically.
    std::vector<std::vector<std::size_t>> combos;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        combos.push_back(idx);
        std::size_t j = 0;
        while (j < n && ++idx[j] == cands[j].size()) idx[j++] = 0;
        if (j == n) break;
    }
    std::stable_sort(combos.begin(), combos.end(), [](const auto& a, const auto& b) {
        std::size_t sa = 0, sb = 0;
        for (auto x : a) sa += x;
        for (auto x : b) sb += x;
        if (sa != sb) return sa < sb;
        return a < b;
    });
    for (const auto& combo : combos) {
        std::vector<RayPair> angles(n);
        for (std::size_t j = 0; j < n; ++j) angles[j] = detail::line_at(cands[j][combo[j]]);
        Contour c = Contour::rays(angles);
        if (certify(p, c).admissible) return c;
    }
    throw ContourError("no admissible contour in search class (" + cert.reason + ")");
}

}  // namespace gkz
