#pragma once

// Test-only oracles, independent of the library implementation paths they
// check. Values derived here are frozen into assertions at runtime.

#include <cmath>
#include <numbers>
#include <random>

#include "convexopt/geometry.hpp"

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

// First zero of the Bessel function J0 (Dirichlet ground state of the disk
// has lambda_1 = j01^2).
inline constexpr double kBesselJ01 = 2.404825557695773;

/// Torsional rigidity of the unit square from the double sine series of
/// -Lap u = 1: tau = sum over odd m,n of 64 / (pi^6 m^2 n^2 (m^2+n^2)).
inline double torsion_unit_square_series() {
    double s = 0.0;
    for (int m = 1; m < 400; m += 2)
        for (int n = 1; n < 400; n += 2)
            s += 64.0 / (std::pow(kPi, 6) * m * m * n * n * (m * m + n * n));
    return s;
}

/// Area of the circular cap {y > 1 - delta} of the unit disk.
inline double unit_disk_cap_area(double delta) {
    const double theta = std::acos(1.0 - delta);
    return theta - std::sin(theta) * std::cos(theta);
}

/// Plain Monte-Carlo estimate of V_1(unit square) = iint |x-y|^-1.
inline double mc_riesz_unit_square(uint64_t seed, long pairs) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double acc = 0.0;
    for (long i = 0; i < pairs; ++i) {
        const double dx = u(rng) - u(rng);
        const double dy = u(rng) - u(rng);
        acc += 1.0 / std::sqrt(dx * dx + dy * dy);
    }
    return acc / static_cast<double>(pairs);
}

/// Area of rect [x0,x1]x[y0,y1] intersected with disk B(c, r) by 1D
/// integration of the exact y-overlap (Simpson on a fine x grid).
inline double rect_disk_intersection_quadrature(double x0, double x1, double y0, double y1,
                                                const convexopt::Vec2& c, double r, int nx = 4000) {
    auto overlap = [&](double x) {
        const double dx = x - c.x();
        if (std::abs(dx) >= r) return 0.0;
        const double half = std::sqrt(r * r - dx * dx);
        const double lo = std::max(y0, c.y() - half);
        const double hi = std::min(y1, c.y() + half);
        return std::max(0.0, hi - lo);
    };
    // Simpson rule (nx even).
    const double hx = (x1 - x0) / nx;
    double s = overlap(x0) + overlap(x1);
    for (int i = 1; i < nx; ++i) s += overlap(x0 + i * hx) * ((i % 2) ? 4.0 : 2.0);
    return s * hx / 3.0;
}

/// Brute-force Fraenkel asymmetry of the rectangle [-1,1]x[-0.5,0.5]:
/// dense center grid, intersection areas by the quadrature above.
inline double fraenkel_rect_2x1_oracle() {
    const double A = 2.0;
    const double r = std::sqrt(A / kPi);
    double best = 2.0;
    for (int ix = -20; ix <= 20; ++ix) {
        for (int iy = -20; iy <= 20; ++iy) {
            const convexopt::Vec2 c(ix * 0.01, iy * 0.01);
            const double inter = rect_disk_intersection_quadrature(-1, 1, -0.5, 0.5, c, r);
            best = std::min(best, 2.0 * (1.0 - inter / A));
        }
    }
    return best;
}

} // namespace oracles
