#pragma once

// Test-only oracles, independent of the library's computational paths:
// adaptive quadrature on the line, brute-force scans, closed-form spectra.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "tilab/field.hpp"
#include "tilab/ops.hpp"

namespace oracle {

// Adaptive Simpson on [a, b] to absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13, int depth = 30) {
    const double c = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fc = f(c);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double x0, double x2, double f0, double f1, double f2, double eps, int d) -> double {
        const double x1l = 0.5 * (x0 + 0.5 * (x0 + x2));
        const double xm = 0.5 * (x0 + x2);
        const double x1r = 0.5 * (xm + x2);
        const double fl = f(x1l), fr = f(x1r);
        const double h = x2 - x0;
        const double whole = h / 6.0 * (f0 + 4.0 * f1 + f2);
        const double left = h / 12.0 * (f0 + 4.0 * fl + f1);
        const double right = h / 12.0 * (f1 + 4.0 * fr + f2);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * eps)
            return left + right + (left + right - whole) / 15.0;
        return rec(x0, xm, f0, fl, f1, 0.5 * eps, d - 1) + rec(xm, x2, f1, fr, f2, 0.5 * eps, d - 1);
    };
    return rec(a, b, fa, fc, fb, tol, depth);
}

// Quadrature of a decaying line integrand over (-inf, inf), truncated where
// the tails are below the tolerance. Fixed panels stop the adaptive rule
// from sampling straight past a localized bump.
inline double line_integral(const std::function<double(double)>& f, double cut = 60.0,
                            double tol = 1e-13) {
    double total = 0.0;
    const double panel = 2.5;
    for (double a = -cut; a < cut - 1e-12; a += panel)
        total += adaptive_simpson(f, a, std::min(a + panel, cut), tol * panel / (2.0 * cut));
    return total;
}

// Deterministic pseudo-random band-limited field: modes below the 2/3
// cutoff only, fixed seed, x-mean removed from every transverse mode.
inline tilab::Field random_band_limited(const tilab::Grid2D& g, unsigned seed,
                                        bool mean_free = true, bool real_valued = true) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    tilab::SpectralField F(g, real_valued ? tilab::FieldKind::Real : tilab::FieldKind::Complex);
    const long cutx = static_cast<long>(g.Nx) / 3 - 1;
    const long cuty = static_cast<long>(g.Ny) / 3 - 1;
    for (std::size_t i = 0; i < g.Nx; ++i)
        for (std::size_t j = 0; j < g.Ny; ++j) {
            const long nx = g.xmode(i), my = g.ymode(j);
            if (std::labs(nx) > cutx || std::labs(my) > cuty) continue;
            if (mean_free && nx == 0 && my != 0) continue;
            const double decay = 1.0 / (1.0 + 0.25 * (nx * nx + my * my));
            F.coeff[i * g.Ny + j] = tilab::cplx(unif(rng), unif(rng)) * decay;
        }
    if (real_valued) {
        // enforce Hermitian symmetry: c(-n,-m) = conj(c(n,m))
        for (std::size_t i = 0; i < g.Nx; ++i)
            for (std::size_t j = 0; j < g.Ny; ++j) {
                const std::size_t i2 = (g.Nx - i) % g.Nx;
                const std::size_t j2 = (g.Ny - j) % g.Ny;
                if (i * g.Ny + j < i2 * g.Ny + j2) continue;
                F.coeff[i * g.Ny + j] = std::conj(F.coeff[i2 * g.Ny + j2]);
            }
        F.coeff[0] = tilab::cplx(F.coeff[0].real(), 0.0);
    }
    return tilab::transform_inverse(F);
}

// Plain O(N^2) Fourier sum at one point, the slow way.
inline tilab::cplx direct_fourier_eval(const tilab::SpectralField& F, double x, double y) {
    tilab::cplx s(0.0);
    const tilab::Grid2D& g = F.grid;
    for (std::size_t i = 0; i < g.Nx; ++i)
        for (std::size_t j = 0; j < g.Ny; ++j)
            s += F.coeff[i * g.Ny + j] *
                 std::polar(1.0, g.xi(i) * x + g.eta_y(j) * y / 1.0);
    return s;
}

} // namespace oracle
