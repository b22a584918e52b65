#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tilab/errors.hpp"

namespace tilab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Uniform grid on the x-line truncated to the periodic box [-X, X).
// Wavenumbers are xi_n = pi*n/X for n in [-Nx/2, Nx/2).
struct Grid1D {
    std::size_t Nx = 0;
    double X = 0.0;

    Grid1D() = default;
    Grid1D(std::size_t nx, double halfperiod) : Nx(nx), X(halfperiod) {
        if (!is_power_of_two(Nx)) throw DomainError("Grid1D: Nx must be a power of two");
        if (!(X > 0.0)) throw DomainError("Grid1D: X must be positive");
    }

    double dx() const { return 2.0 * X / static_cast<double>(Nx); }
    double x(std::size_t i) const { return -X + dx() * static_cast<double>(i); }

    // Signed mode integer for storage index i (FFT layout: 0,1,...,-Nx/2,...,-1).
    long mode(std::size_t i) const {
        const long n = static_cast<long>(i);
        const long half = static_cast<long>(Nx) / 2;
        return n < half ? n : n - static_cast<long>(Nx);
    }
    double xi(std::size_t i) const { return kPi * static_cast<double>(mode(i)) / X; }

    std::vector<double> nodes() const {
        std::vector<double> v(Nx);
        for (std::size_t i = 0; i < Nx; ++i) v[i] = x(i);
        return v;
    }

    bool operator==(const Grid1D& o) const { return Nx == o.Nx && X == o.X; }
};

// Discrete cylinder [-X, X) x [0, 2*pi*L). y-wavenumbers are m/L for
// integer m in [-Ny/2, Ny/2), matching the e^{-i(x xi + y k/L)} convention.
struct Grid2D {
    std::size_t Nx = 0;
    std::size_t Ny = 0;
    double X = 0.0;
    double L = 0.0;

    Grid2D() = default;
    Grid2D(std::size_t nx, std::size_t ny, double halfperiod, double period_param)
        : Nx(nx), Ny(ny), X(halfperiod), L(period_param) {
        if (!is_power_of_two(Nx) || !is_power_of_two(Ny))
            throw DomainError("Grid2D: Nx and Ny must be powers of two");
        if (!(X > 0.0)) throw DomainError("Grid2D: X must be positive");
        if (!(L > 0.0)) throw DomainError("Grid2D: L must be positive");
    }

    std::size_t size() const { return Nx * Ny; }
    double dx() const { return 2.0 * X / static_cast<double>(Nx); }
    double dy() const { return 2.0 * kPi * L / static_cast<double>(Ny); }
    double x(std::size_t i) const { return -X + dx() * static_cast<double>(i); }
    double y(std::size_t j) const { return dy() * static_cast<double>(j); }

    Grid1D xline() const { return Grid1D(Nx, X); }

    long xmode(std::size_t i) const {
        const long n = static_cast<long>(i);
        const long half = static_cast<long>(Nx) / 2;
        return n < half ? n : n - static_cast<long>(Nx);
    }
    long ymode(std::size_t j) const {
        const long m = static_cast<long>(j);
        const long half = static_cast<long>(Ny) / 2;
        return m < half ? m : m - static_cast<long>(Ny);
    }
    double xi(std::size_t i) const { return kPi * static_cast<double>(xmode(i)) / X; }
    // transverse wavenumber k/L for storage row j
    double eta_y(std::size_t j) const { return static_cast<double>(ymode(j)) / L; }

    bool operator==(const Grid2D& o) const {
        return Nx == o.Nx && Ny == o.Ny && X == o.X && L == o.L;
    }
};

} // namespace tilab
