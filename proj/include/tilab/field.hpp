#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "tilab/errors.hpp"
#include "tilab/fft.hpp"
#include "tilab/grid.hpp"

namespace tilab {

enum class FieldKind { Real, Complex };

// Physical-space samples on a Grid2D, row-major [ix*Ny + iy].
// Treated as immutable after construction: every operation returns a new
// object, so fields can be shared freely across threads.
struct Field {
    Grid2D grid;
    FieldKind kind = FieldKind::Real;
    std::vector<cplx> values;

    Field() = default;
    Field(const Grid2D& g, FieldKind k) : grid(g), kind(k), values(g.size(), cplx(0.0)) {}

    static Field zero(const Grid2D& g, FieldKind k = FieldKind::Real) { return Field(g, k); }

    // Sample a scalar function of (x, y).
    static Field sample(const Grid2D& g, FieldKind k, const std::function<cplx(double, double)>& f) {
        Field out(g, k);
        for (std::size_t i = 0; i < g.Nx; ++i)
            for (std::size_t j = 0; j < g.Ny; ++j) out.values[i * g.Ny + j] = f(g.x(i), g.y(j));
        return out;
    }

    cplx at(std::size_t ix, std::size_t iy) const { return values[ix * grid.Ny + iy]; }
    std::size_t size() const { return values.size(); }
};

// Spectral twin of Field: coefficients c_{n,m} in
//   u(x,y) = sum c_{n,m} e^{i (xi_n x + m y / L)},
// stored in FFT layout, row-major [ix*Ny + iy].
struct SpectralField {
    Grid2D grid;
    FieldKind kind = FieldKind::Real;
    std::vector<cplx> coeff;

    SpectralField() = default;
    SpectralField(const Grid2D& g, FieldKind k) : grid(g), kind(k), coeff(g.size(), cplx(0.0)) {}

    cplx at(std::size_t ix, std::size_t iy) const { return coeff[ix * grid.Ny + iy]; }
    std::size_t size() const { return coeff.size(); }
};

// One transverse mode: a complex profile over the x-line tagged with its
// integer mode index j (the e^{i j y / L} factor is implicit).
struct Profile1D {
    Grid1D grid;
    long mode = 0;
    std::vector<cplx> values;

    Profile1D() = default;
    Profile1D(const Grid1D& g, long j) : grid(g), mode(j), values(g.Nx, cplx(0.0)) {}
    Profile1D(const Grid1D& g, long j, std::vector<cplx> v) : grid(g), mode(j), values(std::move(v)) {
        if (values.size() != g.Nx) throw SizeMismatch("Profile1D: value count != Nx");
    }

    static Profile1D sample(const Grid1D& g, long j, const std::function<cplx(double)>& f) {
        Profile1D p(g, j);
        for (std::size_t i = 0; i < g.Nx; ++i) p.values[i] = f(g.x(i));
        return p;
    }

    std::size_t size() const { return values.size(); }
};

} // namespace tilab
