#include "tilab/ops.hpp"

#include <algorithm>
#include <cmath>

namespace tilab {

namespace {

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* who) {
    if (!(a == b)) throw SizeMismatch(std::string(who) + ": grids differ");
}

// (i xi)^order with the Nyquist column zeroed for odd orders (the odd
// symbol is not representable on the asymmetric mode).
cplx dx_symbol(double xi, bool nyquist, int order) {
    if (order % 2 == 1 && nyquist) return cplx(0.0);
    cplx s(0.0, xi);
    cplx out(1.0);
    for (int k = 0; k < order; ++k) out *= s;
    return out;
}

} // namespace

// The x-axis starts at -X, so the raw DFT of row-major samples carries a
// (-1)^n phase relative to the e^{i xi_n x} basis. The Field <-> spectral
// boundary absorbs it; coefficients in SpectralField multiply plane waves
// in the actual coordinates.
SpectralField transform_forward(const Field& f) {
    if (f.values.size() != f.grid.size()) throw SizeMismatch("transform_forward: bad value count");
    SpectralField F(f.grid, f.kind);
    fft::forward_2d(f.values.data(), F.coeff.data(), f.grid.Nx, f.grid.Ny);
    const Grid2D& g = f.grid;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        if (g.xmode(i) % 2 == 0) continue;
        for (std::size_t j = 0; j < g.Ny; ++j) F.coeff[i * g.Ny + j] = -F.coeff[i * g.Ny + j];
    }
    return F;
}

Field transform_inverse(const SpectralField& F) {
    if (F.coeff.size() != F.grid.size()) throw SizeMismatch("transform_inverse: bad value count");
    const Grid2D& g = F.grid;
    std::vector<cplx> raw = F.coeff;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        if (g.xmode(i) % 2 == 0) continue;
        for (std::size_t j = 0; j < g.Ny; ++j) raw[i * g.Ny + j] = -raw[i * g.Ny + j];
    }
    Field f(F.grid, F.kind);
    fft::inverse_2d(raw.data(), f.values.data(), F.grid.Nx, F.grid.Ny);
    return f;
}

Field d_dx(const Field& f, int order) {
    if (order < 1 || order > 3) throw DomainError("d_dx: order must be 1, 2 or 3");
    SpectralField F = transform_forward(f);
    const Grid2D& g = f.grid;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const bool nyq = (g.xmode(i) == -static_cast<long>(g.Nx) / 2);
        const cplx s = dx_symbol(g.xi(i), nyq, order);
        for (std::size_t j = 0; j < g.Ny; ++j) F.coeff[i * g.Ny + j] *= s;
    }
    return transform_inverse(F);
}

Field d_dy(const Field& f, int order) {
    if (order < 1 || order > 3) throw DomainError("d_dy: order must be 1, 2 or 3");
    SpectralField F = transform_forward(f);
    const Grid2D& g = f.grid;
    for (std::size_t j = 0; j < g.Ny; ++j) {
        const bool nyq = (g.ymode(j) == -static_cast<long>(g.Ny) / 2);
        const cplx s = dx_symbol(g.eta_y(j), nyq, order);
        for (std::size_t i = 0; i < g.Nx; ++i) F.coeff[i * g.Ny + j] *= s;
    }
    return transform_inverse(F);
}

Field laplacian(const Field& f) {
    SpectralField F = transform_forward(f);
    const Grid2D& g = f.grid;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const double xi2 = g.xi(i) * g.xi(i);
        for (std::size_t j = 0; j < g.Ny; ++j) {
            const double ky = g.eta_y(j);
            F.coeff[i * g.Ny + j] *= -(xi2 + ky * ky);
        }
    }
    return transform_inverse(F);
}

double nonzero_mode_xmean(const Field& f) {
    SpectralField F = transform_forward(f);
    const Grid2D& g = f.grid;
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < g.Ny; ++j) scale = std::max(scale, std::abs(F.coeff[j]));
    for (const cplx& c : F.coeff) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    for (std::size_t j = 0; j < g.Ny; ++j) {
        if (g.ymode(j) == 0) continue;
        worst = std::max(worst, std::abs(F.coeff[j])); // ix = 0 row holds xi = 0
    }
    return worst / scale;
}

Field antideriv_x(const Field& f) {
    SpectralField F = transform_forward(f);
    const Grid2D& g = f.grid;
    // precondition: no x-mean on nonzero transverse modes
    double scale = 0.0;
    for (const cplx& c : F.coeff) scale = std::max(scale, std::abs(c));
    for (std::size_t j = 0; j < g.Ny; ++j) {
        if (g.ymode(j) == 0) continue;
        if (scale > 0.0 && std::abs(F.coeff[j]) > kZeroModeTol * scale)
            throw ZeroModeViolation("antideriv_x: x-mean on transverse mode m=" +
                                    std::to_string(g.ymode(j)));
    }
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const double xi = g.xi(i);
        const bool nyq = (g.xmode(i) == -static_cast<long>(g.Nx) / 2);
        const cplx s = (g.xmode(i) == 0 || nyq) ? cplx(0.0) : 1.0 / cplx(0.0, xi);
        for (std::size_t j = 0; j < g.Ny; ++j) F.coeff[i * g.Ny + j] *= s;
    }
    return transform_inverse(F);
}

Field project_nonzero_y(const Field& f) {
    Field out = f;
    const Grid2D& g = f.grid;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        cplx mean(0.0);
        for (std::size_t j = 0; j < g.Ny; ++j) mean += f.values[i * g.Ny + j];
        mean /= static_cast<double>(g.Ny);
        for (std::size_t j = 0; j < g.Ny; ++j) out.values[i * g.Ny + j] -= mean;
    }
    return out;
}

double norm_l2(const Field& f) {
    double s = 0.0;
    for (const cplx& v : f.values) s += std::norm(v);
    return std::sqrt(s * f.grid.dx() * f.grid.dy());
}

double norm_l2(const SpectralField& F) {
    double s = 0.0;
    for (const cplx& c : F.coeff) s += std::norm(c);
    const double box = 2.0 * F.grid.X * 2.0 * kPi * F.grid.L;
    return std::sqrt(s * box);
}

cplx inner(const Field& f, const Field& g) {
    require_same_grid(f.grid, g.grid, "inner");
    cplx s(0.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
    return s * f.grid.dx() * f.grid.dy();
}

Norms norms(const Field& f, int s) {
    if (s < 0) throw DomainError("norms: s must be nonnegative");
    SpectralField F = transform_forward(f);
    const Grid2D& g = f.grid;
    const double box = 2.0 * g.X * 2.0 * kPi * g.L;

    double l2 = 0.0, hs = 0.0, z2 = 0.0;
    double scale = 0.0;
    for (const cplx& c : F.coeff) scale = std::max(scale, std::abs(c));
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const double xi = g.xi(i);
        for (std::size_t j = 0; j < g.Ny; ++j) {
            const double ky = g.eta_y(j);
            const double a2 = std::norm(F.coeff[i * g.Ny + j]);
            l2 += a2;
            const double w = 1.0 + xi * xi + ky * ky;
            double ws = 1.0;
            for (int p = 0; p < s; ++p) ws *= w;
            hs += ws * a2;
            if (g.xmode(i) == 0) {
                if (g.ymode(j) != 0) {
                    if (scale > 0.0 && std::sqrt(a2) > kZeroModeTol * scale)
                        throw ZeroModeViolation("norms: Z2 undefined, x-mean on mode m=" +
                                                std::to_string(g.ymode(j)));
                    continue; // mean-free to tolerance; contributes nothing
                }
                z2 += a2; // weight 1 at (0,0)
            } else {
                const double wz = 1.0 + xi * xi + (ky / xi) * (ky / xi);
                z2 += wz * wz * a2;
            }
        }
    }
    Norms out;
    out.l2 = std::sqrt(l2 * box);
    out.hs = std::sqrt(hs * box);
    out.z2 = std::sqrt(z2 * box);
    return out;
}

SpectralField dealias(const SpectralField& F) {
    SpectralField out = F;
    const Grid2D& g = F.grid;
    const long cutx = static_cast<long>(g.Nx) / 3;
    const long cuty = static_cast<long>(g.Ny) / 3;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const bool killx = std::labs(g.xmode(i)) > cutx;
        for (std::size_t j = 0; j < g.Ny; ++j) {
            if (killx || std::labs(g.ymode(j)) > cuty) out.coeff[i * g.Ny + j] = cplx(0.0);
        }
    }
    return out;
}

Field dealiased_product(const Field& f, const Field& g) {
    require_same_grid(f.grid, g.grid, "dealiased_product");
    Field prod(f.grid, (f.kind == FieldKind::Real && g.kind == FieldKind::Real) ? FieldKind::Real
                                                                                : FieldKind::Complex);
    for (std::size_t i = 0; i < prod.values.size(); ++i) prod.values[i] = f.values[i] * g.values[i];
    return transform_inverse(dealias(transform_forward(prod)));
}

Field add(const Field& f, const Field& g) {
    require_same_grid(f.grid, g.grid, "add");
    Field out = f;
    if (g.kind == FieldKind::Complex) out.kind = FieldKind::Complex;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += g.values[i];
    return out;
}

Field sub(const Field& f, const Field& g) {
    require_same_grid(f.grid, g.grid, "sub");
    Field out = f;
    if (g.kind == FieldKind::Complex) out.kind = FieldKind::Complex;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= g.values[i];
    return out;
}

Field scale(const Field& f, cplx a) {
    Field out = f;
    if (a.imag() != 0.0) out.kind = FieldKind::Complex;
    for (cplx& v : out.values) v *= a;
    return out;
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (const cplx& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double max_imag(const Field& f) {
    double m = 0.0;
    for (const cplx& v : f.values) m = std::max(m, std::abs(v.imag()));
    return m;
}

SpectralField clean_zero_modes(const SpectralField& F) {
    SpectralField out = F;
    const Grid2D& g = F.grid;
    for (std::size_t j = 0; j < g.Ny; ++j)
        if (g.ymode(j) != 0) out.coeff[j] = cplx(0.0);
    return out;
}

// ---------------- 1-D profiles ----------------

std::vector<cplx> fft_profile(const Profile1D& p) {
    std::vector<cplx> c = fft::forward_1d(p.values);
    for (std::size_t i = 0; i < p.grid.Nx; ++i)
        if (p.grid.mode(i) % 2 != 0) c[i] = -c[i];
    return c;
}

Profile1D deriv(const Profile1D& p, int order) {
    if (order < 1) throw DomainError("deriv: order must be positive");
    std::vector<cplx> c = fft::forward_1d(p.values);
    const Grid1D& g = p.grid;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const bool nyq = (g.mode(i) == -static_cast<long>(g.Nx) / 2);
        c[i] *= dx_symbol(g.xi(i), nyq, order);
    }
    return Profile1D(g, p.mode, fft::inverse_1d(c));
}

Profile1D antideriv(const Profile1D& p) {
    std::vector<cplx> c = fft::forward_1d(p.values);
    const Grid1D& g = p.grid;
    double scale = 0.0;
    for (const cplx& v : c) scale = std::max(scale, std::abs(v));
    if (p.mode != 0 && scale > 0.0 && std::abs(c[0]) > kZeroModeTol * scale)
        throw ZeroModeViolation("antideriv: x-mean on mode j=" + std::to_string(p.mode));
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const bool nyq = (g.mode(i) == -static_cast<long>(g.Nx) / 2);
        c[i] = (g.mode(i) == 0 || nyq) ? cplx(0.0) : c[i] / cplx(0.0, g.xi(i));
    }
    return Profile1D(g, p.mode, fft::inverse_1d(c));
}

Profile1D dealias(const Profile1D& p) {
    std::vector<cplx> c = fft::forward_1d(p.values);
    const Grid1D& g = p.grid;
    const long cut = static_cast<long>(g.Nx) / 3;
    for (std::size_t i = 0; i < g.Nx; ++i)
        if (std::labs(g.mode(i)) > cut) c[i] = cplx(0.0);
    return Profile1D(g, p.mode, fft::inverse_1d(c));
}

Profile1D dealiased_product(const Profile1D& a, const Profile1D& b, long mode_out) {
    if (!(a.grid == b.grid)) throw SizeMismatch("dealiased_product: grids differ");
    Profile1D prod(a.grid, mode_out);
    for (std::size_t i = 0; i < prod.values.size(); ++i) prod.values[i] = a.values[i] * b.values[i];
    return dealias(prod);
}

double norm_l2(const Profile1D& p) {
    double s = 0.0;
    for (const cplx& v : p.values) s += std::norm(v);
    return std::sqrt(s * p.grid.dx());
}

cplx inner(const Profile1D& a, const Profile1D& b) {
    if (!(a.grid == b.grid)) throw SizeMismatch("inner: grids differ");
    cplx s(0.0);
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * std::conj(b.values[i]);
    return s * a.grid.dx();
}

double norm_hs_line(const Profile1D& p, int s) {
    if (s < 0) throw DomainError("norm_hs_line: s must be nonnegative");
    double total = 0.0;
    Profile1D d = p;
    double n = norm_l2(d);
    total += n * n;
    for (int m = 1; m <= s; ++m) {
        d = deriv(d, 1);
        n = norm_l2(d);
        total += n * n;
    }
    return std::sqrt(total);
}

Profile1D add(const Profile1D& a, const Profile1D& b) {
    if (!(a.grid == b.grid)) throw SizeMismatch("add: grids differ");
    Profile1D out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

Profile1D scale(const Profile1D& a, cplx s) {
    Profile1D out = a;
    for (cplx& v : out.values) v *= s;
    return out;
}

} // namespace tilab
