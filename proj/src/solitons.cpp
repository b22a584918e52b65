#include "tilab/solitons.hpp"

#include <cmath>

namespace tilab {

double kdv_Q(double x) {
    const double c = std::cosh(0.5 * x);
    return 3.0 / (c * c);
}

double nls_Q(double x) { return std::sqrt(2.0) / std::cosh(x); }

cplx soliton_value(const SolitonSpec& spec, double x) {
    const double z = x - spec.center;
    if (spec.family == Family::Kdv) return spec.scale * kdv_Q(std::sqrt(spec.scale) * z);
    const cplx ph = std::polar(1.0, spec.phase);
    return spec.scale * nls_Q(spec.scale * z) * ph;
}

Profile1D sample_periodized(const Grid1D& g, const std::function<cplx(double)>& f, int images,
                            long mode) {
    Profile1D p(g, mode);
    for (std::size_t i = 0; i < g.Nx; ++i) {
        cplx s(0.0);
        for (int n = -images; n <= images; ++n) s += f(g.x(i) + 2.0 * g.X * n);
        p.values[i] = s;
    }
    return p;
}

Field sample_periodized_x(const Grid2D& g, const std::function<cplx(double)>& f, FieldKind kind,
                          int images) {
    Profile1D p = sample_periodized(g.xline(), f, images);
    Field out(g, kind);
    for (std::size_t i = 0; i < g.Nx; ++i)
        for (std::size_t j = 0; j < g.Ny; ++j) out.values[i * g.Ny + j] = p.values[i];
    return out;
}

Field soliton_field(const Grid2D& g, const SolitonSpec& spec) {
    const FieldKind kind = spec.family == Family::Kdv ? FieldKind::Real : FieldKind::Complex;
    return sample_periodized_x(g, [&](double x) { return soliton_value(spec, x); }, kind);
}

Profile1D soliton_profile(const Grid1D& g, const SolitonSpec& spec) {
    return sample_periodized(g, [&](double x) { return soliton_value(spec, x); });
}

double stationarity_residual(const SolitonSpec& spec, const Grid1D& g) {
    Profile1D q = soliton_profile(g, spec);
    Profile1D res(g, 0);
    if (spec.family == Family::Kdv) {
        Profile1D q1 = deriv(q, 1);
        Profile1D q3 = deriv(q, 3);
        for (std::size_t i = 0; i < g.Nx; ++i)
            res.values[i] = -q1.values[i] + q.values[i] * q1.values[i] + q3.values[i];
    } else {
        Profile1D q2 = deriv(q, 2);
        for (std::size_t i = 0; i < g.Nx; ++i) {
            const cplx v = q.values[i];
            res.values[i] = -q2.values[i] + v - std::norm(v) * v;
        }
    }
    double sup = 0.0;
    for (const cplx& v : res.values) sup = std::max(sup, std::abs(v));
    return sup;
}

} // namespace tilab
