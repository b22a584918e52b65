#include "tilab/grenier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tilab/kp_spectrum.hpp"
#include "tilab/nls_spectrum.hpp"
#include "tilab/solitons.hpp"

namespace tilab {

namespace {

struct Tables1D {
    std::vector<cplx> E, E2, phi1h, f1, f2, f3;
};

cplx phi_fn(int k, cplx z) {
    if (std::abs(z) < 0.5) {
        double kfact = 1.0;
        for (int j = 2; j <= k; ++j) kfact *= j;
        cplx term = cplx(1.0 / kfact);
        cplx sum = term;
        for (int n = 1; n <= 26; ++n) {
            term *= z / static_cast<double>(n + k);
            sum += term;
        }
        return sum;
    }
    cplx v = (std::exp(z) - 1.0) / z;
    if (k == 1) return v;
    v = (v - 1.0) / z;
    if (k == 2) return v;
    return (v - 0.5) / z;
}

Tables1D make_tables(const std::vector<cplx>& lam, double h) {
    const std::size_t n = lam.size();
    Tables1D t;
    t.E.resize(n);
    t.E2.resize(n);
    t.phi1h.resize(n);
    t.f1.resize(n);
    t.f2.resize(n);
    t.f3.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx z = lam[i] * h;
        t.E[i] = std::exp(z);
        t.E2[i] = std::exp(0.5 * z);
        t.phi1h[i] = phi_fn(1, 0.5 * z);
        const cplx p1 = phi_fn(1, z), p2 = phi_fn(2, z), p3 = phi_fn(3, z);
        t.f1[i] = p1 - 3.0 * p2 + 4.0 * p3;
        t.f2[i] = p2 - 2.0 * p3;
        t.f3[i] = 4.0 * p3 - p2;
    }
    return t;
}

std::vector<cplx> kp_mode_symbol(const Grid1D& g, double L, long m) {
    std::vector<cplx> lam(g.Nx, cplx(0.0));
    const double ky = static_cast<double>(m) / L;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const long n = g.mode(i);
        if (n == 0 || n == -static_cast<long>(g.Nx) / 2) continue;
        const double xi = g.xi(i);
        lam[i] = cplx(0.0, xi + xi * xi * xi + ky * ky / xi);
    }
    return lam;
}

std::vector<cplx> nls_mode_symbol(const Grid1D& g, double L, long m, double sign) {
    std::vector<cplx> lam(g.Nx, cplx(0.0));
    const double ky = static_cast<double>(m) / L;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        if (g.mode(i) == -static_cast<long>(g.Nx) / 2) continue;
        const double xi = g.xi(i);
        lam[i] = cplx(0.0, -sign * (1.0 + xi * xi + ky * ky));
    }
    return lam;
}

std::vector<char> dealias_mask_1d(const Grid1D& g) {
    std::vector<char> mask(g.Nx, 1);
    const long cut = static_cast<long>(g.Nx) / 3;
    for (std::size_t i = 0; i < g.Nx; ++i)
        if (std::labs(g.mode(i)) > cut) mask[i] = 0;
    return mask;
}

// cubic interpolation of a stored series at the midpoint of step i
std::vector<cplx> series_midpoint(const std::vector<std::vector<cplx>>& F, std::size_t i) {
    const std::size_t nt = F.size();
    const std::size_t n = F[0].size();
    std::size_t base;
    const double* w;
    static const double w_start[4] = {0.3125, 0.9375, -0.3125, 0.0625};
    static const double w_mid[4] = {-0.0625, 0.5625, 0.5625, -0.0625};
    static const double w_end[4] = {0.0625, -0.3125, 0.9375, 0.3125};
    if (i == 0)
        base = 0, w = w_start;
    else if (i + 2 >= nt)
        base = nt - 4, w = w_end;
    else
        base = i - 1, w = w_mid;
    std::vector<cplx> out(n, cplx(0.0));
    for (int q = 0; q < 4; ++q) {
        const std::vector<cplx>& row = F[base + q];
        for (std::size_t p = 0; p < n; ++p) out[p] += w[q] * row[p];
    }
    return out;
}

// ---- KP per-mode forced solve: y' = Lam y - dealias((Q y)_x) + F(t) ----
std::vector<std::vector<cplx>> solve_kp_mode(const Grid1D& g, double L, long m,
                                             const std::vector<std::vector<cplx>>& Fhat, double h) {
    const std::size_t n = g.Nx;
    const std::size_t nt = Fhat.size();
    Tables1D tab = make_tables(kp_mode_symbol(g, L, m), h);
    const std::vector<char> mask = dealias_mask_1d(g);
    Profile1D qp = sample_periodized(g, [](double x) { return cplx(kdv_Q(x)); });

    auto N = [&](const std::vector<cplx>& yhat, const std::vector<cplx>& fhat) {
        std::vector<cplx> u(n);
        fft::inverse_1d(yhat.data(), u.data(), n);
        for (std::size_t p = 0; p < n; ++p) u[p] *= qp.values[p];
        std::vector<cplx> w(n);
        fft::forward_1d(u.data(), w.data(), n);
        for (std::size_t p = 0; p < n; ++p) {
            const bool nyq = (g.mode(p) == -static_cast<long>(g.Nx) / 2);
            const cplx s = (nyq || !mask[p]) ? cplx(0.0) : cplx(0.0, -g.xi(p));
            w[p] = s * w[p] + fhat[p];
        }
        return w;
    };

    std::vector<std::vector<cplx>> out(nt);
    std::vector<cplx> y(n, cplx(0.0));
    out[0] = fft::inverse_1d(y); // zeros
    std::vector<cplx> a(n), b(n), c(n), yn(n);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
        const std::vector<cplx> Fm = series_midpoint(Fhat, i);
        const std::vector<cplx> N1 = N(y, Fhat[i]);
        for (std::size_t p = 0; p < n; ++p) a[p] = tab.E2[p] * y[p] + 0.5 * h * tab.phi1h[p] * N1[p];
        const std::vector<cplx> N2 = N(a, Fm);
        for (std::size_t p = 0; p < n; ++p) b[p] = tab.E2[p] * y[p] + 0.5 * h * tab.phi1h[p] * N2[p];
        const std::vector<cplx> N3 = N(b, Fm);
        for (std::size_t p = 0; p < n; ++p)
            c[p] = tab.E2[p] * a[p] + 0.5 * h * tab.phi1h[p] * (2.0 * N3[p] - N1[p]);
        const std::vector<cplx> N4 = N(c, Fhat[i + 1]);
        for (std::size_t p = 0; p < n; ++p)
            y[p] = tab.E[p] * y[p] +
                   h * (tab.f1[p] * N1[p] + 2.0 * tab.f2[p] * (N2[p] + N3[p]) + tab.f3[p] * N4[p]);
        out[i + 1] = fft::inverse_1d(y);
    }
    return out;
}

// ---- NLS pair solve for (u_m, conj(u_{-m})) ----
struct PairSeries {
    std::vector<std::vector<cplx>> u; // mode +m
    std::vector<std::vector<cplx>> c; // conj of mode -m
};

PairSeries solve_nls_pair(const Grid1D& g, double L, long m,
                          const std::vector<std::vector<cplx>>& Fu,
                          const std::vector<std::vector<cplx>>& Fc, double h) {
    const std::size_t n = g.Nx;
    const std::size_t nt = Fu.size();
    Tables1D tu = make_tables(nls_mode_symbol(g, L, m, +1.0), h);
    Tables1D tc = make_tables(nls_mode_symbol(g, L, m, -1.0), h);
    const std::vector<char> mask = dealias_mask_1d(g);
    Profile1D qp = sample_periodized(g, [](double x) { return cplx(nls_Q(x)); });
    std::vector<double> q2(n);
    for (std::size_t p = 0; p < n; ++p) q2[p] = std::norm(qp.values[p]);

    // state layout: [0,n) = u-hat, [n,2n) = c-hat
    auto N = [&](const std::vector<cplx>& y, const std::vector<cplx>& fu,
                 const std::vector<cplx>& fc) {
        std::vector<cplx> uphys(n), cphys(n);
        fft::inverse_1d(y.data(), uphys.data(), n);
        fft::inverse_1d(y.data() + n, cphys.data(), n);
        std::vector<cplx> gu(n), gc(n);
        for (std::size_t p = 0; p < n; ++p) {
            const cplx coupling_u = cplx(0.0, 1.0) * (2.0 * q2[p] * uphys[p] + q2[p] * cphys[p]);
            const cplx coupling_c = cplx(0.0, -1.0) * (2.0 * q2[p] * cphys[p] + q2[p] * uphys[p]);
            gu[p] = coupling_u;
            gc[p] = coupling_c;
        }
        std::vector<cplx> out(2 * n);
        fft::forward_1d(gu.data(), out.data(), n);
        fft::forward_1d(gc.data(), out.data() + n, n);
        for (std::size_t p = 0; p < n; ++p) {
            out[p] = (mask[p] ? out[p] : cplx(0.0)) + fu[p];
            out[n + p] = (mask[p] ? out[n + p] : cplx(0.0)) + fc[p];
        }
        return out;
    };
    auto axpy_stage = [&](const std::vector<cplx>& y, const std::vector<cplx>& Nv, double hw,
                          std::vector<cplx>& dst, bool from_a, const std::vector<cplx>& a) {
        for (std::size_t p = 0; p < n; ++p) {
            dst[p] = tu.E2[p] * (from_a ? a[p] : y[p]) + hw * tu.phi1h[p] * Nv[p];
            dst[n + p] = tc.E2[p] * (from_a ? a[n + p] : y[n + p]) + hw * tc.phi1h[p] * Nv[n + p];
        }
    };

    PairSeries out;
    out.u.resize(nt);
    out.c.resize(nt);
    std::vector<cplx> y(2 * n, cplx(0.0));
    out.u[0].assign(n, cplx(0.0));
    out.c[0].assign(n, cplx(0.0));
    std::vector<cplx> a(2 * n), b(2 * n), d(2 * n);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
        const std::vector<cplx> Fum = series_midpoint(Fu, i);
        const std::vector<cplx> Fcm = series_midpoint(Fc, i);
        const std::vector<cplx> N1 = N(y, Fu[i], Fc[i]);
        axpy_stage(y, N1, 0.5 * h, a, false, y);
        const std::vector<cplx> N2 = N(a, Fum, Fcm);
        axpy_stage(y, N2, 0.5 * h, b, false, y);
        const std::vector<cplx> N3 = N(b, Fum, Fcm);
        std::vector<cplx> comb(2 * n);
        for (std::size_t p = 0; p < 2 * n; ++p) comb[p] = 2.0 * N3[p] - N1[p];
        axpy_stage(y, comb, 0.5 * h, d, true, a);
        const std::vector<cplx> N4 = N(d, Fu[i + 1], Fc[i + 1]);
        for (std::size_t p = 0; p < n; ++p) {
            y[p] = tu.E[p] * y[p] +
                   h * (tu.f1[p] * N1[p] + 2.0 * tu.f2[p] * (N2[p] + N3[p]) + tu.f3[p] * N4[p]);
            y[n + p] = tc.E[p] * y[n + p] + h * (tc.f1[p] * N1[n + p] +
                                                 2.0 * tc.f2[p] * (N2[n + p] + N3[n + p]) +
                                                 tc.f3[p] * N4[n + p]);
        }
        out.u[i + 1].resize(n);
        out.c[i + 1].resize(n);
        fft::inverse_1d(y.data(), out.u[i + 1].data(), n);
        fft::inverse_1d(y.data() + n, out.c[i + 1].data(), n);
    }
    return out;
}

// support of the convolution sum for order k
std::vector<long> support_for_order(Equation eq, const std::vector<Iterate>& prev, int k) {
    std::set<long> s;
    for (int j = 0; j + (k - 1 - j) == k - 1 && j <= k - 1; ++j) {
        const int l = k - 1 - j;
        for (long m1 : prev[j].modes)
            for (long m2 : prev[l].modes) s.insert(m1 + m2);
    }
    if (eq == Equation::Nls && k >= 2) {
        for (int j = 0; j <= k - 2; ++j)
            for (int l = 0; j + l <= k - 2; ++l) {
                const int p = k - 2 - j - l;
                for (long m1 : prev[j].modes)
                    for (long m2 : prev[l].modes)
                        for (long m3 : prev[p].modes) s.insert(m1 - m2 + m3);
            }
    }
    return std::vector<long>(s.begin(), s.end());
}

std::vector<cplx> spectral_dealias_fft(const std::vector<cplx>& phys, const Grid1D& g,
                                       const std::vector<char>& mask) {
    std::vector<cplx> w(g.Nx);
    fft::forward_1d(phys.data(), w.data(), g.Nx);
    for (std::size_t p = 0; p < g.Nx; ++p)
        if (!mask[p]) w[p] = cplx(0.0);
    return w;
}

// KP forcing for iterate k, output mode m, spectral:
//   Fhat_m(t) = -(1/2) (i xi) fft[ sum_{j+l=k-1} sum_{m1+m2=m} u^j_{m1} u^l_{m2} ]
std::vector<cplx> kp_forcing_at(const std::vector<Iterate>& prev, int k, long m, std::size_t ti,
                                const Grid1D& g, const std::vector<char>& mask) {
    const std::size_t n = g.Nx;
    std::vector<cplx> raw(n, cplx(0.0));
    for (int j = 0; j <= k - 1; ++j) {
        const int l = k - 1 - j;
        for (long m1 : prev[j].modes) {
            const long m2 = m - m1;
            if (!prev[l].has_mode(m2)) continue;
            const std::vector<cplx>& a = prev[j].at(m1, ti);
            const std::vector<cplx>& b = prev[l].at(m2, ti);
            for (std::size_t p = 0; p < n; ++p) raw[p] += a[p] * b[p];
        }
    }
    std::vector<cplx> w = spectral_dealias_fft(raw, g, mask);
    for (std::size_t p = 0; p < n; ++p) {
        const bool nyq = (g.mode(p) == -static_cast<long>(g.Nx) / 2);
        w[p] *= nyq ? cplx(0.0) : cplx(0.0, -0.5 * g.xi(p));
    }
    return w;
}

// NLS right-hand side R^k_m(t) in physical space:
//   R = -sum_{j+l=k-1} (2 Q u^j conj(u^l) + Q u^j u^l)_m - sum_{j+l+p=k-2} (u^j conj(u^l) u^p)_m
std::vector<cplx> nls_rhs_at(const std::vector<Iterate>& prev, int k, long m, std::size_t ti,
                             const Grid1D& g, const std::vector<double>& q) {
    const std::size_t n = g.Nx;
    std::vector<cplx> R(n, cplx(0.0));
    for (int j = 0; j <= k - 1; ++j) {
        const int l = k - 1 - j;
        for (long m1 : prev[j].modes) {
            const long m2 = m - m1;
            // 2 Q u^j_{m1} conj(u^l_{-m2}) at output mode m
            if (prev[l].has_mode(-m2)) {
                const std::vector<cplx>& a = prev[j].at(m1, ti);
                const std::vector<cplx>& b = prev[l].at(-m2, ti);
                for (std::size_t p = 0; p < n; ++p)
                    R[p] -= 2.0 * q[p] * a[p] * std::conj(b[p]);
            }
            // Q u^j_{m1} u^l_{m2}
            if (prev[l].has_mode(m2)) {
                const std::vector<cplx>& a = prev[j].at(m1, ti);
                const std::vector<cplx>& b = prev[l].at(m2, ti);
                for (std::size_t p = 0; p < n; ++p) R[p] -= q[p] * a[p] * b[p];
            }
        }
    }
    if (k >= 2) {
        for (int j = 0; j <= k - 2; ++j)
            for (int l = 0; j + l <= k - 2; ++l) {
                const int pp = k - 2 - j - l;
                for (long m1 : prev[j].modes)
                    for (long m2c : prev[l].modes) {
                        // conj(u^l_{m2c}) contributes transverse mode -m2c
                        const long m3 = m - m1 + m2c;
                        if (!prev[pp].has_mode(m3)) continue;
                        const std::vector<cplx>& a = prev[j].at(m1, ti);
                        const std::vector<cplx>& b = prev[l].at(m2c, ti);
                        const std::vector<cplx>& c = prev[pp].at(m3, ti);
                        for (std::size_t p = 0; p < n; ++p)
                            R[p] -= a[p] * std::conj(b[p]) * c[p];
                    }
            }
    }
    return R;
}

} // namespace

std::size_t GrenierExpansion::time_index(double t) const {
    const double r = t / dt;
    const auto idx = static_cast<std::size_t>(std::llround(r));
    if (idx >= times.size() || std::abs(times[idx] - t) > 1e-9 * std::max(1.0, std::abs(t)))
        throw DomainError("GrenierExpansion: t=" + std::to_string(t) + " is not a stored node");
    return idx;
}

void GrenierExpansion::thin(std::size_t stride) {
    if (stride <= 1) return;
    std::vector<double> tnew;
    for (std::size_t i = 0; i < times.size(); i += stride) tnew.push_back(times[i]);
    for (auto& it : iterates) {
        for (auto& kv : it.series) {
            std::vector<std::vector<cplx>> snew;
            snew.reserve(tnew.size());
            for (std::size_t i = 0; i < times.size(); i += stride) snew.push_back(std::move(kv.second[i]));
            kv.second = std::move(snew);
        }
    }
    times = tnew;
    dt *= static_cast<double>(stride);
}

Iterate seed_mode(Equation eq, double L, const Grid1D& g, const std::vector<double>& times,
                  long* k0_out, double* sigma0_out) {
    Iterate it;
    it.order = 0;
    const std::size_t nt = times.size();
    if (eq == Equation::KpMoving || eq == Equation::KpLab) {
        UnstableModeKP mode = most_unstable(L, g);
        const long k0 = mode.point.k;
        const double s0 = mode.sigma_discrete; // grid-exact growth rate
        if (k0_out) *k0_out = k0;
        if (sigma0_out) *sigma0_out = s0;
        it.modes = {-k0, k0};
        auto& plus = it.series[k0];
        auto& minus = it.series[-k0];
        plus.resize(nt);
        minus.resize(nt);
        for (std::size_t i = 0; i < nt; ++i) {
            const double gr = std::exp(s0 * times[i]);
            plus[i].resize(g.Nx);
            minus[i].resize(g.Nx);
            for (std::size_t p = 0; p < g.Nx; ++p) {
                plus[i][p] = gr * mode.V.values[p];
                minus[i][p] = gr * std::conj(mode.V.values[p]);
            }
        }
        return it;
    }
    UnstableModeNLS mode = most_unstable_nls(L, g);
    if (mode.sigma.imag() != 0.0)
        throw DegenerateSpectrum("seed_mode: complex growth rate on the unstable branch");
    const long k0 = mode.k;
    const double s0 = mode.sigma.real();
    if (k0_out) *k0_out = k0;
    if (sigma0_out) *sigma0_out = s0;
    it.modes = {-k0, k0};
    auto& plus = it.series[k0];
    auto& minus = it.series[-k0];
    plus.resize(nt);
    minus.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const double gr = std::exp(s0 * times[i]);
        plus[i].resize(g.Nx);
        minus[i].resize(g.Nx);
        for (std::size_t p = 0; p < g.Nx; ++p) {
            const cplx v = mode.V1.values[p] + cplx(0.0, 1.0) * mode.V2.values[p];
            plus[i][p] = gr * v;
            minus[i][p] = gr * v;
        }
    }
    return it;
}

GrenierExpansion build_expansion(Equation eq, double L, int M, double delta, const Grid1D& g,
                                 double t_end, double dt) {
    if (M < 0) throw DomainError("build_expansion: M must be >= 0");
    GrenierExpansion ex;
    ex.equation = eq;
    ex.L = L;
    ex.M = M;
    ex.delta = delta;
    ex.grid = g;
    ex.dt = dt;
    const auto nt = static_cast<std::size_t>(std::llround(t_end / dt)) + 1;
    if (nt < 4) throw DomainError("build_expansion: need at least 4 time nodes");
    ex.times.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) ex.times[i] = dt * static_cast<double>(i);

    ex.iterates.push_back(seed_mode(eq, L, g, ex.times, &ex.k0, &ex.sigma0));

    const std::vector<char> mask = dealias_mask_1d(g);
    Profile1D qp = (eq == Equation::Nls)
                       ? sample_periodized(g, [](double x) { return cplx(nls_Q(x)); })
                       : sample_periodized(g, [](double x) { return cplx(kdv_Q(x)); });
    std::vector<double> q(g.Nx);
    for (std::size_t p = 0; p < g.Nx; ++p) q[p] = qp.values[p].real();

    for (int k = 1; k <= M; ++k) {
        Iterate it;
        it.order = k;
        it.modes = support_for_order(eq, ex.iterates, k);
        if (eq != Equation::Nls) {
            for (long m : it.modes) {
                if (m < 0) continue; // conjugate of +m
                std::vector<std::vector<cplx>> Fhat(nt);
                for (std::size_t ti = 0; ti < nt; ++ti)
                    Fhat[ti] = kp_forcing_at(ex.iterates, k, m, ti, g, mask);
                it.series[m] = solve_kp_mode(g, L, m, Fhat, dt);
            }
            for (long m : it.modes) {
                if (m >= 0) continue;
                const auto& src = it.series.at(-m);
                auto& dst = it.series[m];
                dst.resize(nt);
                for (std::size_t ti = 0; ti < nt; ++ti) {
                    dst[ti].resize(g.Nx);
                    for (std::size_t p = 0; p < g.Nx; ++p) dst[ti][p] = std::conj(src[ti][p]);
                }
            }
        } else {
            for (long m : it.modes) {
                if (m < 0 && it.series.count(m)) continue;
                if (m < 0) continue; // handled as the pair of +|m|
                std::vector<std::vector<cplx>> Fu(nt), Fc(nt);
                for (std::size_t ti = 0; ti < nt; ++ti) {
                    std::vector<cplx> Rm = nls_rhs_at(ex.iterates, k, m, ti, g, q);
                    std::vector<cplx> Rmc = nls_rhs_at(ex.iterates, k, -m, ti, g, q);
                    // dt u_m = ... - i R_m ; dt conj(u_{-m}) = ... + i conj(R_{-m})
                    for (std::size_t p = 0; p < g.Nx; ++p) {
                        Rm[p] *= cplx(0.0, -1.0);
                        Rmc[p] = cplx(0.0, 1.0) * std::conj(Rmc[p]);
                    }
                    Fu[ti] = spectral_dealias_fft(Rm, g, mask);
                    Fc[ti] = spectral_dealias_fft(Rmc, g, mask);
                }
                PairSeries ps = solve_nls_pair(g, L, m, Fu, Fc, dt);
                it.series[m] = std::move(ps.u);
                if (m != 0) {
                    auto& neg = it.series[-m];
                    neg.resize(nt);
                    for (std::size_t ti = 0; ti < nt; ++ti) {
                        neg[ti].resize(g.Nx);
                        for (std::size_t p = 0; p < g.Nx; ++p)
                            neg[ti][p] = std::conj(ps.c[ti][p]);
                    }
                }
            }
        }
        ex.iterates.push_back(std::move(it));
    }
    return ex;
}

double iterate_norm_sup(const Iterate& it, std::size_t ti, const Grid1D& g) {
    double best = 0.0;
    for (const auto& kv : it.series) {
        double s = 0.0;
        for (const cplx& v : kv.second[ti]) s += std::norm(v);
        best = std::max(best, std::sqrt(s * g.dx()));
    }
    return best;
}

double iterate_norm_l2(const Iterate& it, std::size_t ti, const Grid1D& g, double L) {
    double s = 0.0;
    for (const auto& kv : it.series)
        for (const cplx& v : kv.second[ti]) s += std::norm(v);
    return std::sqrt(s * g.dx() * 2.0 * kPi * L);
}

ModeProfiles approx_modes(const GrenierExpansion& ex, std::size_t ti, double delta_override) {
    const double delta = delta_override > 0.0 ? delta_override : ex.delta;
    ModeProfiles mp;
    double amp = delta;
    for (const Iterate& it : ex.iterates) {
        for (const auto& kv : it.series) {
            auto& dst = mp[kv.first];
            if (dst.empty()) dst.assign(ex.grid.Nx, cplx(0.0));
            const auto& src = kv.second[ti];
            for (std::size_t p = 0; p < ex.grid.Nx; ++p) dst[p] += amp * src[p];
        }
        amp *= delta;
    }
    return mp;
}

Field assemble(const GrenierExpansion& ex, std::size_t ti, const Grid2D& g2,
               double delta_override) {
    if (!(g2.xline() == ex.grid)) throw SizeMismatch("assemble: 2-D grid x-line mismatch");
    if (std::abs(g2.L - ex.L) > 1e-12) throw SizeMismatch("assemble: L mismatch");
    ModeProfiles mp = approx_modes(ex, ti, delta_override);
    Field out(g2, ex.equation == Equation::Nls ? FieldKind::Complex : FieldKind::Real);
    for (const auto& kv : mp) {
        const double m = static_cast<double>(kv.first);
        for (std::size_t j = 0; j < g2.Ny; ++j) {
            const cplx ph = std::polar(1.0, m * g2.y(j) / g2.L);
            for (std::size_t i = 0; i < g2.Nx; ++i) out.values[i * g2.Ny + j] += kv.second[i] * ph;
        }
    }
    return out;
}

double modes_l2(const ModeProfiles& mp, const Grid1D& g, double L) {
    double s = 0.0;
    for (const auto& kv : mp)
        for (const cplx& v : kv.second) s += std::norm(v);
    return std::sqrt(s * g.dx() * 2.0 * kPi * L);
}

ModeProfiles residual_modes(const GrenierExpansion& ex, std::size_t ti, double delta_override) {
    const double delta = delta_override > 0.0 ? delta_override : ex.delta;
    const Grid1D& g = ex.grid;
    const std::size_t n = g.Nx;
    const std::vector<char> mask = dealias_mask_1d(g);
    Profile1D qp = (ex.equation == Equation::Nls)
                       ? sample_periodized(g, [](double x) { return cplx(nls_Q(x)); })
                       : sample_periodized(g, [](double x) { return cplx(kdv_Q(x)); });
    std::vector<double> q(n);
    for (std::size_t p = 0; p < n; ++p) q[p] = qp.values[p].real();

    ModeProfiles F;
    auto acc = [&](long m) -> std::vector<cplx>& {
        auto& dst = F[m];
        if (dst.empty()) dst.assign(n, cplx(0.0));
        return dst;
    };

    // (dt + A) u_ap by each iterate's own equation: the k-th iterate
    // contributes its forcing scaled by delta^{k+1}
    double amp = delta;
    for (int k = 1; k <= ex.M; ++k) {
        amp *= delta; // delta^{k+1}
        const Iterate& it = ex.iterates[k];
        for (long m : it.modes) {
            if (ex.equation != Equation::Nls) {
                std::vector<cplx> fh = kp_forcing_at(ex.iterates, k, m, ti, g, mask);
                std::vector<cplx> fp(n);
                fft::inverse_1d(fh.data(), fp.data(), n);
                auto& dst = acc(m);
                for (std::size_t p = 0; p < n; ++p) dst[p] += amp * fp[p];
            } else {
                std::vector<cplx> R = nls_rhs_at(ex.iterates, k, m, ti, g, q);
                std::vector<cplx> Rh = spectral_dealias_fft(R, g, mask);
                std::vector<cplx> Rp(n);
                fft::inverse_1d(Rh.data(), Rp.data(), n);
                auto& dst = acc(m);
                for (std::size_t p = 0; p < n; ++p) dst[p] += amp * Rp[p];
            }
        }
    }

    // nonlinear term of the assembled u_ap
    ModeProfiles uap = approx_modes(ex, ti, delta);
    if (ex.equation != Equation::Nls) {
        // + (1/2) d/dx (u_ap^2)
        for (const auto& ka : uap)
            for (const auto& kb : uap) {
                const long m = ka.first + kb.first;
                std::vector<cplx> prod(n);
                for (std::size_t p = 0; p < n; ++p) prod[p] = ka.second[p] * kb.second[p];
                std::vector<cplx> w = spectral_dealias_fft(prod, g, mask);
                for (std::size_t p = 0; p < n; ++p) {
                    const bool nyq = (g.mode(p) == -static_cast<long>(g.Nx) / 2);
                    w[p] *= nyq ? cplx(0.0) : cplx(0.0, 0.5 * g.xi(p));
                }
                std::vector<cplx> wp(n);
                fft::inverse_1d(w.data(), wp.data(), n);
                auto& dst = acc(m);
                for (std::size_t p = 0; p < n; ++p) dst[p] += wp[p];
            }
    } else {
        // + 2 Q |u_ap|^2 + Q u_ap^2 + |u_ap|^2 u_ap
        for (const auto& ka : uap)
            for (const auto& kb : uap) {
                // 2 Q u conj(u): modes m_a - m_b ; Q u u: modes m_a + m_b
                std::vector<cplx> t1(n), t2(n);
                for (std::size_t p = 0; p < n; ++p) {
                    t1[p] = 2.0 * q[p] * ka.second[p] * std::conj(kb.second[p]);
                    t2[p] = q[p] * ka.second[p] * kb.second[p];
                }
                std::vector<cplx> w1 = spectral_dealias_fft(t1, g, mask);
                std::vector<cplx> w2 = spectral_dealias_fft(t2, g, mask);
                std::vector<cplx> p1(n), p2(n);
                fft::inverse_1d(w1.data(), p1.data(), n);
                fft::inverse_1d(w2.data(), p2.data(), n);
                auto& d1 = acc(ka.first - kb.first);
                for (std::size_t p = 0; p < n; ++p) d1[p] += p1[p];
                auto& d2 = acc(ka.first + kb.first);
                for (std::size_t p = 0; p < n; ++p) d2[p] += p2[p];
            }
        for (const auto& ka : uap)
            for (const auto& kb : uap)
                for (const auto& kc : uap) {
                    std::vector<cplx> t(n);
                    for (std::size_t p = 0; p < n; ++p)
                        t[p] = ka.second[p] * std::conj(kb.second[p]) * kc.second[p];
                    std::vector<cplx> w = spectral_dealias_fft(t, g, mask);
                    std::vector<cplx> pp(n);
                    fft::inverse_1d(w.data(), pp.data(), n);
                    auto& dst = acc(ka.first - kb.first + kc.first);
                    for (std::size_t p = 0; p < n; ++p) dst[p] += pp[p];
                }
    }
    return F;
}

double residual_l2(const GrenierExpansion& ex, std::size_t ti, double delta_override) {
    return modes_l2(residual_modes(ex, ti, delta_override), ex.grid, ex.L);
}

Field residual_F(const GrenierExpansion& ex, std::size_t ti, const Grid2D& g2,
                 double delta_override) {
    if (!(g2.xline() == ex.grid)) throw SizeMismatch("residual_F: 2-D grid x-line mismatch");
    ModeProfiles mp = residual_modes(ex, ti, delta_override);
    Field out(g2, ex.equation == Equation::Nls ? FieldKind::Complex : FieldKind::Real);
    for (const auto& kv : mp) {
        const double m = static_cast<double>(kv.first);
        for (std::size_t j = 0; j < g2.Ny; ++j) {
            const cplx ph = std::polar(1.0, m * g2.y(j) / g2.L);
            for (std::size_t i = 0; i < g2.Nx; ++i) out.values[i * g2.Ny + j] += kv.second[i] * ph;
        }
    }
    return out;
}

} // namespace tilab
