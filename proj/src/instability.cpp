#include "tilab/instability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>

#include "tilab/kp_spectrum.hpp"
#include "tilab/nls_spectrum.hpp"
#include "tilab/solitons.hpp"

namespace tilab {

namespace {

// correlation C(a) = <u, Q(. - a)> restricted to the y-mean of u; returns
// the spectral product h_n = ubar_n conj(Qhat_n) so C(a) = B sum h_n e^{i xi_n a}
struct Correlator {
    std::vector<cplx> h;
    std::vector<double> xi;
    double prefactor = 0.0; // 2 pi L * 2 X

    cplx C(double a) const {
        cplx s(0.0);
        for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * std::polar(1.0, xi[i] * a);
        return prefactor * s;
    }
    cplx dC(double a) const {
        cplx s(0.0);
        for (std::size_t i = 0; i < h.size(); ++i)
            s += h[i] * cplx(0.0, xi[i]) * std::polar(1.0, xi[i] * a);
        return prefactor * s;
    }
    cplx d2C(double a) const {
        cplx s(0.0);
        for (std::size_t i = 0; i < h.size(); ++i)
            s += h[i] * cplx(-xi[i] * xi[i], 0.0) * std::polar(1.0, xi[i] * a);
        return prefactor * s;
    }
};

Correlator make_correlator(const Field& u, const Profile1D& qline) {
    const Grid2D& g = u.grid;
    // y-mean of u
    std::vector<cplx> ubar(g.Nx, cplx(0.0));
    for (std::size_t i = 0; i < g.Nx; ++i) {
        cplx s(0.0);
        for (std::size_t j = 0; j < g.Ny; ++j) s += u.values[i * g.Ny + j];
        ubar[i] = s / static_cast<double>(g.Ny);
    }
    std::vector<cplx> uhat = fft::forward_1d(ubar);
    std::vector<cplx> qhat = fft::forward_1d(qline.values);
    Correlator c;
    c.h.resize(g.Nx);
    c.xi.resize(g.Nx);
    const Grid1D gl = g.xline();
    for (std::size_t i = 0; i < g.Nx; ++i) {
        c.h[i] = uhat[i] * std::conj(qhat[i]);
        c.xi[i] = gl.xi(i);
    }
    c.prefactor = 2.0 * kPi * g.L * 2.0 * g.X;
    return c;
}

// coarse grid scan of Re C (kp) or |C|^2 (nls) via the inverse transform
double best_grid_shift(const Correlator& c, const Grid2D& g, bool use_abs) {
    std::vector<cplx> vals = fft::inverse_1d(c.h);
    std::size_t ibest = 0;
    double best = -1e300;
    for (std::size_t p = 0; p < vals.size(); ++p) {
        const double v = use_abs ? std::norm(vals[p]) : vals[p].real();
        if (v > best) {
            best = v;
            ibest = p;
        }
    }
    return g.dx() * static_cast<double>(ibest);
}

OrbitalResult orbital_distance(const Field& u, Family fam) {
    const Grid2D& g = u.grid;
    const Grid1D gl = g.xline();
    SolitonSpec spec(fam, 1.0);
    Profile1D qline = soliton_profile(gl, spec);
    const double qnorm2 = 2.0 * kPi * g.L * std::pow(norm_l2(qline), 2);
    const double unorm2 = std::pow(norm_l2(u), 2);

    Correlator corr = make_correlator(u, qline);
    const bool use_abs = (fam == Family::Nls);
    double a = best_grid_shift(corr, g, use_abs);
    // Newton refinement of the peak of Re C (kp) / |C|^2 (nls)
    for (int it = 0; it < 8; ++it) {
        double g1, g2;
        if (use_abs) {
            const cplx C = corr.C(a), C1 = corr.dC(a), C2 = corr.d2C(a);
            g1 = 2.0 * (C1 * std::conj(C)).real();
            g2 = 2.0 * (C2 * std::conj(C)).real() + 2.0 * std::norm(C1);
        } else {
            g1 = corr.dC(a).real();
            g2 = corr.d2C(a).real();
        }
        if (g2 >= 0.0 || !std::isfinite(g1 / g2)) break; // not a proper max; stay put
        const double step = -g1 / g2;
        a += step;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(a))) break;
    }
    OrbitalResult res;
    const cplx Copt = corr.C(a);
    // fold the shift into the box
    const double period = 2.0 * g.X;
    res.shift = a - period * std::floor((a + g.X) / period);
    res.phase = use_abs ? std::arg(Copt) : 0.0;
    (void)unorm2;
    (void)qnorm2;

    // evaluate the distance by direct subtraction of the sampled orbit
    // member; the quadratic form |u|^2 + |Q|^2 - 2C cannot resolve
    // distances below sqrt(roundoff) of the norms
    Profile1D qa = soliton_profile(gl, SolitonSpec(fam, 1.0, res.shift, res.phase));
    double d2 = 0.0;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const cplx qv = qa.values[i];
        for (std::size_t j = 0; j < g.Ny; ++j) d2 += std::norm(u.values[i * g.Ny + j] - qv);
    }
    res.distance = std::sqrt(d2 * g.dx() * g.dy());
    return res;
}

} // namespace

OrbitalResult orbital_distance_kp(const Field& u) { return orbital_distance(u, Family::Kdv); }
OrbitalResult orbital_distance_nls(const Field& u) { return orbital_distance(u, Family::Nls); }

unsigned worker_count() {
    if (const char* env = std::getenv("TILAB_WORKERS")) {
        const long w = std::strtol(env, nullptr, 10);
        if (w > 0) return static_cast<unsigned>(w);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

EscapeReport run_experiment(const ExperimentSpec& spec) {
    const bool is_nls = (spec.equation == Equation::Nls);
    Grid2D g2(spec.Nx, spec.Ny, spec.X, spec.L);
    const Grid1D gl = g2.xline();

    EscapeReport rep;
    rep.delta = spec.delta;

    // seed profile and soliton
    Field Q = soliton_field(g2, SolitonSpec(is_nls ? Family::Nls : Family::Kdv, 1.0));
    Field u0field(g2, is_nls ? FieldKind::Complex : FieldKind::Real);
    if (!is_nls) {
        UnstableModeKP mode = most_unstable(spec.L, gl);
        rep.sigma0 = mode.sigma_discrete;
        rep.k0 = mode.point.k;
        for (std::size_t i = 0; i < g2.Nx; ++i)
            for (std::size_t j = 0; j < g2.Ny; ++j) {
                const cplx ph = std::polar(1.0, static_cast<double>(mode.point.k) * g2.y(j) / g2.L);
                u0field.values[i * g2.Ny + j] =
                    mode.V.values[i] * ph + std::conj(mode.V.values[i] * ph);
            }
    } else {
        UnstableModeNLS mode = most_unstable_nls(spec.L, gl);
        rep.sigma0 = mode.sigma.real();
        rep.k0 = mode.k;
        for (std::size_t i = 0; i < g2.Nx; ++i) {
            const cplx v = mode.V1.values[i] + cplx(0.0, 1.0) * mode.V2.values[i];
            for (std::size_t j = 0; j < g2.Ny; ++j) {
                const double th = static_cast<double>(mode.k) * g2.y(j) / g2.L;
                u0field.values[i * g2.Ny + j] = 2.0 * std::cos(th) * v;
            }
        }
    }
    rep.c_s = norm_l2(u0field);

    const double qnorm = norm_l2(Q);
    rep.eta = spec.eta_threshold > 0.0 ? spec.eta_threshold : 0.05 * qnorm;

    // optional high-order expansion for remainder tracking
    std::optional<GrenierExpansion> expansion;
    if (spec.track_remainder && spec.M >= 1)
        expansion = build_expansion(spec.equation, spec.L, spec.M, spec.delta, gl, spec.t_max,
                                    spec.iterate_dt);

    Field uinit = add(Q, scale(u0field, spec.delta));

    IntegratorConfig cfg = spec.integrator;
    cfg.t_end = spec.t_max;

    auto distance_of = [&](const Field& u) {
        return is_nls ? orbital_distance_nls(u).distance : orbital_distance_kp(u).distance;
    };

    EvolveCallbacks cb;
    cb.on_sample = [&](double t, const Field& u) -> bool {
        const double d = distance_of(u);
        rep.t.push_back(t);
        rep.distance.push_back(d);
        rep.pi_norm.push_back(norm_l2(project_nonzero_y(u)));
        if (expansion) {
            const double r = t / expansion->dt;
            const auto idx = static_cast<std::size_t>(std::llround(r));
            if (idx < expansion->times.size() &&
                std::abs(expansion->times[idx] - t) < 1e-9 * std::max(1.0, t)) {
                Field uap = assemble(*expansion, idx, g2);
                Field w = sub(sub(u, Q), uap);
                rep.remainder_t.push_back(t);
                rep.remainder_norm.push_back(norm_l2(w));
            }
        }
        return d >= rep.eta;
    };

    Trajectory traj = evolve(uinit, spec.equation, cfg, cb);
    rep.escaped = traj.stopped_early;

    if (rep.escaped && rep.t.size() >= 2) {
        // exponential growth: interpolate the crossing in log-distance
        const std::size_t i = rep.t.size() - 1;
        const double d0 = std::max(rep.distance[i - 1], 1e-300);
        const double d1 = std::max(rep.distance[i], 1e-300);
        const double t0 = rep.t[i - 1], t1 = rep.t[i];
        if (d1 > d0 && rep.eta > d0)
            rep.T_measured = t0 + (t1 - t0) * (std::log(rep.eta) - std::log(d0)) /
                                      (std::log(d1) - std::log(d0));
        else
            rep.T_measured = t1;
    } else {
        rep.T_measured = traj.t_final;
    }
    return rep;
}

ScalingFit scaling_fit(const ExperimentSpec& spec_template, const std::vector<double>& deltas) {
    if (deltas.size() < 2) throw DomainError("scaling_fit: need at least two deltas");
    ScalingFit fit;
    fit.deltas = deltas;
    fit.reports.resize(deltas.size());

    const unsigned workers = std::max(1u, worker_count());
    std::vector<std::future<EscapeReport>> futs(deltas.size());
    std::size_t next = 0;
    while (next < deltas.size()) {
        const std::size_t batch = std::min<std::size_t>(workers, deltas.size() - next);
        for (std::size_t b = 0; b < batch; ++b) {
            ExperimentSpec s = spec_template;
            s.delta = deltas[next + b];
            futs[next + b] = std::async(std::launch::async, [s] { return run_experiment(s); });
        }
        for (std::size_t b = 0; b < batch; ++b) fit.reports[next + b] = futs[next + b].get();
        next += batch;
    }

    fit.sigma0 = fit.reports.front().sigma0;
    // calibrate kappa on the largest delta
    std::size_t iref = 0;
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (deltas[i] > deltas[iref]) iref = i;
    if (!fit.reports[iref].escaped)
        throw NoUnstableMode("scaling_fit: reference experiment did not escape");
    fit.kappa = deltas[iref] * std::exp(fit.sigma0 * fit.reports[iref].T_measured);

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        fit.reports[i].T_predicted = std::log(fit.kappa / deltas[i]) / fit.sigma0;
        if (!fit.reports[i].escaped) continue;
        xs.push_back(std::log(1.0 / deltas[i]));
        ys.push_back(fit.reports[i].T_measured);
        fit.T.push_back(fit.reports[i].T_measured);
    }
    if (xs.size() < 2) throw NoUnstableMode("scaling_fit: fewer than two escapes");
    LinearFit lf = linear_fit(xs, ys);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    return fit;
}

} // namespace tilab
