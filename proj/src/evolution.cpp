#include "tilab/evolution.hpp"

#include <cmath>

#include "tilab/solitons.hpp"

namespace tilab {

namespace {

// phi_k(z) = sum_{n>=0} z^n / (n+k)!, evaluated by series near zero and by
// the downward recursion otherwise; z is purely imaginary for our symbols
// so the exponentials stay on the unit circle.
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
    cplx v = (std::exp(z) - 1.0) / z; // phi_1
    if (k == 1) return v;
    v = (v - 1.0) / z; // phi_2
    if (k == 2) return v;
    return (v - 0.5) / z; // phi_3
}

} // namespace

Stepper::Stepper(const Grid2D& grid, Equation eq, const IntegratorConfig& cfg)
    : grid_(grid), eq_(eq), cfg_(cfg) {
    if (!(cfg.dt > 0.0)) throw CFLViolation("Stepper: dt must be positive");
    const std::size_t n = grid.size();
    E_.resize(n);
    E2_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    phi1h_.resize(n);
    lin_phase_.resize(n);
    da_mask_.assign(n, 1);

    const long cutx = static_cast<long>(grid.Nx) / 3;
    const long cuty = static_cast<long>(grid.Ny) / 3;
    double max_freq = 0.0;
    for (std::size_t i = 0; i < grid.Nx; ++i) {
        const double xi = grid.xi(i);
        const long nx = grid.xmode(i);
        const bool nyqx = (nx == -static_cast<long>(grid.Nx) / 2);
        for (std::size_t j = 0; j < grid.Ny; ++j) {
            const std::size_t idx = i * grid.Ny + j;
            const double ky = grid.eta_y(j);
            const long my = grid.ymode(j);
            const bool nyqy = (my == -static_cast<long>(grid.Ny) / 2);

            if (cfg.dealias && (std::labs(nx) > cutx || std::labs(my) > cuty)) da_mask_[idx] = 0;

            cplx lam(0.0);
            switch (eq) {
                case Equation::KpMoving:
                case Equation::KpLab: {
                    if (nx != 0 && !nyqx) {
                        double w = xi * xi * xi + ky * ky / xi;
                        if (eq == Equation::KpMoving) w += xi;
                        lam = cplx(0.0, w);
                    }
                    break;
                }
                case Equation::Nls: {
                    if (!nyqx && !nyqy) lam = cplx(0.0, -(1.0 + xi * xi + ky * ky));
                    break;
                }
            }
            max_freq = std::max(max_freq, std::abs(lam));

            const cplx z = lam * cfg.dt;
            E_[idx] = std::exp(z);
            E2_[idx] = std::exp(0.5 * z);
            phi1h_[idx] = phi_fn(1, 0.5 * z);
            const cplx p1 = phi_fn(1, z), p2 = phi_fn(2, z), p3 = phi_fn(3, z);
            f1_[idx] = p1 - 3.0 * p2 + 4.0 * p3;
            f2_[idx] = p2 - 2.0 * p3;
            f3_[idx] = 4.0 * p3 - p2;
            lin_phase_[idx] = E_[idx];
        }
        if (!nyqx && nx != 0 && std::labs(nx) <= (cfg.dealias ? cutx : (long)grid.Nx))
            max_xi_da_ = std::max(max_xi_da_, std::abs(xi));
    }
    if (cfg.dt * max_freq > kLinearPhaseCap)
        throw CFLViolation("Stepper: dt * max linear frequency exceeds the phase cap");
}

void Stepper::guard(const std::vector<cplx>& phys) const {
    double sup = 0.0;
    for (const cplx& v : phys) sup = std::max(sup, std::abs(v));
    if (sup0_ < 0.0) sup0_ = sup;
    if (eq_ == Equation::Nls) {
        if (sup0_ > 0.0 && sup > cfg_.blowup_factor * sup0_)
            throw BlowUpSuspected("nls: sup|u| grew past " + std::to_string(cfg_.blowup_factor) +
                                  "x the initial amplitude");
        if (cfg_.scheme == Scheme::StrangSplit) {
            if (cfg_.dt * sup * sup > 0.5)
                throw CFLViolation("nls strang: nonlinear rotation |u|^2 dt > 0.5");
        } else if (cfg_.dt * sup * sup > kRk4ImagStability) {
            throw CFLViolation("nls etdrk4: dt |u|^2 beyond RK4 stability");
        }
    } else {
        if (cfg_.dt * max_xi_da_ * sup > kRk4ImagStability)
            throw CFLViolation("kp etdrk4: dt * xi_max * sup|u| beyond RK4 stability");
    }
}

void Stepper::nonlinear(const std::vector<cplx>& coeff, std::vector<cplx>& out,
                        bool with_guard) const {
    const std::size_t n = grid_.size();
    std::vector<cplx> u(n);
    fft::inverse_2d(coeff.data(), u.data(), grid_.Nx, grid_.Ny);
    if (with_guard) guard(u);
    if (eq_ == Equation::Nls) {
        for (std::size_t i = 0; i < n; ++i) u[i] = cplx(0.0, 1.0) * std::norm(u[i]) * u[i];
        out.resize(n);
        fft::forward_2d(u.data(), out.data(), grid_.Nx, grid_.Ny);
        for (std::size_t i = 0; i < n; ++i)
            if (!da_mask_[i]) out[i] = cplx(0.0);
        return;
    }
    // kp: -(1/2) d/dx (u^2)
    for (std::size_t i = 0; i < n; ++i) u[i] *= u[i];
    out.resize(n);
    fft::forward_2d(u.data(), out.data(), grid_.Nx, grid_.Ny);
    for (std::size_t i = 0; i < grid_.Nx; ++i) {
        const bool nyqx = (grid_.xmode(i) == -static_cast<long>(grid_.Nx) / 2);
        const cplx s = nyqx ? cplx(0.0) : cplx(0.0, -0.5 * grid_.xi(i));
        for (std::size_t j = 0; j < grid_.Ny; ++j) {
            const std::size_t idx = i * grid_.Ny + j;
            out[idx] = da_mask_[idx] ? s * out[idx] : cplx(0.0);
        }
    }
}

void Stepper::step_etdrk4(std::vector<cplx>& c) const {
    const std::size_t n = grid_.size();
    std::vector<cplx> N1, N2, N3, N4;
    std::vector<cplx> a(n), b(n), d(n);

    nonlinear(c, N1, /*with_guard=*/true);
    const double h = cfg_.dt;
    for (std::size_t i = 0; i < n; ++i) a[i] = E2_[i] * c[i] + 0.5 * h * phi1h_[i] * N1[i];
    nonlinear(a, N2);
    for (std::size_t i = 0; i < n; ++i) b[i] = E2_[i] * c[i] + 0.5 * h * phi1h_[i] * N2[i];
    nonlinear(b, N3);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = E2_[i] * a[i] + 0.5 * h * phi1h_[i] * (2.0 * N3[i] - N1[i]);
    nonlinear(d, N4);
    for (std::size_t i = 0; i < n; ++i)
        c[i] = E_[i] * c[i] + h * (f1_[i] * N1[i] + 2.0 * f2_[i] * (N2[i] + N3[i]) + f3_[i] * N4[i]);
}

void Stepper::step_strang(std::vector<cplx>& c) const {
    const std::size_t n = grid_.size();
    std::vector<cplx> u(n);
    fft::inverse_2d(c.data(), u.data(), grid_.Nx, grid_.Ny);
    guard(u);
    const double half = 0.5 * cfg_.dt;
    for (std::size_t i = 0; i < n; ++i) u[i] *= std::polar(1.0, std::norm(u[i]) * half);
    fft::forward_2d(u.data(), c.data(), grid_.Nx, grid_.Ny);
    for (std::size_t i = 0; i < n; ++i) c[i] *= lin_phase_[i];
    fft::inverse_2d(c.data(), u.data(), grid_.Nx, grid_.Ny);
    for (std::size_t i = 0; i < n; ++i) u[i] *= std::polar(1.0, std::norm(u[i]) * half);
    fft::forward_2d(u.data(), c.data(), grid_.Nx, grid_.Ny);
    if (cfg_.dealias)
        for (std::size_t i = 0; i < n; ++i)
            if (!da_mask_[i]) c[i] = cplx(0.0);
}

void Stepper::step(std::vector<cplx>& coeff) const {
    if (eq_ == Equation::Nls && cfg_.scheme == Scheme::StrangSplit)
        step_strang(coeff);
    else
        step_etdrk4(coeff);
    if (eq_ != Equation::Nls) {
        // discrete Z^2: (xi = 0, m != 0) lines stay empty
        for (std::size_t j = 0; j < grid_.Ny; ++j)
            if (grid_.ymode(j) != 0) coeff[j] = cplx(0.0);
    }
}

Field step_kp(const Field& u, double dt) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    Stepper st(u.grid, Equation::KpMoving, cfg);
    SpectralField F = transform_forward(u);
    st.step(F.coeff);
    return transform_inverse(F);
}

Field step_nls(const Field& u, double dt) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.scheme = Scheme::StrangSplit;
    cfg.dealias = false;
    Stepper st(u.grid, Equation::Nls, cfg);
    SpectralField F = transform_forward(u);
    st.step(F.coeff);
    return transform_inverse(F);
}

double kp_mass(const Field& u) {
    cplx s(0.0);
    for (const cplx& v : u.values) s += v;
    return (s * u.grid.dx() * u.grid.dy()).real();
}

double nls_mass(const Field& u) {
    double s = 0.0;
    for (const cplx& v : u.values) s += std::norm(v);
    return s * u.grid.dx() * u.grid.dy();
}

double nls_hamiltonian(const Field& u) {
    SpectralField F = transform_forward(u);
    const Grid2D& g = u.grid;
    double grad = 0.0;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const double xi2 = g.xi(i) * g.xi(i);
        for (std::size_t j = 0; j < g.Ny; ++j) {
            const double ky = g.eta_y(j);
            grad += (xi2 + ky * ky) * std::norm(F.coeff[i * g.Ny + j]);
        }
    }
    const double box = 2.0 * g.X * 2.0 * kPi * g.L;
    double quart = 0.0;
    for (const cplx& v : u.values) quart += std::norm(v) * std::norm(v);
    return grad * box + nls_mass(u) - 0.5 * quart * g.dx() * g.dy();
}

Trajectory evolve(const Field& u0, Equation eq, const IntegratorConfig& cfg,
                  const EvolveCallbacks& callbacks) {
    if (eq != Equation::Nls) {
        const double viol = nonzero_mode_xmean(u0);
        if (viol > kZeroModeTol)
            throw ZeroModeViolation("evolve: initial data carries x-mean on transverse modes (" +
                                    std::to_string(viol) + ")");
    }
    Stepper st(u0.grid, eq, cfg);
    SpectralField F = transform_forward(u0);
    if (eq != Equation::Nls) F = clean_zero_modes(F);

    const std::size_t nsteps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    Trajectory traj;
    auto record = [&](double t, bool force) -> bool {
        Field u = transform_inverse(F);
        TrajectorySample s;
        s.t = t;
        s.l2 = norm_l2(u);
        s.sup = max_abs(u);
        if (eq == Equation::Nls) {
            s.mass = nls_mass(u);
            s.hamiltonian = nls_hamiltonian(u);
        } else {
            s.mass = kp_mass(u);
        }
        traj.samples.push_back(s);
        if (cfg.store_fields) traj.fields.push_back(u);
        bool stop = false;
        if (callbacks.on_sample) stop = callbacks.on_sample(t, u);
        (void)force;
        return stop;
    };

    if (record(0.0, true)) {
        traj.stopped_early = true;
        traj.t_final = 0.0;
        traj.final_field = transform_inverse(F);
        return traj;
    }
    for (std::size_t n = 1; n <= nsteps; ++n) {
        st.step(F.coeff);
        const double t = cfg.dt * static_cast<double>(n);
        if (n % cfg.sample_stride == 0 || n == nsteps) {
            if (record(t, n == nsteps)) {
                traj.stopped_early = (n != nsteps);
                traj.t_final = t;
                traj.final_field = transform_inverse(F);
                return traj;
            }
        }
    }
    traj.t_final = cfg.dt * static_cast<double>(nsteps);
    traj.final_field = transform_inverse(F);
    return traj;
}

ScalingCheckReport kp_scaling_symmetry_check(const Field& u0, double lambda_scale, double t_end,
                                             const IntegratorConfig& cfg) {
    ScalingCheckReport rep;
    rep.lambda = lambda_scale;
    const Grid2D& g = u0.grid;

    // reference run
    IntegratorConfig c1 = cfg;
    c1.t_end = t_end;
    Trajectory t1 = evolve(u0, Equation::KpLab, c1);

    // scaled data on the scaled grid: the nodes line up exactly, so the
    // scaled samples are the same array times lambda^2
    const double lam = lambda_scale;
    Grid2D g2(g.Nx, g.Ny, g.X / lam, g.L / (lam * lam));
    Field v0(g2, u0.kind);
    for (std::size_t i = 0; i < u0.values.size(); ++i) v0.values[i] = lam * lam * u0.values[i];

    IntegratorConfig c2 = cfg;
    c2.dt = cfg.dt / (lam * lam * lam);
    c2.t_end = t_end / (lam * lam * lam);
    Trajectory t2 = evolve(v0, Equation::KpLab, c2);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u0.values.size(); ++i) {
        const cplx want = lam * lam * t1.final_field.values[i];
        num += std::norm(t2.final_field.values[i] - want);
        den += std::norm(want);
    }
    rep.mismatch = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    rep.period_factor = g2.L / g.L; // = lambda^{-2}
    return rep;
}

} // namespace tilab
