#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tilab/evolution.hpp"
#include "tilab/kp_spectrum.hpp"
#include "tilab/solitons.hpp"

using namespace tilab;

namespace {

Field kp_seeded(const Grid2D& g, double delta) {
    UnstableModeKP mode = most_unstable(g.L, g.xline());
    Field u = soliton_field(g, SolitonSpec(Family::Kdv, 1.0));
    for (std::size_t i = 0; i < g.Nx; ++i)
        for (std::size_t j = 0; j < g.Ny; ++j) {
            const cplx ph = std::polar(1.0, static_cast<double>(mode.point.k) * g.y(j) / g.L);
            u.values[i * g.Ny + j] += delta * 2.0 * (mode.V.values[i] * ph).real();
        }
    return u;
}

} // namespace

TEST_CASE("soliton is a fixed point of the exponential KP step") {
    // Nx=512 keeps the soliton tail below roundoff at the dealias cutoff;
    // coarser grids leave ~1e-9 coefficients there whose masked linear
    // rotation shows up as a spurious drift
    const Grid2D g(512, 16, 40.0, 4.0);
    Field q = soliton_field(g, SolitonSpec(Family::Kdv, 1.0));
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 2.0;
    cfg.sample_stride = 50;
    Trajectory tr = evolve(q, Equation::KpMoving, cfg);
    Field diff = sub(tr.final_field, q);
    CHECK(norm_l2(diff) < 1e-9);
    for (const auto& s : tr.samples) {
        CHECK(std::abs(s.l2 - tr.samples.front().l2) < 1e-9 * tr.samples.front().l2);
        CHECK(std::abs(s.mass - tr.samples.front().mass) < 1e-9 * std::abs(tr.samples.front().mass));
    }
}

TEST_CASE("KP conserves the L2 norm on a perturbed state") {
    const Grid2D g(256, 16, 40.0, 4.0);
    Field u0 = kp_seeded(g, 1e-2);
    IntegratorConfig cfg;
    cfg.dt = 0.0075;
    cfg.t_end = 3.0;
    cfg.sample_stride = 40;
    Trajectory tr = evolve(u0, Equation::KpMoving, cfg);
    const double ref = tr.samples.front().l2;
    for (const auto& s : tr.samples) CHECK(std::abs(s.l2 - ref) < 1e-8 * ref);
    CHECK(max_imag(tr.final_field) < 1e-10);
}

TEST_CASE("zero data stays zero; dirty initial data is rejected") {
    const Grid2D g(128, 16, 20.0, 4.0);
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.5;
    Trajectory tr = evolve(Field::zero(g), Equation::KpMoving, cfg);
    CHECK(norm_l2(tr.final_field) == 0.0);

    SpectralField bad(g, FieldKind::Real);
    bad.coeff[1] = cplx(0.1); // x-mean on m = 1
    bad.coeff[g.Ny - 1] = cplx(0.1);
    CHECK_THROWS_AS(evolve(transform_inverse(bad), Equation::KpMoving, cfg), ZeroModeViolation);
}

TEST_CASE("ETDRK4 self-convergence order is near 4") {
    const Grid2D g(128, 16, 20.0, 2.0);
    Field u0 = d_dx(oracle::random_band_limited(g, 42u), 1);
    u0 = scale(u0, 0.5 / max_abs(u0));

    auto run = [&](double dt) {
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 0.5;
        cfg.sample_stride = 1000000;
        return evolve(u0, Equation::KpMoving, cfg).final_field;
    };
    Field a = run(0.02), b = run(0.01), c = run(0.005);
    const double e1 = norm_l2(sub(a, b));
    const double e2 = norm_l2(sub(b, c));
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.2);
    CHECK(order < 4.8);
}

TEST_CASE("restart equivalence: one run equals two half runs") {
    const Grid2D g(128, 16, 20.0, 2.0);
    Field u0 = d_dx(oracle::random_band_limited(g, 9u), 1);
    u0 = scale(u0, 0.3 / max_abs(u0));
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    Field full = evolve(u0, Equation::KpMoving, cfg).final_field;
    cfg.t_end = 0.5;
    Field half = evolve(u0, Equation::KpMoving, cfg).final_field;
    Field again = evolve(half, Equation::KpMoving, cfg).final_field;
    CHECK(norm_l2(sub(full, again)) < 1e-10 * std::max(1.0, norm_l2(full)));
}

TEST_CASE("NLS: soliton stationary under Strang splitting") {
    const Grid2D g(256, 8, 20.0, 2.0);
    Field q = soliton_field(g, SolitonSpec(Family::Nls, 1.0));
    IntegratorConfig cfg;
    cfg.dt = 4e-5; // splitting error ~5.5 dt^2 per unit time
    cfg.scheme = Scheme::StrangSplit;
    cfg.dealias = false;
    cfg.t_end = 1.0;
    cfg.sample_stride = 2500;
    Trajectory tr = evolve(q, Equation::Nls, cfg);
    CHECK(norm_l2(sub(tr.final_field, q)) < 1e-8);
}

TEST_CASE("NLS conservation: mass to roundoff, Hamiltonian to O(dt^2)") {
    const Grid2D g(128, 16, 20.0, 2.0);
    Field q = soliton_field(g, SolitonSpec(Family::Nls, 1.0));
    Field pert = oracle::random_band_limited(g, 77u, true, false);
    Field u0 = add(q, scale(pert, 0.01 / max_abs(pert)));

    IntegratorConfig cfg;
    cfg.dt = 5e-4;
    cfg.scheme = Scheme::StrangSplit;
    cfg.dealias = false;
    cfg.t_end = 1.0;
    cfg.sample_stride = 200;
    Trajectory tr = evolve(u0, Equation::Nls, cfg);
    const double m0 = tr.samples.front().mass;
    const double h0 = tr.samples.front().hamiltonian;
    for (const auto& s : tr.samples) {
        CHECK(std::abs(s.mass - m0) < 1e-11 * m0); // both substeps are isometries
        CHECK(std::abs(s.hamiltonian - h0) < 1e-5 * std::abs(h0));
    }
}

TEST_CASE("NLS phase-rotation covariance") {
    const Grid2D g(128, 8, 20.0, 2.0);
    Field q = soliton_field(g, SolitonSpec(Family::Nls, 1.0));
    Field pert = oracle::random_band_limited(g, 5u, true, false);
    Field u0 = add(q, scale(pert, 0.02 / max_abs(pert)));
    const cplx phase = std::polar(1.0, 0.8);

    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.scheme = Scheme::StrangSplit;
    cfg.dealias = false;
    cfg.t_end = 0.5;
    Field a = evolve(scale(u0, phase), Equation::Nls, cfg).final_field;
    Field b = scale(evolve(u0, Equation::Nls, cfg).final_field, phase);
    CHECK(norm_l2(sub(a, b)) < 1e-10 * norm_l2(b));
}

TEST_CASE("NLS Strang self-convergence order is near 2") {
    const Grid2D g(128, 8, 20.0, 2.0);
    Field q = soliton_field(g, SolitonSpec(Family::Nls, 1.0));
    Field pert = oracle::random_band_limited(g, 31u, true, false);
    Field u0 = add(q, scale(pert, 0.05 / max_abs(pert)));
    auto run = [&](double dt) {
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.scheme = Scheme::StrangSplit;
        cfg.dealias = false;
        cfg.t_end = 0.5;
        return evolve(u0, Equation::Nls, cfg).final_field;
    };
    Field a = run(0.02), b = run(0.01), c = run(0.005);
    const double order = std::log2(norm_l2(sub(a, b)) / norm_l2(sub(b, c)));
    CHECK(order > 1.6);
    CHECK(order < 2.4);
}

TEST_CASE("guards: CFL violation and the amplitude watchdog") {
    const Grid2D g(128, 8, 20.0, 2.0);
    Field big = Field::sample(g, FieldKind::Complex, [](double x, double) {
        return cplx(2.0 * std::exp(-x * x / 8.0));
    });
    IntegratorConfig cfg;
    cfg.dt = 0.5; // |u|^2 dt ~ 2
    cfg.scheme = Scheme::StrangSplit;
    cfg.t_end = 1.0;
    CHECK_THROWS_AS(evolve(big, Equation::Nls, cfg), CFLViolation);

    // watchdog with an artificially tight factor
    Field q = soliton_field(g, SolitonSpec(Family::Nls, 1.0));
    Field pert = oracle::random_band_limited(g, 3u, true, false);
    Field u0 = add(q, scale(pert, 0.2 / max_abs(pert)));
    IntegratorConfig cfg2;
    cfg2.dt = 1e-3;
    cfg2.scheme = Scheme::StrangSplit;
    cfg2.dealias = false;
    cfg2.t_end = 2.0;
    cfg2.blowup_factor = 1.0001;
    CHECK_THROWS_AS(evolve(u0, Equation::Nls, cfg2), BlowUpSuspected);
}

TEST_CASE("scaling symmetry of the lab-frame equation") {
    const Grid2D g(128, 16, 20.0, 2.0);
    Field u0 = d_dx(oracle::random_band_limited(g, 21u), 1);
    u0 = scale(u0, 0.5 / max_abs(u0));
    IntegratorConfig cfg;
    cfg.dt = 0.004;

    ScalingCheckReport r1 = kp_scaling_symmetry_check(u0, 1.0, 0.5, cfg);
    CHECK(r1.mismatch < 1e-14);
    CHECK(r1.period_factor == doctest::Approx(1.0));

    ScalingCheckReport r2 = kp_scaling_symmetry_check(u0, 2.0, 0.5, cfg);
    CHECK(r2.mismatch < 1e-6);
    CHECK(r2.period_factor == doctest::Approx(0.25));
}

TEST_CASE("one-shot spec-shaped steps run and keep kinds") {
    const Grid2D g(256, 8, 20.0, 2.0);
    Field q = soliton_field(g, SolitonSpec(Family::Kdv, 1.0));
    Field q1 = step_kp(q, 0.005);
    CHECK(norm_l2(sub(q1, q)) < 1e-10);

    Field nq = soliton_field(g, SolitonSpec(Family::Nls, 1.0));
    Field nq1 = step_nls(nq, 1e-3);
    CHECK(norm_l2(sub(nq1, nq)) < 1e-5);
}
