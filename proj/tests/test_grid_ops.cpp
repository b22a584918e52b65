#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tilab/ops.hpp"
#include "tilab/solitons.hpp"

using namespace tilab;

namespace {
const Grid2D kGrid(256, 32, 40.0, 4.0);
}

TEST_CASE("grid constructor enforces power-of-two sizes") {
    CHECK_THROWS_AS(Grid2D(100, 32, 40.0, 4.0), DomainError);
    CHECK_THROWS_AS(Grid2D(256, 48, 40.0, 4.0), DomainError);
    CHECK_THROWS_AS(Grid2D(256, 32, -1.0, 4.0), DomainError);
}

TEST_CASE("constant field transforms to pure zero-frequency mass") {
    Field one = Field::sample(kGrid, FieldKind::Real, [](double, double) { return cplx(1.0); });
    SpectralField F = transform_forward(one);
    CHECK(std::abs(F.coeff[0] - cplx(1.0)) < 1e-13);
    double rest = 0.0;
    for (std::size_t i = 1; i < F.coeff.size(); ++i) rest += std::abs(F.coeff[i]);
    CHECK(rest < 1e-10);
}

TEST_CASE("cos(pi x / X) produces the two symmetric lines n = +-1") {
    Field f = Field::sample(kGrid, FieldKind::Real,
                            [](double x, double) { return cplx(std::cos(kPi * x / 40.0)); });
    SpectralField F = transform_forward(f);
    for (std::size_t i = 0; i < kGrid.Nx; ++i)
        for (std::size_t j = 0; j < kGrid.Ny; ++j) {
            const cplx c = F.at(i, j);
            if (std::labs(kGrid.xmode(i)) == 1 && kGrid.ymode(j) == 0)
                CHECK(std::abs(c - cplx(0.5)) < 1e-13);
            else
                CHECK(std::abs(c) < 1e-12);
        }
}

TEST_CASE("round trip and Parseval on a random real field") {
    Field f = oracle::random_band_limited(kGrid, 11u);
    SpectralField F = transform_forward(f);
    Field back = transform_inverse(F);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        err = std::max(err, std::abs(f.values[i] - back.values[i]));
        scale = std::max(scale, std::abs(f.values[i]));
    }
    CHECK(err < 1e-12 * scale);

    // physical quadrature against the spectral sum
    double phys = 0.0;
    for (const cplx& v : f.values) phys += std::norm(v);
    phys *= kGrid.dx() * kGrid.dy();
    const double spec = std::pow(norm_l2(F), 2);
    CHECK(std::abs(phys - spec) < 1e-12 * phys);
    CHECK(std::abs(std::pow(norm_l2(f), 2) - phys) < 1e-12 * phys);

    // real input: imaginary residue after round trip
    CHECK(max_imag(back) < 1e-12);
}

TEST_CASE("d_dx exact on harmonics, zero on constants") {
    Field f = Field::sample(kGrid, FieldKind::Real,
                            [](double x, double) { return cplx(std::sin(kPi * x / 40.0)); });
    Field d = d_dx(f, 1);
    double err = 0.0;
    for (std::size_t i = 0; i < kGrid.Nx; ++i)
        for (std::size_t j = 0; j < kGrid.Ny; ++j)
            err = std::max(err, std::abs(d.at(i, j) -
                                         cplx(kPi / 40.0 * std::cos(kPi * kGrid.x(i) / 40.0))));
    CHECK(err < 1e-12);

    Field c = Field::sample(kGrid, FieldKind::Real, [](double, double) { return cplx(2.5); });
    for (int order : {1, 2, 3}) CHECK(max_abs(d_dx(c, order)) < 1e-12);
    CHECK_THROWS_AS(d_dx(f, 4), DomainError);
}

TEST_CASE("d_dx of the sampled soliton matches the analytic derivative") {
    const Grid2D g(1024, 2, 40.0, 4.0);
    Field q = soliton_field(g, SolitonSpec(Family::Kdv, 1.0));
    Field d = d_dx(q, 1);
    double err = 0.0;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const double x = g.x(i);
        const double s = 1.0 / std::cosh(0.5 * x);
        const double want = -3.0 * s * s * std::tanh(0.5 * x);
        err = std::max(err, std::abs(d.at(i, 0) - cplx(want)));
    }
    CHECK(err < 1e-10);
}

TEST_CASE("antideriv_x inverts d_dx up to the per-mode x-mean") {
    Field f = oracle::random_band_limited(kGrid, 7u, /*mean_free=*/false);
    Field fd = d_dx(f, 1);
    Field g = antideriv_x(fd);
    // f minus its per-mode x-mean
    SpectralField F = transform_forward(f);
    for (std::size_t j = 0; j < kGrid.Ny; ++j) F.coeff[j] = cplx(0.0);
    Field fm = transform_inverse(F);
    double err = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        err = std::max(err, std::abs(g.values[i] - fm.values[i]));
    CHECK(err < 1e-12 * std::max(1.0, max_abs(fm)));

    SUBCASE("single harmonic antiderivative") {
        Field c = Field::sample(kGrid, FieldKind::Real,
                                [](double x, double) { return cplx(std::cos(kPi * x / 40.0)); });
        Field a = antideriv_x(c);
        double e2 = 0.0;
        for (std::size_t i = 0; i < kGrid.Nx; ++i)
            e2 = std::max(e2, std::abs(a.at(i, 0) -
                                       cplx(40.0 / kPi * std::sin(kPi * kGrid.x(i) / 40.0))));
        CHECK(e2 < 1e-12);
    }

    SUBCASE("x-mean on a transverse mode is rejected") {
        SpectralField bad(kGrid, FieldKind::Complex);
        bad.coeff[1] = cplx(0.5); // (xi=0, m=1)
        Field b = transform_inverse(bad);
        CHECK_THROWS_AS(antideriv_x(b), ZeroModeViolation);
    }

    SUBCASE("d_dx after antideriv_x is the identity on mean-free fields") {
        Field h = project_nonzero_y(oracle::random_band_limited(kGrid, 13u));
        // remove x-means entirely so the inverse pair is exact
        SpectralField H = transform_forward(h);
        for (std::size_t j = 0; j < kGrid.Ny; ++j) H.coeff[j] = cplx(0.0);
        h = transform_inverse(H);
        Field round = d_dx(antideriv_x(h), 1);
        double e3 = 0.0;
        for (std::size_t i = 0; i < h.values.size(); ++i)
            e3 = std::max(e3, std::abs(round.values[i] - h.values[i]));
        CHECK(e3 < 1e-12 * std::max(1.0, max_abs(h)));
    }
}

TEST_CASE("projection Pi removes exactly the y-mean") {
    Field q = soliton_field(kGrid, SolitonSpec(Family::Kdv, 1.0));
    CHECK(max_abs(project_nonzero_y(q)) < 1e-13); // y-independent data projects to zero

    Field f = oracle::random_band_limited(kGrid, 3u);
    Field p = project_nonzero_y(f);
    Field pp = project_nonzero_y(p);
    double err = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        err = std::max(err, std::abs(pp.values[i] - p.values[i]));
    CHECK(err < 1e-13);

    // orthogonality <Pi f, f - Pi f> = 0
    const cplx ip = inner(p, sub(f, p));
    CHECK(std::abs(ip) < 1e-10 * std::pow(norm_l2(f), 2));

    // a field already on a nonzero mode is untouched
    Field e = Field::sample(kGrid, FieldKind::Complex, [](double x, double y) {
        return std::polar(1.0, y / 4.0) * std::exp(-x * x / 50.0);
    });
    Field pe = project_nonzero_y(e);
    double err2 = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i)
        err2 = std::max(err2, std::abs(pe.values[i] - e.values[i]));
    CHECK(err2 < 1e-12);
}

TEST_CASE("norms: zero, soliton L2 value, monotonicity, Z2 gate") {
    Field z = Field::zero(kGrid);
    Norms nz = norms(z, 1);
    CHECK(nz.l2 == 0.0);
    CHECK(nz.hs == 0.0);
    CHECK(nz.z2 == 0.0);

    // |Q|^2 over the cylinder = 2 pi L * integral of 9 sech^4(x/2)
    const double qint =
        oracle::line_integral([](double x) { return std::pow(kdv_Q(x), 2); });
    CHECK(std::abs(qint - 24.0) < 1e-10); // quadrature oracle agrees with the closed form
    Field q = soliton_field(kGrid, SolitonSpec(Family::Kdv, 1.0));
    const double want = std::sqrt(2.0 * kPi * kGrid.L * qint);
    CHECK(std::abs(norm_l2(q) - want) < 1e-9 * want);

    Field f = oracle::random_band_limited(kGrid, 19u);
    Norms nf = norms(f, 1);
    CHECK(nf.hs >= nf.l2);
    Norms nf3 = norms(f, 3);
    CHECK(nf3.hs >= nf.hs);

    SpectralField bad(kGrid, FieldKind::Complex);
    bad.coeff[2] = cplx(1.0); // (xi=0, m=2)
    CHECK_THROWS_AS(norms(transform_inverse(bad), 1), ZeroModeViolation);
}

TEST_CASE("dealias: band-limited input unchanged, top third removed") {
    Field f = oracle::random_band_limited(kGrid, 23u);
    SpectralField F = transform_forward(f);
    SpectralField Fd = dealias(F);
    // the only difference is roundoff dust beyond the cutoff
    double diff = 0.0;
    for (std::size_t i = 0; i < F.coeff.size(); ++i) diff = std::max(diff, std::abs(F.coeff[i] - Fd.coeff[i]));
    CHECK(diff < 1e-14);

    SpectralField top(kGrid, FieldKind::Complex);
    // place mass beyond the cutoff in x and in y
    for (std::size_t i = 0; i < kGrid.Nx; ++i)
        for (std::size_t j = 0; j < kGrid.Ny; ++j)
            if (std::labs(kGrid.xmode(i)) > static_cast<long>(kGrid.Nx) / 3 ||
                std::labs(kGrid.ymode(j)) > static_cast<long>(kGrid.Ny) / 3)
                top.coeff[i * kGrid.Ny + j] = cplx(1.0);
    SpectralField td = dealias(top);
    for (const cplx& c : td.coeff) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("dealiased product agrees with the double-resolution oracle") {
    Field f = oracle::random_band_limited(kGrid, 5u);
    Field g = oracle::random_band_limited(kGrid, 6u);
    Field prod = dealiased_product(f, g);
    SpectralField P = transform_forward(prod);

    // oracle: zero-pad both spectra onto a twice-finer grid, multiply there,
    // transform back and read the low modes (alias-free by construction)
    const Grid2D fine(2 * kGrid.Nx, 2 * kGrid.Ny, kGrid.X, kGrid.L);
    auto embed = [&](const Field& u) {
        SpectralField U = transform_forward(u);
        SpectralField E(fine, u.kind);
        for (std::size_t i = 0; i < kGrid.Nx; ++i)
            for (std::size_t j = 0; j < kGrid.Ny; ++j) {
                const long nx = kGrid.xmode(i), my = kGrid.ymode(j);
                const std::size_t fi = (nx >= 0) ? static_cast<std::size_t>(nx)
                                                 : fine.Nx - static_cast<std::size_t>(-nx);
                const std::size_t fj = (my >= 0) ? static_cast<std::size_t>(my)
                                                 : fine.Ny - static_cast<std::size_t>(-my);
                E.coeff[fi * fine.Ny + fj] = U.at(i, j);
            }
        return transform_inverse(E);
    };
    Field ff = embed(f), gf = embed(g);
    Field pf(fine, FieldKind::Real);
    for (std::size_t i = 0; i < pf.values.size(); ++i) pf.values[i] = ff.values[i] * gf.values[i];
    SpectralField PF = transform_forward(pf);

    double err = 0.0;
    for (std::size_t i = 0; i < kGrid.Nx; ++i)
        for (std::size_t j = 0; j < kGrid.Ny; ++j) {
            const long nx = kGrid.xmode(i), my = kGrid.ymode(j);
            if (std::labs(nx) > static_cast<long>(kGrid.Nx) / 3 ||
                std::labs(my) > static_cast<long>(kGrid.Ny) / 3)
                continue; // zeroed by the 2/3 rule
            const std::size_t fi = (nx >= 0) ? static_cast<std::size_t>(nx)
                                             : fine.Nx - static_cast<std::size_t>(-nx);
            const std::size_t fj = (my >= 0) ? static_cast<std::size_t>(my)
                                             : fine.Ny - static_cast<std::size_t>(-my);
            err = std::max(err, std::abs(P.at(i, j) - PF.coeff[fi * fine.Ny + fj]));
        }
    CHECK(err < 1e-13);
}

TEST_CASE("laplacian matches the closed form on a harmonic") {
    Field f = Field::sample(kGrid, FieldKind::Complex, [](double x, double y) {
        return std::polar(1.0, kPi * x / 40.0 + 2.0 * y / 4.0);
    });
    Field lap = laplacian(f);
    const double want = -(std::pow(kPi / 40.0, 2) + std::pow(2.0 / 4.0, 2));
    double err = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        err = std::max(err, std::abs(lap.values[i] - want * f.values[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("1-D profile calculus mirrors the 2-D operations") {
    const Grid1D g(512, 40.0);
    Profile1D p = Profile1D::sample(g, 1, [](double x) {
        return cplx(std::exp(-x * x / 32.0) * std::sin(kPi * x / 10.0));
    });
    // the sampled profile has (numerically) zero mean; antideriv then deriv
    Profile1D q = deriv(antideriv(p), 1);
    double err = 0.0;
    for (std::size_t i = 0; i < g.Nx; ++i) err = std::max(err, std::abs(q.values[i] - p.values[i]));
    CHECK(err < 1e-11);

    // H^s line norm ordering
    CHECK(norm_hs_line(p, 2) >= norm_hs_line(p, 1));
    CHECK(norm_hs_line(p, 1) >= norm_l2(p));

    Profile1D bad(g, 2);
    for (auto& v : bad.values) v = cplx(1.0);
    CHECK_THROWS_AS(antideriv(bad), ZeroModeViolation);
}

TEST_CASE("real fields have Hermitian-symmetric spectra") {
    Field f = oracle::random_band_limited(kGrid, 29u);
    SpectralField F = transform_forward(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < kGrid.Nx; ++i)
        for (std::size_t j = 0; j < kGrid.Ny; ++j) {
            const std::size_t i2 = (kGrid.Nx - i) % kGrid.Nx;
            const std::size_t j2 = (kGrid.Ny - j) % kGrid.Ny;
            worst = std::max(worst, std::abs(F.at(i, j) - std::conj(F.at(i2, j2))));
        }
    CHECK(worst < 1e-13);
}
