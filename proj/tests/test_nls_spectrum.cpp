#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tilab/linalg.hpp"
#include "tilab/nls_spectrum.hpp"
#include "tilab/solitons.hpp"

using namespace tilab;

namespace {
const Grid1D kGrid(512, 40.0);
const Grid1D kCoarse(256, 40.0);
} // namespace

TEST_CASE("L+ and L- spectra match the solvable-potential values") {
    // L+ = -dxx + 1 - 6 sech^2: bound states of the lam=2 potential are
    // -4, -1, so L+ has exactly the discrete eigenvalues -3 and 0.
    // L- = -dxx + 1 - 2 sech^2: single bound state -1, so L- has only 0.
    auto [Lp, Lm] = assemble_Lpm(kGrid);
    linalg::SymEigen ep = linalg::sym_eigen(Lp);
    linalg::SymEigen em = linalg::sym_eigen(Lm);

    CHECK(std::abs(ep.values(0) + 3.0) < 1e-6);
    CHECK(std::abs(ep.values(1) - 0.0) < 1e-6);
    CHECK(ep.values(2) > 0.9); // continuum onset near 1

    CHECK(std::abs(em.values(0) - 0.0) < 1e-6);
    CHECK(em.values(1) > 0.9);

    // eigenfunction checks: L+ Q^2 = -3 Q^2, L+ Q' = 0, L- Q = 0
    Profile1D q = nls_Q_profile(kGrid);
    Profile1D q2(kGrid, 0);
    for (std::size_t i = 0; i < kGrid.Nx; ++i) q2.values[i] = q.values[i] * q.values[i];
    Profile1D r = apply_Lplus(q2);
    double err = 0.0;
    for (std::size_t i = 0; i < kGrid.Nx; ++i)
        err = std::max(err, std::abs(r.values[i] + 3.0 * q2.values[i]));
    CHECK(err < 1e-8);

    Profile1D qx = deriv(q, 1);
    CHECK(norm_l2(apply_Lplus(qx)) < 1e-8 * norm_l2(qx));
    CHECK(norm_l2(apply_Lminus(q)) < 1e-8 * norm_l2(q));
}

TEST_CASE("eps = 0: no unstable mode, fourfold zero eigenvalue") {
    CHECK(!transverse_eigen(0.0, kCoarse).has_value());
    Eigen::VectorXcd evs = block_eigenvalues(0.0, kCoarse);
    int near_zero = 0;
    for (Eigen::Index i = 0; i < evs.size(); ++i)
        if (std::abs(evs(i)) < 1e-3) ++near_zero; // Jordan pairs split like sqrt(roundoff)
    CHECK(near_zero == 4);
}

TEST_CASE("small eps: unique real unstable eigenvalue with slope 2") {
    auto m = transverse_eigen(0.02, kCoarse);
    REQUIRE(m.has_value());
    CHECK(m->sigma.imag() == 0.0);
    CHECK(m->sigma.real() / 0.02 == doctest::Approx(2.0).epsilon(0.05));
    CHECK(eigen_residual(*m) < 1e-8);
    CHECK(conservation_residual(*m) < 1e-8);
    // normalized pair
    const double nrm =
        std::sqrt(std::pow(norm_l2(m->V1), 2) + std::pow(norm_l2(m->V2), 2));
    CHECK(nrm == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigenvalues of the block matrix come in quadruples") {
    Eigen::VectorXcd evs = block_eigenvalues(0.4, kCoarse);
    double s = 0.0;
    for (Eigen::Index i = 0; i < evs.size(); ++i) s = std::max(s, evs(i).real());
    REQUIRE(s > kUnstableDetectTol);
    auto present = [&](cplx target) {
        for (Eigen::Index i = 0; i < evs.size(); ++i)
            if (std::abs(evs(i) - target) < 1e-8 * std::max(1.0, std::abs(target))) return true;
        return false;
    };
    CHECK(present(cplx(s, 0.0)));
    CHECK(present(cplx(-s, 0.0)));

    // a genuinely complex quadruple away from the axes
    for (Eigen::Index i = 0; i < evs.size(); ++i) {
        const cplx z = evs(i);
        if (std::abs(z.real()) > 1e-3 && std::abs(z.imag()) > 1e-3) {
            CHECK(present(std::conj(z)));
            CHECK(present(-z));
            break;
        }
    }
}

TEST_CASE("sigma(eps) is even in eps and dies beyond the cutoff") {
    auto sp = sigma_of_epsilon(0.3, kCoarse);
    auto sm = sigma_of_epsilon(-0.3, kCoarse);
    REQUIRE(sp.has_value());
    REQUIRE(sm.has_value());
    CHECK(*sp == doctest::Approx(*sm).epsilon(1e-12)); // eps enters as eps^2

    CHECK(!transverse_eigen(2.0, kCoarse).has_value()); // beyond the band
}

TEST_CASE("mode pair (sigma, -sigma) swaps the sign of the second component") {
    // if (u, v) solves with sigma then (u, -v) solves with -sigma
    auto m = transverse_eigen(0.5, kCoarse);
    REQUIRE(m.has_value());
    const double e2 = m->epsilon * m->epsilon;
    Profile1D a = apply_Lminus(m->V2);
    Profile1D b = apply_Lplus(m->V1);
    double res = 0.0;
    for (std::size_t i = 0; i < kCoarse.Nx; ++i) {
        const cplx r1 = -m->sigma * m->V1.values[i] + (a.values[i] + e2 * m->V2.values[i]);
        const cplx r2 = -m->sigma * (-m->V2.values[i]) + (b.values[i] + e2 * m->V1.values[i]);
        res += std::norm(r1) + std::norm(r2);
    }
    CHECK(std::sqrt(res * kCoarse.dx()) < 1e-7);
}

TEST_CASE("bifurcation check: theta and both slopes") {
    BifurcationReport rep = bifurcation_check(kCoarse);
    CHECK(std::abs(rep.theta - 1.0 / std::sqrt(3.0)) < 1e-8);
    CHECK(rep.omega1_unstable == doctest::Approx(2.0).epsilon(0.02));
    // the stable pair bifurcates at rate 2 theta (omega_1^2 = -4 theta^2)
    CHECK(rep.omega1_stable_imag == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(0.05));
}

TEST_CASE("cutoff, L0 and the most unstable mode scan") {
    const double eps_c = measure_epsilon_cutoff(kCoarse);
    // L+ + eps^2 loses its negative direction at eps = sqrt(3)
    CHECK(eps_c == doctest::Approx(std::sqrt(3.0)).epsilon(0.01));
    CHECK(measure_L0(kCoarse) == doctest::Approx(1.0 / eps_c).epsilon(1e-12));

    UnstableModeNLS m = most_unstable_nls(3.0, kCoarse);
    CHECK(m.k >= 1);
    CHECK(m.sigma.real() > 0.0);
    CHECK(m.L == 3.0);
    // every admissible integer k has sigma no larger than the winner
    for (long k = 1; static_cast<double>(k) / 3.0 < eps_c; ++k) {
        auto s = sigma_of_epsilon(static_cast<double>(k) / 3.0, kCoarse);
        if (s) CHECK(*s <= m.sigma.real() + 1e-12);
    }

    CHECK_THROWS_AS(most_unstable_nls(0.1, kCoarse), NoUnstableMode);

    // admissible k set grows with L
    UnstableModeNLS m50 = most_unstable_nls(50.0, kCoarse);
    CHECK(m50.sigma.real() >= m.sigma.real() - 1e-9);
}
