#include "tilab/kp_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "tilab/linalg.hpp"
#include "tilab/solitons.hpp"

namespace tilab {

namespace {
const double kSqrt3 = std::sqrt(3.0);

// Circulant matrix of a spectral multiplier: M = F^{-1} diag(symbol) F.
// Entry M[a][b] depends on (a-b) mod Nx only; one inverse transform gives
// the generating column.
Eigen::MatrixXd symbol_matrix(const Grid1D& g, const std::vector<cplx>& symbol) {
    const std::size_t n = g.Nx;
    std::vector<cplx> col = fft::inverse_1d(symbol); // c_p = sum_n s_n e^{i 2 pi n p / N}
    Eigen::MatrixXd M(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t p = (a + n - b) % n;
            M(a, b) = col[p].real() / static_cast<double>(n);
        }
    return M;
}

std::vector<cplx> dx_symbols(const Grid1D& g, int order) {
    std::vector<cplx> s(g.Nx);
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const bool nyq = (g.mode(i) == -static_cast<long>(g.Nx) / 2);
        if (order % 2 == 1 && nyq) {
            s[i] = 0.0;
            continue;
        }
        cplx v(1.0);
        for (int k = 0; k < order; ++k) v *= cplx(0.0, g.xi(i));
        s[i] = v;
    }
    return s;
}

std::vector<cplx> antideriv_symbols(const Grid1D& g) {
    std::vector<cplx> s(g.Nx);
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const bool nyq = (g.mode(i) == -static_cast<long>(g.Nx) / 2);
        s[i] = (g.mode(i) == 0 || nyq) ? cplx(0.0) : 1.0 / cplx(0.0, g.xi(i));
    }
    return s;
}

Profile1D q_profile(const Grid1D& g) {
    return sample_periodized(g, [](double x) { return cplx(kdv_Q(x)); });
}

} // namespace

double sigma_of_mu(double mu) {
    if (mu < 1.0 || mu > 2.0) throw DomainError("sigma_of_mu: mu outside [1,2]");
    return 0.5 * mu * (mu - 1.0) * (2.0 - mu);
}

double k_of_mu(double mu, double L) {
    if (mu < 1.0 || mu > 2.0) throw DomainError("k_of_mu: mu outside [1,2]");
    return 0.25 * kSqrt3 * L * mu * (2.0 - mu);
}

double mu_of_k(long k, double L) {
    const double r = 4.0 * static_cast<double>(k) / (kSqrt3 * L);
    if (!(r > 0.0) || !(r < 1.0))
        throw NoSuchMode("mu_of_k: k=" + std::to_string(k) + " not on the branch for L=" +
                         std::to_string(L));
    return 1.0 + std::sqrt(1.0 - r);
}

DispersionPoint dispersion_point(long k, double L) {
    DispersionPoint p;
    p.mu = mu_of_k(k, L);
    p.sigma = sigma_of_mu(p.mu);
    p.lambda = 2.0 * p.sigma;
    p.eta = p.mu * (2.0 - p.mu);
    p.k = k;
    p.L = L;
    return p;
}

double mu_of_max_sigma() { return 1.0 + 1.0 / kSqrt3; }

std::vector<DispersionPoint> admissible_modes(double L) {
    if (!(L > 0.0)) throw DomainError("admissible_modes: L must be positive");
    std::vector<DispersionPoint> out;
    const double kmax = kSqrt3 * L / 4.0; // strict upper bound, sigma -> 0 there
    for (long k = 1; static_cast<double>(k) < kmax; ++k) out.push_back(dispersion_point(k, L));
    return out;
}

DispersionPoint most_unstable_point(double L) {
    auto modes = admissible_modes(L);
    if (modes.empty())
        throw NoUnstableMode("no unstable transverse mode: L=" + std::to_string(L) +
                             " <= 4/sqrt(3)");
    // max sigma, smallest k on ties
    const DispersionPoint* best = &modes.front();
    for (const auto& m : modes)
        if (m.sigma > best->sigma + 0.0) best = &m;
    return *best;
}

double quartic_P(double r, double lambda, double eta) {
    return ((r * r - 4.0) * r + 4.0 * lambda) * r + 3.0 * eta * eta;
}

std::array<cplx, 4> quartic_roots(double lambda, double eta) {
    // companion matrix of r^4 + 0 r^3 - 4 r^2 + 4 lambda r + 3 eta^2
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(4, 4);
    C(1, 0) = C(2, 1) = C(3, 2) = 1.0;
    C(0, 3) = -3.0 * eta * eta;
    C(1, 3) = -4.0 * lambda;
    C(2, 3) = 4.0;
    C(3, 3) = 0.0;
    linalg::GenEigen eig = linalg::general_eigen(C);
    std::array<cplx, 4> roots{};
    for (int i = 0; i < 4; ++i) roots[i] = eig.values(i);
    // Newton polish; the branch roots are simple and well separated.
    auto P = [&](cplx r) { return ((r * r - 4.0) * r + 4.0 * lambda) * r + 3.0 * eta * eta; };
    auto dP = [&](cplx r) { return (4.0 * r * r - 8.0) * r + 4.0 * lambda; };
    for (cplx& r : roots)
        for (int it = 0; it < 50; ++it) {
            const cplx step = P(r) / dP(r);
            r -= step;
            if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(r))) break;
        }
    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

double C_plus(double mu, double lambda) { return mu * mu * mu + 2.0 * mu + lambda - 3.0 * mu * mu; }

double AlgebraReport::max() const {
    double m = P_residual;
    m = std::max(m, Cplus_residual);
    m = std::max(m, lambda_identity);
    m = std::max(m, eta_identity);
    m = std::max(m, growth_identity);
    m = std::max(m, mode_identity);
    m = std::max(m, eta_k_link);
    return m;
}

AlgebraReport verify_algebraic_system(const DispersionPoint& p) {
    AlgebraReport r;
    r.P_residual = std::abs(quartic_P(p.mu, p.lambda, p.eta));
    r.Cplus_residual = std::abs(C_plus(p.mu, p.lambda));
    r.lambda_identity = std::abs(p.lambda + p.mu * (p.mu - 1.0) * (p.mu - 2.0));
    r.eta_identity = std::abs(p.eta * p.eta - p.mu * p.mu * (p.mu - 2.0) * (p.mu - 2.0));
    r.growth_identity = std::abs(2.0 * p.sigma - p.mu * (p.mu - 1.0) * (2.0 - p.mu));
    r.mode_identity = std::abs(static_cast<double>(p.k) - k_of_mu(p.mu, p.L));
    r.eta_k_link = std::abs(3.0 * p.eta * p.eta -
                            16.0 * static_cast<double>(p.k * p.k) / (p.L * p.L));
    return r;
}

double g_mu(double z, double mu, double lambda) {
    return std::exp(mu * z) * (mu * mu * mu + 2.0 * mu + lambda - 3.0 * mu * mu * std::tanh(z));
}

namespace {
// h(z) = 1 - tanh z and E(z) = e^{mu z} h(z), written without the
// catastrophic 1 - tanh cancellation that e^{mu z} would amplify.
double one_minus_tanh(double z) {
    return z >= 0.0 ? 2.0 * std::exp(-2.0 * z) / (1.0 + std::exp(-2.0 * z))
                    : 2.0 / (1.0 + std::exp(2.0 * z));
}
double exp_mu_h(double z, double mu) {
    return z >= 0.0 ? 2.0 * std::exp((mu - 2.0) * z) / (1.0 + std::exp(-2.0 * z))
                    : 2.0 * std::exp(mu * z) / (1.0 + std::exp(2.0 * z));
}
} // namespace

double g_mu_branch(double z, double mu) { return 3.0 * mu * mu * exp_mu_h(z, mu); }

double g_mu_branch_zz(double z, double mu) {
    // e^{mu z}[mu^2 h - 2 mu sech^2 + 2 sech^2 tanh] with sech^2 = h(2-h)
    // and tanh = 1-h, everything built on the stable core E = e^{mu z} h
    const double h = one_minus_tanh(z);
    const double E = exp_mu_h(z, mu);
    return 3.0 * mu * mu * E * (mu * mu - 2.0 * mu * (2.0 - h) + 2.0 * (2.0 - h) * (1.0 - h));
}

namespace {
void fix_phase_and_norm(Profile1D& V) {
    const std::size_t i0 = V.grid.Nx / 2; // x = 0 sample
    const double sign = V.values[i0].real() >= 0.0 ? 1.0 : -1.0;
    const double nrm = norm_l2(V);
    if (!(nrm > 0.0)) throw DomainError("eigenprofile: degenerate profile");
    for (cplx& v : V.values) v *= sign / nrm;
}
} // namespace

double eigen_residual_kp(const UnstableModeKP& mode) {
    const double j = static_cast<double>(mode.point.k) / mode.point.L;
    Profile1D Av = apply_Aj(mode.V, j);
    double res = 0.0;
    for (std::size_t i = 0; i < mode.V.values.size(); ++i)
        res += std::norm(mode.sigma_discrete * mode.V.values[i] + Av.values[i]);
    return std::sqrt(res * mode.V.grid.dx()) / norm_l2(mode.V);
}

UnstableModeKP eigenprofile(const DispersionPoint& p, const Grid1D& g) {
    if (std::abs(C_plus(p.mu, p.lambda)) > 1e-10)
        throw DomainError("eigenprofile: point does not satisfy C_+(mu) = 0");
    // V(x) = g''(x/2); right tail decays at rate (2-mu)/2 so the image sum
    // needs enough terms for the box in use.
    const int images = std::max(3, static_cast<int>(std::ceil(40.0 / ((2.0 - p.mu) * g.X))));
    Profile1D V = sample_periodized(
        g, [&](double x) { return cplx(g_mu_branch_zz(0.5 * x, p.mu)); }, images, p.k);
    fix_phase_and_norm(V);
    UnstableModeKP mode{p, std::move(V), p.sigma, 0.0};
    mode.residual = eigen_residual_kp(mode);
    return mode;
}

UnstableModeKP refine_eigenmode(const UnstableModeKP& seed) {
    const Grid1D& g = seed.V.grid;
    const std::size_t n = g.Nx;
    const double j = static_cast<double>(seed.point.k) / seed.point.L;
    const Eigen::MatrixXd A = assemble_Aj_dense(g, j);

    // eigenvalue of A_j is -sigma; shift-invert around the branch value
    Eigen::VectorXd v(n);
    for (std::size_t i = 0; i < n; ++i) v(i) = seed.V.values[i].real();
    v.normalize();
    double sigma = seed.point.sigma;
    for (int it = 0; it < 3; ++it) {
        Eigen::MatrixXd M = A + sigma * Eigen::MatrixXd::Identity(n, n);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
        Eigen::VectorXd y = lu.solve(v);
        const double ny = y.norm();
        if (!(ny > 0.0) || !std::isfinite(ny)) break;
        v = y / ny;
        sigma = -v.dot(A * v); // Rayleigh update, v normalized
    }
    UnstableModeKP out = seed;
    for (std::size_t i = 0; i < n; ++i) out.V.values[i] = cplx(v(i), 0.0);
    fix_phase_and_norm(out.V);
    out.sigma_discrete = sigma;
    out.residual = eigen_residual_kp(out);
    return out;
}

UnstableModeKP most_unstable(double L, const Grid1D& g) {
    return refine_eigenmode(eigenprofile(most_unstable_point(L), g));
}

Field apply_A(const Field& f) {
    const Grid2D& g = f.grid;
    SpectralField F = transform_forward(f);
    // precondition: zero x-mean on transverse modes
    double scale = 0.0;
    for (const cplx& c : F.coeff) scale = std::max(scale, std::abs(c));
    for (std::size_t j = 0; j < g.Ny; ++j)
        if (g.ymode(j) != 0 && scale > 0.0 && std::abs(F.coeff[j]) > kZeroModeTol * scale)
            throw ZeroModeViolation("apply_A: x-mean on mode m=" + std::to_string(g.ymode(j)));

    // diagonal part: -u_x + u_xxx - dx^{-1} dyy
    SpectralField D = F;
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const double xi = g.xi(i);
        const bool nyq = (g.xmode(i) == -static_cast<long>(g.Nx) / 2);
        for (std::size_t j = 0; j < g.Ny; ++j) {
            const double ky = g.eta_y(j);
            cplx s(0.0);
            if (!nyq && g.xmode(i) != 0)
                s = cplx(0.0, -xi) + cplx(0.0, -xi * xi * xi) + ky * ky / cplx(0.0, xi);
            else if (!nyq)
                s = cplx(0.0); // xi = 0: derivative terms vanish; mean rows carry no dx^{-1}
            D.coeff[i * g.Ny + j] = F.coeff[i * g.Ny + j] * s;
        }
    }
    Field out = transform_inverse(D);

    // + (Q u)_x
    Field Q = soliton_field(g, SolitonSpec(Family::Kdv, 1.0));
    Field Qu(g, f.kind);
    for (std::size_t i = 0; i < Qu.values.size(); ++i) Qu.values[i] = Q.values[i] * f.values[i];
    return add(out, d_dx(Qu, 1));
}

Profile1D apply_Aj(const Profile1D& v, double j) {
    const Grid1D& g = v.grid;
    std::vector<cplx> c = fft::forward_1d(v.values);
    double scale = 0.0;
    for (const cplx& x : c) scale = std::max(scale, std::abs(x));
    if (j != 0.0 && scale > 0.0 && std::abs(c[0]) > kZeroModeTol * scale)
        throw ZeroModeViolation("apply_Aj: x-mean with j != 0");

    std::vector<cplx> d(g.Nx);
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const double xi = g.xi(i);
        const bool nyq = (g.mode(i) == -static_cast<long>(g.Nx) / 2);
        cplx s(0.0);
        if (!nyq && g.mode(i) != 0)
            s = cplx(0.0, -xi) + cplx(0.0, -xi * xi * xi) + j * j / cplx(0.0, xi);
        d[i] = c[i] * s;
    }
    Profile1D out(g, v.mode, fft::inverse_1d(d));

    Profile1D q = q_profile(g);
    Profile1D qv(g, v.mode);
    for (std::size_t i = 0; i < g.Nx; ++i) qv.values[i] = q.values[i] * v.values[i];
    return add(out, deriv(qv, 1));
}

Eigen::MatrixXd assemble_Aj_dense(const Grid1D& g, double j) {
    const std::size_t n = g.Nx;
    Eigen::MatrixXd D1 = symbol_matrix(g, dx_symbols(g, 1));
    Eigen::MatrixXd D3 = symbol_matrix(g, dx_symbols(g, 3));
    Eigen::MatrixXd Dinv = symbol_matrix(g, antideriv_symbols(g));
    Profile1D q = q_profile(g);
    Eigen::VectorXd Qd(n);
    for (std::size_t i = 0; i < n; ++i) Qd(i) = q.values[i].real();
    return -D1 + D1 * Qd.asDiagonal().toDenseMatrix() + D3 + j * j * Dinv;
}

Eigen::MatrixXd assemble_scriptL_dense(const Grid1D& g) {
    const std::size_t n = g.Nx;
    Eigen::MatrixXd D2 = symbol_matrix(g, dx_symbols(g, 2));
    Profile1D q = q_profile(g);
    Eigen::MatrixXd M = -D2;
    for (std::size_t i = 0; i < n; ++i) M(i, i) += 1.0 - q.values[i].real();
    return M;
}

Profile1D apply_scriptL(const Profile1D& w) {
    Profile1D out = deriv(w, 2);
    Profile1D q = q_profile(w.grid);
    for (std::size_t i = 0; i < w.values.size(); ++i)
        out.values[i] = -out.values[i] - q.values[i].real() * w.values[i] + w.values[i];
    return out;
}

std::vector<double> scriptL_discrete_eigenvalues(const Grid1D& g, double below) {
    linalg::SymEigen eig = linalg::sym_eigen(assemble_scriptL_dense(g));
    std::vector<double> out;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        if (eig.values(i) < below) out.push_back(eig.values(i));
    return out;
}

double conservation_identity_residual(const Profile1D& w, const Profile1D& H, double j,
                                      double gamma0) {
    Profile1D Lw = apply_scriptL(w);
    Profile1D winv = antideriv(w);
    Profile1D Hx = deriv(H, 1);
    const double lhs =
        gamma0 * (inner(w, Lw).real() + j * j * std::pow(norm_l2(winv), 2));
    const double rhs = (inner(Hx, Lw) + j * j * inner(H, winv)).real();
    const double scale = std::abs(lhs) + std::abs(rhs) + 1e-300;
    return std::abs(lhs - rhs) / scale;
}

ResolventSolution resolvent_solve(double j, double gamma0, double tau, const Profile1D& H) {
    const Grid1D& g = H.grid;
    const std::size_t n = g.Nx;
    Eigen::MatrixXd A = assemble_Aj_dense(g, j);
    Eigen::MatrixXcd M = A.cast<cplx>();
    for (std::size_t i = 0; i < n; ++i) M(i, i) += cplx(gamma0, tau);

    Profile1D Hx = deriv(H, 1);
    Eigen::VectorXcd rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs(i) = Hx.values[i];
    Eigen::VectorXcd x = linalg::solve(M, rhs);

    ResolventSolution out;
    out.w = Profile1D(g, H.mode);
    for (std::size_t i = 0; i < n; ++i) out.w.values[i] = x(i);
    out.identity_residual = conservation_identity_residual(out.w, H, j, gamma0);
    out.ratio_s0 = norm_l2(out.w) / std::max(norm_hs_line(H, 1), 1e-300);
    out.ratio_s1 = norm_hs_line(out.w, 1) / std::max(norm_hs_line(H, 2), 1e-300);
    return out;
}

} // namespace tilab
