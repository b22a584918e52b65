#include "tilab/nls_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "tilab/linalg.hpp"
#include "tilab/solitons.hpp"

namespace tilab {

namespace {

Eigen::MatrixXd symbol_matrix_1d(const Grid1D& g, const std::vector<cplx>& symbol) {
    const std::size_t n = g.Nx;
    std::vector<cplx> col = fft::inverse_1d(symbol);
    Eigen::MatrixXd M(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) M(a, b) = col[(a + n - b) % n].real() / static_cast<double>(n);
    return M;
}

Eigen::MatrixXd second_derivative_matrix(const Grid1D& g) {
    std::vector<cplx> s(g.Nx);
    for (std::size_t i = 0; i < g.Nx; ++i) s[i] = -g.xi(i) * g.xi(i);
    return symbol_matrix_1d(g, s);
}

Eigen::MatrixXd schroedinger_matrix(const Grid1D& g, double potential_factor) {
    Eigen::MatrixXd M = -second_derivative_matrix(g);
    Profile1D q = nls_Q_profile(g);
    for (std::size_t i = 0; i < g.Nx; ++i) {
        const double q2 = std::norm(q.values[i]);
        M(i, i) += 1.0 - potential_factor * q2;
    }
    return M;
}

Eigen::MatrixXd block_matrix(double eps, const Grid1D& g) {
    const Eigen::Index n = static_cast<Eigen::Index>(g.Nx);
    Eigen::MatrixXd Lm = assemble_Lminus_dense(g);
    Eigen::MatrixXd Lp = assemble_Lplus_dense(g);
    const double e2 = eps * eps;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    B.topRightCorner(n, n) = Lm + e2 * Eigen::MatrixXd::Identity(n, n);
    B.bottomLeftCorner(n, n) = -(Lp + e2 * Eigen::MatrixXd::Identity(n, n));
    return B; // sigma V + C V = 0  <=>  B V = sigma V with B = -C
}

// Composite-Simpson quadrature on [0, cut] doubled until stable; good to
// ~1e-12 for these smooth even integrands.
double simpson_even(const std::function<double(double)>& f, double cut) {
    auto run = [&](std::size_t n) {
        const double h = cut / static_cast<double>(n);
        double s = f(0.0) + f(cut);
        for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(h * i);
        return s * h / 3.0;
    };
    double prev = run(128), curr = run(256);
    for (std::size_t n = 512; n <= 1u << 20; n *= 2) {
        prev = curr;
        curr = run(n);
        if (std::abs(curr - prev) < 1e-14 * std::max(1.0, std::abs(curr))) break;
    }
    return 2.0 * curr; // even integrand
}

} // namespace

Profile1D nls_Q_profile(const Grid1D& g) {
    return sample_periodized(g, [](double x) { return cplx(nls_Q(x)); });
}

Eigen::MatrixXd assemble_Lminus_dense(const Grid1D& g) { return schroedinger_matrix(g, 1.0); }
Eigen::MatrixXd assemble_Lplus_dense(const Grid1D& g) { return schroedinger_matrix(g, 3.0); }

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> assemble_Lpm(const Grid1D& g) {
    return {assemble_Lplus_dense(g), assemble_Lminus_dense(g)};
}

Profile1D apply_Lminus(const Profile1D& u) {
    Profile1D out = deriv(u, 2);
    Profile1D q = nls_Q_profile(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        out.values[i] = -out.values[i] + u.values[i] - std::norm(q.values[i]) * u.values[i];
    return out;
}

Profile1D apply_Lplus(const Profile1D& u) {
    Profile1D out = deriv(u, 2);
    Profile1D q = nls_Q_profile(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        out.values[i] = -out.values[i] + u.values[i] - 3.0 * std::norm(q.values[i]) * u.values[i];
    return out;
}

Eigen::VectorXcd block_eigenvalues(double eps, const Grid1D& g) {
    linalg::GenEigen eig = linalg::general_eigen(block_matrix(eps, g));
    return eig.values;
}

std::optional<UnstableModeNLS> transverse_eigen(double eps, const Grid1D& g) {
    linalg::GenEigen eig = linalg::general_eigen(block_matrix(eps, g));
    const Eigen::Index N = eig.values.size();

    // collect unstable eigenvalues, folding conjugate partners together
    std::vector<Eigen::Index> unstable;
    for (Eigen::Index i = 0; i < N; ++i) {
        const cplx s = eig.values(i);
        if (s.real() > kUnstableDetectTol && s.imag() >= 0.0) unstable.push_back(i);
    }
    if (unstable.empty()) return std::nullopt;
    // cluster: distinct eigenvalues must differ by more than a cluster tol
    std::sort(unstable.begin(), unstable.end(), [&](Eigen::Index a, Eigen::Index b) {
        return eig.values(a).real() > eig.values(b).real();
    });
    const double cluster_tol = 1e-6 * std::max(1.0, std::abs(eig.values(unstable[0])));
    for (std::size_t i = 1; i < unstable.size(); ++i)
        if (std::abs(eig.values(unstable[i]) - eig.values(unstable[0])) > cluster_tol)
            throw DegenerateSpectrum("transverse_eigen: several unstable eigenvalues at eps=" +
                                     std::to_string(eps));

    const Eigen::Index idx = unstable[0];
    UnstableModeNLS mode;
    mode.epsilon = eps;
    mode.sigma = eig.values(idx);
    if (std::abs(mode.sigma.imag()) < 1e-8 * std::max(1.0, std::abs(mode.sigma)))
        mode.sigma = cplx(mode.sigma.real(), 0.0);

    const Eigen::Index n = N / 2;
    Eigen::VectorXcd v = eig.vectors.col(idx);
    // deterministic phase: rotate the largest component to the positive real
    // axis, then normalize to unit line L2
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::polar(1.0, -std::arg(v(imax)));
    mode.V1 = Profile1D(g, 0);
    mode.V2 = Profile1D(g, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        mode.V1.values[i] = v(i);
        mode.V2.values[i] = v(n + i);
    }
    const double nrm = std::sqrt(std::pow(norm_l2(mode.V1), 2) + std::pow(norm_l2(mode.V2), 2));
    for (auto* p : {&mode.V1, &mode.V2})
        for (cplx& z : p->values) z /= nrm;
    // sign convention: the V2 component bifurcates from Q, keep it aligned
    Profile1D q = nls_Q_profile(g);
    const double align = inner(mode.V2, q).real();
    if (align < 0.0)
        for (auto* p : {&mode.V1, &mode.V2})
            for (cplx& z : p->values) z = -z;
    return mode;
}

std::optional<double> sigma_of_epsilon(double eps, const Grid1D& g) {
    auto m = transverse_eigen(eps, g);
    if (!m) return std::nullopt;
    return m->sigma.real();
}

double eigen_residual(const UnstableModeNLS& m) {
    const double e2 = m.epsilon * m.epsilon;
    // C V = (-(L- + e2) V2, (L+ + e2) V1)
    Profile1D r1 = apply_Lminus(m.V2);
    Profile1D r2 = apply_Lplus(m.V1);
    for (std::size_t i = 0; i < r1.values.size(); ++i) {
        r1.values[i] = -(r1.values[i] + e2 * m.V2.values[i]);
        r2.values[i] = r2.values[i] + e2 * m.V1.values[i];
    }
    double res = 0.0, cv = 0.0, v = 0.0;
    for (std::size_t i = 0; i < r1.values.size(); ++i) {
        res += std::norm(m.sigma * m.V1.values[i] + r1.values[i]);
        res += std::norm(m.sigma * m.V2.values[i] + r2.values[i]);
        cv += std::norm(r1.values[i]) + std::norm(r2.values[i]);
        v += std::norm(m.V1.values[i]) + std::norm(m.V2.values[i]);
    }
    return std::sqrt(res) / (std::sqrt(cv) + std::abs(m.sigma) * std::sqrt(v) + 1e-300);
}

double conservation_residual(const UnstableModeNLS& m) {
    const double e2 = m.epsilon * m.epsilon;
    Profile1D LpV1 = apply_Lplus(m.V1);
    Profile1D LmV2 = apply_Lminus(m.V2);
    const double q1 = inner(LpV1, m.V1).real();
    const double q2 = inner(LmV2, m.V2).real();
    const double v2 = std::pow(norm_l2(m.V1), 2) + std::pow(norm_l2(m.V2), 2);
    const double combo = m.sigma.real() * (q1 + q2 + e2 * v2);
    const double scale =
        std::abs(m.sigma.real()) * (std::abs(q1) + std::abs(q2) + e2 * v2) + 1e-300;
    return std::abs(combo) / scale;
}

BifurcationReport bifurcation_check(const Grid1D& g) {
    BifurcationReport rep;
    // theta from quadrature of the closed-form profile
    const double cut = 60.0;
    const double q2 = simpson_even([](double x) { double v = nls_Q(x); return v * v; }, cut);
    const double qp2 = simpson_even(
        [](double x) {
            const double t = std::tanh(x);
            const double v = nls_Q(x) * t; // |Q'| = Q |tanh|
            return v * v;
        },
        cut);
    rep.theta = std::sqrt(qp2 / q2);

    rep.eps_used = {0.01, 0.02, 0.04};
    for (double eps : rep.eps_used) {
        auto m = transverse_eigen(eps, g);
        if (!m) throw NoUnstableMode("bifurcation_check: no unstable mode at eps=" +
                                     std::to_string(eps));
        rep.sigma_unstable.push_back(m->sigma.real());

        // the imaginary pair bifurcating from (Q',0): smallest positive
        // imaginary part on the axis, away from the continuum at ~i
        Eigen::VectorXcd evs = block_eigenvalues(eps, g);
        double best = 0.9;
        for (Eigen::Index i = 0; i < evs.size(); ++i) {
            const cplx s = evs(i);
            if (std::abs(s.real()) < 1e-6 && s.imag() > 1e-4 && s.imag() < best) best = s.imag();
        }
        rep.sigma_stable_imag.push_back(best);
    }
    auto richardson = [](const std::vector<double>& s) {
        const double t1 = 2.0 * s[0] - s[1];
        const double t2 = 2.0 * s[1] - s[2];
        return (4.0 * t1 - t2) / 3.0;
    };
    std::vector<double> su, ss;
    for (std::size_t i = 0; i < 3; ++i) {
        su.push_back(rep.sigma_unstable[i] / rep.eps_used[i]);
        ss.push_back(rep.sigma_stable_imag[i] / rep.eps_used[i]);
    }
    rep.omega1_unstable = richardson(su);
    rep.omega1_stable_imag = richardson(ss);
    return rep;
}

namespace {
// the cutoff is reused by every experiment in a sweep; cache per grid
std::mutex g_cutoff_mutex;
std::map<std::tuple<std::size_t, double, double>, double> g_cutoff_cache;
} // namespace

double measure_epsilon_cutoff(const Grid1D& g, double tol) {
    const std::tuple<std::size_t, double, double> key{g.Nx, g.X, tol};
    {
        std::lock_guard<std::mutex> lock(g_cutoff_mutex);
        auto it = g_cutoff_cache.find(key);
        if (it != g_cutoff_cache.end()) return it->second;
    }
    double lo = 1.0, hi = 2.0;
    if (!sigma_of_epsilon(lo, g))
        throw NoUnstableMode("measure_epsilon_cutoff: expected instability at eps=1");
    while (sigma_of_epsilon(hi, g)) {
        lo = hi;
        hi *= 1.5;
        if (hi > 16.0) throw DegenerateSpectrum("measure_epsilon_cutoff: no upper bracket");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (sigma_of_epsilon(mid, g))
            lo = mid;
        else
            hi = mid;
    }
    const double cutoff = 0.5 * (lo + hi);
    std::lock_guard<std::mutex> lock(g_cutoff_mutex);
    g_cutoff_cache.emplace(key, cutoff);
    return cutoff;
}

double measure_L0(const Grid1D& g, double tol) { return 1.0 / measure_epsilon_cutoff(g, tol); }

UnstableModeNLS most_unstable_nls(double L, const Grid1D& g) {
    if (!(L > 0.0)) throw DomainError("most_unstable_nls: L must be positive");
    const double cutoff = measure_epsilon_cutoff(g);
    std::optional<UnstableModeNLS> best;
    for (long k = 1; static_cast<double>(k) / L <= cutoff + 0.5; ++k) {
        auto m = transverse_eigen(static_cast<double>(k) / L, g);
        if (!m) {
            if (static_cast<double>(k) / L > cutoff) break;
            continue;
        }
        m->k = k;
        m->L = L;
        if (!best || m->sigma.real() > best->sigma.real()) best = m;
    }
    if (!best) throw NoUnstableMode("most_unstable_nls: no unstable mode for L=" + std::to_string(L));
    return *best;
}

} // namespace tilab
