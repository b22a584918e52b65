#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "tilab/field.hpp"
#include "tilab/ops.hpp"

namespace tilab {

// Transverse eigenmode of the linearized cubic NLS: sigma V + C(eps) V = 0
// with C(eps) = [[0, -(L^- + eps^2)], [L^+ + eps^2, 0]], eps = k/L, acting
// on the real pair V = (V1, V2) = (Re, Im) of the complex profile.
struct UnstableModeNLS {
    double epsilon = 0.0;
    cplx sigma;
    Profile1D V1; // real part profile
    Profile1D V2; // imag part profile
    long k = 0;
    double L = 0.0;
};

// L^- u = -u_xx + u - Q^2 u,  L^+ u = -u_xx + u - 3 Q^2 u, Q = sqrt(2) sech x.
Eigen::MatrixXd assemble_Lminus_dense(const Grid1D& g);
Eigen::MatrixXd assemble_Lplus_dense(const Grid1D& g);
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> assemble_Lpm(const Grid1D& g);

Profile1D apply_Lminus(const Profile1D& u);
Profile1D apply_Lplus(const Profile1D& u);
Profile1D nls_Q_profile(const Grid1D& g);

// Spectrum of the 2Nx-by-2Nx block matrix at a given eps (all eigenvalues;
// they come in quadruples {s, -s, conj s, -conj s}).
Eigen::VectorXcd block_eigenvalues(double eps, const Grid1D& g);

// Detection threshold separating a true unstable eigenvalue from the
// roundoff-positive real parts of the discretized continuum.
inline constexpr double kUnstableDetectTol = 1e-6;

// The unique unstable eigenmode at eps, if any. DegenerateSpectrum if the
// discrete solve produces more than one (beyond conjugation).
std::optional<UnstableModeNLS> transverse_eigen(double eps, const Grid1D& g);
std::optional<double> sigma_of_epsilon(double eps, const Grid1D& g);

// Backward-error style residual |sigma V + C V| / (|C V| + |sigma||V|).
double eigen_residual(const UnstableModeNLS& m);
// Normalized residual of Re sigma ((L+ V1,V1) + (L- V2,V2) + eps^2 |V|^2) = 0.
double conservation_residual(const UnstableModeNLS& m);

struct BifurcationReport {
    double theta = 0.0;              // |Q'| / |Q| from quadrature
    double omega1_unstable = 0.0;    // fitted slope of the real unstable branch
    double omega1_stable_imag = 0.0; // fitted slope of the imaginary pair
    std::vector<double> eps_used;
    std::vector<double> sigma_unstable;
    std::vector<double> sigma_stable_imag;
};
// Small-eps fit of the eigenvalue branches bifurcating from zero, using
// eps in {0.01, 0.02, 0.04} and Richardson extrapolation.
BifurcationReport bifurcation_check(const Grid1D& g);

// Largest eps with an unstable mode, found by bisection to the given
// tolerance (the artifact measures this rather than assuming a value).
double measure_epsilon_cutoff(const Grid1D& g, double tol = 1e-3);
// Smallest period parameter with an unstable k=1 mode: 1/eps_cutoff.
double measure_L0(const Grid1D& g, double tol = 1e-3);

// Scan integer k >= 1 up to the measured cutoff; max Re sigma wins,
// smallest k on ties. NoUnstableMode if the scan finds nothing.
UnstableModeNLS most_unstable_nls(double L, const Grid1D& g);

} // namespace tilab
