#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "tilab/field.hpp"
#include "tilab/ops.hpp"

namespace tilab {

// Threshold period parameter: transverse instability of the KdV soliton
// under the (moving frame) KP-I flow exists iff L exceeds this.
inline constexpr double kKpThresholdL = 2.3094010767585030580365951220078; // 4/sqrt(3)

// One solution of the dispersion system on the instability branch
//   2 sigma = mu (mu - 1)(2 - mu),   k = (sqrt(3) L / 4) mu (2 - mu),
//   eta = mu (2 - mu),               lambda = 2 sigma,
// with mu in (1, 2) and k a positive integer.
struct DispersionPoint {
    double mu = 0.0;
    double lambda = 0.0; // = 2 sigma
    double sigma = 0.0;
    double eta = 0.0;
    long k = 0;
    double L = 0.0;
};

// Transverse eigenmode e^{sigma t} e^{i k y / L} V(x) of the linearized
// operator. V has unit line L2 norm and V(0) > 0. sigma_discrete and
// residual describe the profile as an eigenvector of the grid operator;
// for the raw closed-form profile sigma_discrete equals the branch value
// and residual holds the measured defect.
struct UnstableModeKP {
    DispersionPoint point;
    Profile1D V;
    double sigma_discrete = 0.0;
    double residual = 0.0;
};

// ---- dispersion algebra (closed forms) ----
double sigma_of_mu(double mu);               // DomainError outside [1, 2]
double k_of_mu(double mu, double L);         // real-valued branch value
double mu_of_k(long k, double L);            // NoSuchMode off the branch
DispersionPoint dispersion_point(long k, double L);
double mu_of_max_sigma();                    // 1 + 1/sqrt(3)

// All integer transverse modes with a positive growth rate; empty below
// threshold. Sorted by k.
std::vector<DispersionPoint> admissible_modes(double L);
// Max-sigma entry, smallest k on ties. NoUnstableMode if none.
DispersionPoint most_unstable_point(double L);

// ---- quartic characteristic polynomial P(r) = r^4 - 4 r^2 + 4 lambda r + 3 eta^2 ----
double quartic_P(double r, double lambda, double eta);
// Roots via companion-matrix eigensolve plus a Newton polish, sorted by
// increasing real part.
std::array<cplx, 4> quartic_roots(double lambda, double eta);

// C_+(mu) = mu^3 + 2 mu + lambda - 3 mu^2; vanishing at a quartic root of
// positive real part selects the bounded eigenmode solution.
double C_plus(double mu, double lambda);

struct AlgebraReport {
    double P_residual = 0.0;            // |P(mu)|
    double Cplus_residual = 0.0;        // |C_+(mu)|
    double lambda_identity = 0.0;       // |lambda + mu(mu-1)(mu-2)|
    double eta_identity = 0.0;          // |eta^2 - mu^2 (mu-2)^2|
    double growth_identity = 0.0;       // |2 sigma - mu(mu-1)(2-mu)|
    double mode_identity = 0.0;         // |k - (sqrt(3) L/4) mu(2-mu)|
    double eta_k_link = 0.0;            // |3 eta^2 - 16 k^2 / L^2|
    double max() const;
};
AlgebraReport verify_algebraic_system(const DispersionPoint& p);

// ---- eigenmode profile ----
// g_mu(z) = e^{mu z}(mu^3 + 2 mu + lambda - 3 mu^2 tanh z); on the branch
// (C_+ = 0) this collapses to 3 mu^2 e^{mu z}(1 - tanh z).
double g_mu(double z, double mu, double lambda);
double g_mu_branch(double z, double mu);
// Closed-form second derivative of the branch g.
double g_mu_branch_zz(double z, double mu);

// Build V(x) = g''(x/2) on the grid (periodized images, unit L2, V(0)>0).
// DomainError if the point does not satisfy C_+ = 0.
UnstableModeKP eigenprofile(const DispersionPoint& p, const Grid1D& g);

// Polish a mode to the eigenpair of the discrete operator by shift-invert
// iteration on the dense A_j; removes the O(e^{-(2-mu)X}) box-truncation
// defect of the sampled closed form.
UnstableModeKP refine_eigenmode(const UnstableModeKP& seed);

// Most unstable mode with the grid-exact profile (closed form + polish).
UnstableModeKP most_unstable(double L, const Grid1D& g);
// Measured eigen-residual |sigma V + A_j V| (line L2) of a mode.
double eigen_residual_kp(const UnstableModeKP& mode);

// ---- linearized operators ----
// A u = -u_x + (Q u)_x + u_xxx - dx^{-1} dyy u on the cylinder.
Field apply_A(const Field& f);
// A_j v = -v_x + (Q v)_x + v_xxx + j^2 dx^{-1} v on the line, j = k/L real.
Profile1D apply_Aj(const Profile1D& v, double j);

// Dense Nx-by-Nx matrices on the x-grid (spectral differentiation).
Eigen::MatrixXd assemble_Aj_dense(const Grid1D& g, double j);
// Script-L w = -w_xx - Q w + w (self-adjoint; kernel spanned by Q_x).
Eigen::MatrixXd assemble_scriptL_dense(const Grid1D& g);
Profile1D apply_scriptL(const Profile1D& w);

// Discrete eigenvalues of script-L below the continuum threshold 1,
// ascending. At X >= 30 these approach {-5/4, 0, 3/4}.
std::vector<double> scriptL_discrete_eigenvalues(const Grid1D& g, double below = 0.999);

// ---- resolvent diagnostics ----
struct ResolventSolution {
    Profile1D w;
    double identity_residual = 0.0; // normalized conservation-law residual
    double ratio_s0 = 0.0;          // |w|_0 / |H|_1
    double ratio_s1 = 0.0;          // |w|_1 / |H|_2
};
// Solves (gamma0 + i tau) w + A_j w = H_x by a dense solve on the spectral
// grid and evaluates the conservation identity
//   gamma0 ((w, Lw) + j^2 |dx^{-1} w|^2) = Re((H_x, Lw) + j^2 (H, dx^{-1} w)).
ResolventSolution resolvent_solve(double j, double gamma0, double tau, const Profile1D& H);
double conservation_identity_residual(const Profile1D& w, const Profile1D& H, double j,
                                      double gamma0);

} // namespace tilab
