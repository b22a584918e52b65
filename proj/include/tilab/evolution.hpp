#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tilab/field.hpp"
#include "tilab/ops.hpp"

namespace tilab {

enum class Equation { KpMoving, KpLab, Nls };
enum class Scheme { ExponentialRk4, StrangSplit };

// Sanity cap on the exact linear phase per step. The propagator is exact
// for any step, but a phase this large means the run is misconfigured.
inline constexpr double kLinearPhaseCap = 1e6;
// Imaginary-axis stability radius of the explicit RK4 tableau.
inline constexpr double kRk4ImagStability = 2.82;

struct IntegratorConfig {
    double dt = 0.01;
    Scheme scheme = Scheme::ExponentialRk4;
    double t_end = 10.0;
    bool dealias = true;
    std::size_t sample_stride = 10;
    bool store_fields = false;
    // NLS amplitude guard: abort if sup|u| exceeds this multiple of the
    // initial sup (large-data global existence is not known).
    double blowup_factor = 10.0;
};

struct TrajectorySample {
    double t = 0.0;
    double l2 = 0.0;
    double mass = 0.0;        // integral of u (kp) or of |u|^2 (nls)
    double hamiltonian = 0.0; // nls only
    double sup = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<Field> fields; // only if store_fields
    bool stopped_early = false;
    double t_final = 0.0;
    Field final_field;
};

// Time stepper on a fixed grid with precomputed propagator tables.
// KP-I (moving frame): u_t = u_x - u_xxx + dx^{-1} u_yy - u u_x, symbol
//   Lambda = i (xi + xi^3 + (m/L)^2 / xi), zero at xi = 0, with the
//   (xi=0, m!=0) lines pinned to zero every step.
// KP-I (lab frame): same without the xi transport term.
// NLS: i u_t + Lap u - u + |u|^2 u = 0; Strang splitting uses the exact
//   linear phase e^{-i(1 + |xi|^2 + m^2/L^2) dt} and the exact pointwise
//   rotation e^{i |u|^2 dt}.
class Stepper {
  public:
    Stepper(const Grid2D& grid, Equation eq, const IntegratorConfig& cfg);

    // One step on spectral coefficients (in place).
    void step(std::vector<cplx>& coeff) const;

    const Grid2D& grid() const { return grid_; }
    Equation equation() const { return eq_; }
    double dt() const { return cfg_.dt; }

  private:
    void step_etdrk4(std::vector<cplx>& coeff) const;
    void step_strang(std::vector<cplx>& coeff) const;
    void nonlinear(const std::vector<cplx>& coeff, std::vector<cplx>& out,
                   bool with_guard = false) const;
    void guard(const std::vector<cplx>& phys) const;

    Grid2D grid_;
    Equation eq_;
    IntegratorConfig cfg_;
    std::vector<cplx> E_, E2_, f1_, f2_, f3_, phi1h_; // ETDRK4 tables
    std::vector<cplx> lin_phase_;                     // Strang linear phase
    std::vector<char> da_mask_;
    double max_xi_da_ = 0.0;
    mutable double sup0_ = -1.0; // first-seen amplitude, blow-up reference
};

// Single steps with the spec-shaped signatures.
Field step_kp(const Field& u, double dt);
Field step_nls(const Field& u, double dt);

struct EvolveCallbacks {
    // Called on every sampled state; return true to stop the run.
    std::function<bool(double t, const Field& u)> on_sample;
};

Trajectory evolve(const Field& u0, Equation eq, const IntegratorConfig& cfg,
                  const EvolveCallbacks& callbacks = {});

// Conserved-quantity helpers.
double kp_mass(const Field& u);        // integral of u
double nls_mass(const Field& u);       // integral of |u|^2
double nls_hamiltonian(const Field& u); // integral of |grad u|^2 + |u|^2 - |u|^4/2

struct ScalingCheckReport {
    double lambda = 1.0;
    double mismatch = 0.0;      // relative L2 mismatch at matched times
    double period_factor = 0.0; // y-period ratio, lambda^{-2}
};
// Two-run check of the lab-frame symmetry u -> lam^2 u(lam^3 t, lam x, lam^2 y):
// the scaled data evolved on the scaled grid must match the scaled evolution.
ScalingCheckReport kp_scaling_symmetry_check(const Field& u0, double lambda_scale, double t_end,
                                             const IntegratorConfig& cfg);

} // namespace tilab
