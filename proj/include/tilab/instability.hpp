#pragma once

#include <optional>
#include <vector>

#include "tilab/evolution.hpp"
#include "tilab/field.hpp"
#include "tilab/fitting.hpp"
#include "tilab/grenier.hpp"

namespace tilab {

struct OrbitalResult {
    double distance = 0.0;
    double shift = 0.0; // optimal a
    double phase = 0.0; // optimal gamma (nls)
};

// inf_a |u - Q(. - a)|_{L2}; shift found by spectral cross-correlation plus
// Newton refinement of the correlation peak (sub-grid).
OrbitalResult orbital_distance_kp(const Field& u);
// inf_{a,gamma} |u - e^{i gamma} Q(. - a)|_{L2}; gamma eliminated in closed
// form, distance^2 = |u|^2 + |Q|^2 - 2 max_a |<u, Q(. - a)>|.
OrbitalResult orbital_distance_nls(const Field& u);

struct ExperimentSpec {
    Equation equation = Equation::KpMoving;
    double L = 4.0;
    double delta = 1e-4;
    int M = 0;                  // expansion order when tracking the remainder
    double eta_threshold = 0.0; // <= 0 selects the default 0.05 |Q|_L2
    double t_max = 90.0;
    std::size_t Nx = 512;
    std::size_t Ny = 32;
    double X = 40.0;
    IntegratorConfig integrator{0.01, Scheme::ExponentialRk4, 0.0, true, 25, false, 10.0};
    bool track_remainder = false;
    double iterate_dt = 0.05;
};

struct EscapeReport {
    bool escaped = false;
    double T_measured = 0.0;
    double T_predicted = 0.0; // log(kappa/delta)/sigma0, filled by the sweep
    double sigma0 = 0.0;
    long k0 = 0;
    double c_s = 0.0; // L2 norm of the seed u0(t=0)
    double eta = 0.0;
    double delta = 0.0;
    std::vector<double> t;
    std::vector<double> distance;
    std::vector<double> pi_norm;          // |Pi u|_{L2}
    std::vector<double> remainder_t;      // u - Q - u_ap tracking (optional)
    std::vector<double> remainder_norm;
};

// Seed Q + delta u^0, evolve, measure the orbital distance, stop at eta.
EscapeReport run_experiment(const ExperimentSpec& spec);

struct ScalingFit {
    double slope = 0.0;     // d T / d ln(1/delta), compare to 1/sigma0
    double intercept = 0.0;
    double r2 = 0.0;
    double sigma0 = 0.0;
    double kappa = 0.0;     // calibrated on the largest delta
    std::vector<double> deltas;
    std::vector<double> T;
    std::vector<EscapeReport> reports;
};

// Run the delta-sweep (parallel across experiments), calibrate kappa once
// on the largest delta and fit T against ln(1/delta).
ScalingFit scaling_fit(const ExperimentSpec& spec_template, const std::vector<double>& deltas);

// Worker-pool size: TILAB_WORKERS if set, else hardware concurrency.
unsigned worker_count();

} // namespace tilab
