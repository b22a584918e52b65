#pragma once

#include <map>
#include <vector>

#include "tilab/evolution.hpp"
#include "tilab/field.hpp"

namespace tilab {

// Physical-space x-profiles keyed by the transverse integer m (the
// e^{i m y / L} factor is implicit).
using ModeProfiles = std::map<long, std::vector<cplx>>;

// One order of the iterative construction: u^k lives on transverse modes
// |m| <= (k+1) k0 and vanishes at t = 0 for k >= 1.
struct Iterate {
    int order = 0;
    std::vector<long> modes; // sorted support
    // series[m][time_index] = physical x-profile
    std::map<long, std::vector<std::vector<cplx>>> series;

    bool has_mode(long m) const { return series.count(m) != 0; }
    const std::vector<cplx>& at(long m, std::size_t ti) const { return series.at(m)[ti]; }
};

// The family {u^0, ..., u^M} with amplitude delta; the approximate
// solution of the perturbation equation is
//   u_ap(t) = delta (u^0 + sum_{k=1..M} delta^k u^k).
struct GrenierExpansion {
    Equation equation = Equation::KpMoving;
    double L = 0.0;
    long k0 = 0;
    double sigma0 = 0.0;
    int M = 0;
    double delta = 0.0;
    Grid1D grid;
    double dt = 0.0;
    std::vector<double> times;
    std::vector<Iterate> iterates;

    std::size_t time_index(double t) const;
    // Keep every stride-th node (plus the final one) to shed memory once
    // the build is done.
    void thin(std::size_t stride);
};

// k = 0 seed: the most unstable eigenmode pair, occupying modes +-k0.
Iterate seed_mode(Equation eq, double L, const Grid1D& g, const std::vector<double>& times,
                  long* k0_out = nullptr, double* sigma0_out = nullptr);

// Build all orders 0..M. Per-mode forced linear solves with the same
// exponential integrator family as the evolution module; forcing products
// are dealiased; iterates vanish at t = 0.
GrenierExpansion build_expansion(Equation eq, double L, int M, double delta, const Grid1D& g,
                                 double t_end, double dt);

// Norms of one iterate at a time node: sup over modes of the line L2 norm
// (the V_K norm flavor) and the full cylinder L2.
double iterate_norm_sup(const Iterate& it, std::size_t ti, const Grid1D& g);
double iterate_norm_l2(const Iterate& it, std::size_t ti, const Grid1D& g, double L);

// u_ap as per-mode profiles / as a field on a matching 2-D grid.
ModeProfiles approx_modes(const GrenierExpansion& ex, std::size_t ti, double delta_override = -1.0);
Field assemble(const GrenierExpansion& ex, std::size_t ti, const Grid2D& g2,
               double delta_override = -1.0);

// Residual F = (dt + A) u_ap + u_ap u_ap_x (KP) or the NLS analogue, with
// the time derivative taken from each iterate's own forced equation, not
// from finite differences.
ModeProfiles residual_modes(const GrenierExpansion& ex, std::size_t ti,
                            double delta_override = -1.0);
double residual_l2(const GrenierExpansion& ex, std::size_t ti, double delta_override = -1.0);
Field residual_F(const GrenierExpansion& ex, std::size_t ti, const Grid2D& g2,
                 double delta_override = -1.0);

// L2 norm over the cylinder of a per-mode profile set.
double modes_l2(const ModeProfiles& mp, const Grid1D& g, double L);

} // namespace tilab
