#pragma once

#include <functional>

#include "tilab/field.hpp"
#include "tilab/ops.hpp"

namespace tilab {

enum class Family { Kdv, Nls };

// A member of one of the two solitary-wave families:
//   kdv:  c Q(sqrt(c)(x - a)),        Q(x) = 3 sech^2(x/2)
//   nls:  lam Q(lam (x - a)) e^{i gamma},  Q(x) = sqrt(2) / cosh(x)
struct SolitonSpec {
    Family family = Family::Kdv;
    double scale = 1.0;  // speed c (kdv) or amplitude lam (nls), > 0
    double center = 0.0; // a
    double phase = 0.0;  // gamma, nls only

    SolitonSpec() = default;
    SolitonSpec(Family fam, double sc, double a = 0.0, double gamma = 0.0)
        : family(fam), scale(sc), center(a), phase(gamma) {
        if (!(scale > 0.0)) throw DomainError("SolitonSpec: scale must be positive");
    }
};

double kdv_Q(double x);
double nls_Q(double x);

// Evaluate the family member at a point on the line (no periodization).
cplx soliton_value(const SolitonSpec& spec, double x);

// Sum of periodic images sum_n f(x + 2 X n), |n| <= images. Decaying
// line profiles must be wrapped this way before spectral work; plain
// truncation leaves a seam the derivatives amplify.
Profile1D sample_periodized(const Grid1D& g, const std::function<cplx(double)>& f,
                            int images = 3, long mode = 0);
Field sample_periodized_x(const Grid2D& g, const std::function<cplx(double)>& f,
                          FieldKind kind = FieldKind::Real, int images = 3);

// y-independent soliton field on the cylinder.
Field soliton_field(const Grid2D& g, const SolitonSpec& spec);
Profile1D soliton_profile(const Grid1D& g, const SolitonSpec& spec);

// Sup-norm of the stationary equation applied to the sampled profile:
//   kdv: -Q' + Q Q' + Q'''      (moving-frame KP-I / KdV)
//   nls: -Q'' + Q - Q^3
// Small only for actual members of the family.
double stationarity_residual(const SolitonSpec& spec, const Grid1D& g);

} // namespace tilab
