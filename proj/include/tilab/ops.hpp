#pragma once

#include "tilab/field.hpp"

namespace tilab {

// Tolerance on the relative x-mean of nonzero transverse modes; data above
// it is outside the discrete anti-derivative space.
inline constexpr double kZeroModeTol = 1e-10;

// ---- transforms ----
SpectralField transform_forward(const Field& f);
Field transform_inverse(const SpectralField& F);

// ---- spectral calculus on the cylinder ----
// order in {1, 2, 3}; exact on band-limited input.
Field d_dx(const Field& f, int order = 1);
Field d_dy(const Field& f, int order = 1);
Field laplacian(const Field& f);

// Anti-derivative in x via spectral division by (i xi). The xi = 0
// coefficient of every transverse mode is dropped, so the result has zero
// x-mean mode by mode. Throws ZeroModeViolation if a nonzero transverse
// mode carries x-mean above kZeroModeTol (relative).
Field antideriv_x(const Field& f);

// The projection Pi on nonzero transverse modes: removes the y-mean
// pointwise in x. Idempotent and orthogonal.
Field project_nonzero_y(const Field& f);

struct Norms {
    double l2 = 0.0;
    double hs = 0.0;
    double z2 = 0.0;
};
// L2 and H^s norms over the box; Z2 uses the weight 1 + xi^2 + (m/(L xi))^2
// and therefore inherits the zero-mode precondition.
Norms norms(const Field& f, int s = 1);

double norm_l2(const Field& f);
double norm_l2(const SpectralField& F);
cplx inner(const Field& f, const Field& g); // integral of f * conj(g) over the box

// 2/3-rule dealiasing: zeroes the top third of modes in each direction
// (Nyquist lines included).
SpectralField dealias(const SpectralField& F);

// Pointwise product followed by the 2/3 truncation; the workhorse behind
// quadratic nonlinearities.
Field dealiased_product(const Field& f, const Field& g);

// ---- assorted helpers ----
Field add(const Field& f, const Field& g);
Field sub(const Field& f, const Field& g);
Field scale(const Field& f, cplx a);
double max_abs(const Field& f);
// Largest relative x-mean magnitude over transverse modes m != 0.
double nonzero_mode_xmean(const Field& f);
// Drops x-means on m != 0 rows (the evolution-time counterpart of the
// ZeroModeViolation error on user data).
SpectralField clean_zero_modes(const SpectralField& F);
double max_imag(const Field& f);

// ---- the same calculus on single-mode x-line profiles ----
std::vector<cplx> fft_profile(const Profile1D& p);
Profile1D deriv(const Profile1D& p, int order = 1);
Profile1D antideriv(const Profile1D& p); // zero-mean enforced as above (mode != 0)
Profile1D dealias(const Profile1D& p);
Profile1D dealiased_product(const Profile1D& a, const Profile1D& b, long mode_out);
double norm_l2(const Profile1D& p);
cplx inner(const Profile1D& a, const Profile1D& b);
// |f|_s^2 = sum_{m=0..s} |d^m f|_{L2}^2, the line Sobolev norm used by the
// per-mode estimates.
double norm_hs_line(const Profile1D& p, int s);

Profile1D add(const Profile1D& a, const Profile1D& b);
Profile1D scale(const Profile1D& a, cplx s);

} // namespace tilab
