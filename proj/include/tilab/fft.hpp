#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tilab {

using cplx = std::complex<double>;

// Thin wrapper over FFTW complex-to-complex transforms.
//
// Conventions:
//   forward:  c_n = (1/N) sum_p u_p e^{-i 2 pi n p / N}   (Fourier-series coefficients)
//   inverse:  u_p = sum_n c_n e^{+i 2 pi n p / N}
// so inverse(forward(u)) == u to roundoff and Parseval reads
//   sum |u_p|^2 * dx dy = |box| * sum |c_n|^2.
//
// Plans are cached per size with FFTW_ESTIMATE | FFTW_UNALIGNED: estimate
// planning keeps plan choice (and therefore output bytes) reproducible
// run to run. Plan creation is serialized internally; execution is
// thread-safe on distinct buffers.
namespace fft {

// in and out may alias. Length n.
void forward_1d(const cplx* in, cplx* out, std::size_t n);
void inverse_1d(const cplx* in, cplx* out, std::size_t n);

// Row-major nx-by-ny arrays, sample index [ix*ny + iy].
void forward_2d(const cplx* in, cplx* out, std::size_t nx, std::size_t ny);
void inverse_2d(const cplx* in, cplx* out, std::size_t nx, std::size_t ny);

inline std::vector<cplx> forward_1d(const std::vector<cplx>& u) {
    std::vector<cplx> c(u.size());
    forward_1d(u.data(), c.data(), u.size());
    return c;
}
inline std::vector<cplx> inverse_1d(const std::vector<cplx>& c) {
    std::vector<cplx> u(c.size());
    inverse_1d(c.data(), u.data(), c.size());
    return u;
}

} // namespace fft
} // namespace tilab
