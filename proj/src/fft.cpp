#include "tilab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace tilab {
namespace fft {
namespace {

using PlanKey = std::tuple<int, std::size_t, std::size_t, int>; // rank, n0, n1, sign

std::mutex g_plan_mutex;
std::map<PlanKey, fftw_plan>& plan_cache() {
    static std::map<PlanKey, fftw_plan> cache;
    return cache;
}

fftw_plan get_plan(int rank, std::size_t n0, std::size_t n1, int sign) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    const PlanKey key{rank, n0, n1, sign};
    auto it = plan_cache().find(key);
    if (it != plan_cache().end()) return it->second;

    // Dummy buffer just for planning; FFTW_UNALIGNED lets the plan run on
    // arbitrary caller storage afterwards.
    std::vector<cplx> dummy(rank == 1 ? n0 : n0 * n1);
    auto* p = reinterpret_cast<fftw_complex*>(dummy.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = rank == 1
                         ? fftw_plan_dft_1d(static_cast<int>(n0), p, p, sign, flags)
                         : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), p, p, sign, flags);
    plan_cache().emplace(key, plan);
    return plan;
}

void run(int rank, std::size_t n0, std::size_t n1, int sign, const cplx* in, cplx* out) {
    fftw_plan plan = get_plan(rank, n0, n1, sign);
    // fftw_execute_dft does not modify the input for out-of-place calls and
    // tolerates in == out for these plans.
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

} // namespace

void forward_1d(const cplx* in, cplx* out, std::size_t n) {
    run(1, n, 0, FFTW_FORWARD, in, out);
    const double s = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] *= s;
}

void inverse_1d(const cplx* in, cplx* out, std::size_t n) {
    run(1, n, 0, FFTW_BACKWARD, in, out);
}

void forward_2d(const cplx* in, cplx* out, std::size_t nx, std::size_t ny) {
    run(2, nx, ny, FFTW_FORWARD, in, out);
    const double s = 1.0 / static_cast<double>(nx * ny);
    for (std::size_t i = 0; i < nx * ny; ++i) out[i] *= s;
}

void inverse_2d(const cplx* in, cplx* out, std::size_t nx, std::size_t ny) {
    run(2, nx, ny, FFTW_BACKWARD, in, out);
}

} // namespace fft
} // namespace tilab
