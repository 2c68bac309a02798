#include "fbmc/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace fbmc {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(int n) : n_(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf_in_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(cplx) * n));
    buf_out_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(cplx) * n));
    plan_fwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_in_),
                                 reinterpret_cast<fftw_complex*>(buf_out_),
                                 FFTW_FORWARD, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_in_),
                                 reinterpret_cast<fftw_complex*>(buf_out_),
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(buf_in_);
    fftw_free(buf_out_);
}

void Fft::forward(const cplx* in, cplx* out) {
    std::memcpy(buf_in_, in, sizeof(cplx) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out, buf_out_, sizeof(cplx) * n_);
}

void Fft::inverse(const cplx* in, cplx* out) {
    std::memcpy(buf_in_, in, sizeof(cplx) * n_);
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    std::memcpy(out, buf_out_, sizeof(cplx) * n_);
}

} // namespace fbmc
