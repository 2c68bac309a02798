#ifndef FBMC_FFT_HPP
#define FBMC_FFT_HPP

#include "fbmc/types.hpp"

namespace fbmc {

/// Complex 1-D FFT pair of fixed size (unnormalized, FFTW sign convention:
/// forward = e^{-j2*pi*kn/N}). Plan creation is serialized internally;
/// each instance must be used by a single thread at a time.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }
    void forward(const cplx* in, cplx* out);
    void inverse(const cplx* in, cplx* out);

private:
    int n_;
    void* plan_fwd_;
    void* plan_inv_;
    cplx* buf_in_;
    cplx* buf_out_;
};

} // namespace fbmc

#endif
