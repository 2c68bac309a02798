#ifndef FBMC_FILTERBANK_HPP
#define FBMC_FILTERBANK_HPP

#include "fbmc/frame.hpp"
#include "fbmc/prototype.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

/// Baseband signal; symbol n starts at sample n*M/2 and a frame of N
/// symbols spans (N-1)*M/2 + L_g samples.
struct BasebandSignal {
    std::vector<cplx> samples;

    int length() const { return static_cast<int>(samples.size()); }
};

inline int frame_span(int M, int K, int N) { return (N - 1) * M / 2 + K * M; }

/// Complex M x N demodulated grid (analysis filter bank output).
struct AfbGrid {
    int M = 0, N = 0;
    std::vector<cplx> y; // index n*M + m

    AfbGrid() = default;
    AfbGrid(int M_, int N_) : M(M_), N(N_), y(size_t(M_) * N_) {}
    cplx at(int m, int n) const { return y[size_t(n) * M + m]; }
    cplx& at(int m, int n) { return y[size_t(n) * M + m]; }
};

/// Subcarrier function g_{m,n}(l) over samples [0, length). The index m is
/// used as given; atoms at m and m+M differ by a fixed phase factor.
std::vector<cplx> subcarrier_atom(const PrototypeFilter& f, int m, int n,
                                  int length);

/// Direct (reference) evaluation of the synthesis filter bank.
BasebandSignal synthesize_direct(const FrameGrid& frame,
                                 const PrototypeFilter& f);

/// IFFT-based fast path; matches synthesize_direct to 1e-10 per sample.
BasebandSignal synthesize(const FrameGrid& frame, const PrototypeFilter& f);

/// Direct (reference) evaluation of the analysis filter bank.
AfbGrid analyze_direct(const BasebandSignal& s, const PrototypeFilter& f,
                       int N);

/// FFT-based fast path.
AfbGrid analyze(const BasebandSignal& s, const PrototypeFilter& f, int N);

} // namespace fbmc

#endif
