#include "fbmc/filterbank.hpp"
#include "fbmc/prototype.hpp"
#include "fbmc/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

// Compares the FFT-based filter bank against the direct-evaluation
// reference: wall time per frame and the maximum per-sample deviation.
// Usage: bench_filterbank [M] [K] [symbols] [repeats]

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch())
        .count();
}

} // namespace

int main(int argc, char** argv) {
    const int M = argc > 1 ? std::atoi(argv[1]) : 512;
    const int K = argc > 2 ? std::atoi(argv[2]) : 3;
    const int N = argc > 3 ? std::atoi(argv[3]) : 16;
    const int repeats = argc > 4 ? std::atoi(argv[4]) : 5;

    const fbmc::PrototypeFilter f = fbmc::design_prototype(M, K);
    fbmc::Rng rng(12345);
    fbmc::FrameGrid frame(M, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m)
            frame.set(m, n, rng.bpsk() * 0.7071067811865475244, false,
                      fbmc::CellRole::Data);

    // correctness first
    const fbmc::BasebandSignal fast = fbmc::synthesize(frame, f);
    const fbmc::BasebandSignal ref = fbmc::synthesize_direct(frame, f);
    double max_err_sfb = 0.0;
    for (int l = 0; l < fast.length(); ++l)
        max_err_sfb = std::max(max_err_sfb,
                               std::abs(fast.samples[l] - ref.samples[l]));
    const fbmc::AfbGrid ya = fbmc::analyze(fast, f, N);
    const fbmc::AfbGrid yd = fbmc::analyze_direct(fast, f, N);
    double max_err_afb = 0.0;
    for (size_t i = 0; i < ya.y.size(); ++i)
        max_err_afb = std::max(max_err_afb, std::abs(ya.y[i] - yd.y[i]));

    double t_fast_sfb = 1e300, t_ref_sfb = 1e300;
    double t_fast_afb = 1e300, t_ref_afb = 1e300;
    for (int r = 0; r < repeats; ++r) {
        double t0 = now_seconds();
        const fbmc::BasebandSignal a = fbmc::synthesize(frame, f);
        t_fast_sfb = std::min(t_fast_sfb, now_seconds() - t0);
        t0 = now_seconds();
        const fbmc::BasebandSignal b = fbmc::synthesize_direct(frame, f);
        t_ref_sfb = std::min(t_ref_sfb, now_seconds() - t0);
        t0 = now_seconds();
        const fbmc::AfbGrid c = fbmc::analyze(a, f, N);
        t_fast_afb = std::min(t_fast_afb, now_seconds() - t0);
        t0 = now_seconds();
        const fbmc::AfbGrid d = fbmc::analyze_direct(b, f, N);
        t_ref_afb = std::min(t_ref_afb, now_seconds() - t0);
    }

    std::printf("M=%d K=%d symbols=%d repeats=%d\n", M, K, N, repeats);
    std::printf("synthesis: fast %.6f s, direct %.6f s, speedup %.1fx, "
                "max |diff| %.3e\n",
                t_fast_sfb, t_ref_sfb, t_ref_sfb / t_fast_sfb, max_err_sfb);
    std::printf("analysis:  fast %.6f s, direct %.6f s, speedup %.1fx, "
                "max |diff| %.3e\n",
                t_fast_afb, t_ref_afb, t_ref_afb / t_fast_afb, max_err_afb);
    return (max_err_sfb < 1e-8 && max_err_afb < 1e-8) ? 0 : 1;
}
