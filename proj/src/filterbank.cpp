#include "fbmc/filterbank.hpp"

#include "fbmc/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace fbmc {

std::vector<cplx> subcarrier_atom(const PrototypeFilter& f, int m, int n,
                                  int length) {
    const int M = f.M;
    const int L = f.length();
    const int start = n * M / 2;
    if (start < 0 || start + L > length)
        throw std::invalid_argument("subcarrier_atom: atom does not fit");
    std::vector<cplx> a(length, cplx(0.0, 0.0));
    const double center = (L - 1) / 2.0;
    const cplx phi = std::polar(1.0, FrameGrid::phase(m, n));
    for (int l = 0; l < L; ++l) {
        const int gl = start + l;
        const double theta = 2.0 * kPi / M * m * (gl - center);
        a[gl] = f.g[l] * std::polar(1.0, theta) * phi;
    }
    return a;
}

BasebandSignal synthesize_direct(const FrameGrid& frame,
                                 const PrototypeFilter& f) {
    const int M = f.M;
    if (frame.subcarriers() != M)
        throw std::invalid_argument("synthesize: frame width != filter M");
    const int N = frame.symbols();
    const int L = f.length();
    const int len = (N - 1) * M / 2 + L;
    BasebandSignal s;
    s.samples.assign(len, cplx(0.0, 0.0));
    const double center = (L - 1) / 2.0;
    for (int n = 0; n < N; ++n) {
        const int start = n * M / 2;
        for (int m = 0; m < M; ++m) {
            const cplx a = frame.amplitude(m, n);
            if (a == cplx(0.0, 0.0)) continue;
            const cplx c = a * std::polar(1.0, FrameGrid::phase(m, n));
            for (int l = 0; l < L; ++l) {
                const double theta = 2.0 * kPi / M * m * (start + l - center);
                s.samples[start + l] += c * f.g[l] * std::polar(1.0, theta);
            }
        }
    }
    return s;
}

BasebandSignal synthesize(const FrameGrid& frame, const PrototypeFilter& f) {
    const int M = f.M;
    if (frame.subcarriers() != M)
        throw std::invalid_argument("synthesize: frame width != filter M");
    const int N = frame.symbols();
    const int L = f.length();
    const int len = (N - 1) * M / 2 + L;
    BasebandSignal s;
    s.samples.assign(len, cplx(0.0, 0.0));
    Fft fft(M);
    std::vector<cplx> coeff(M), tone(M);
    const double center = (L - 1) / 2.0;
    for (int n = 0; n < N; ++n) {
        bool any = false;
        for (int m = 0; m < M; ++m) {
            cplx a = frame.amplitude(m, n);
            if (a != cplx(0.0, 0.0)) any = true;
            // fold the modulation's fixed offset -2*pi*m*center/M into the bin
            coeff[m] = a * std::polar(1.0, FrameGrid::phase(m, n) -
                                               2.0 * kPi / M * m * center);
        }
        if (!any) continue;
        fft.inverse(coeff.data(), tone.data()); // tone[k] = sum_m coeff_m e^{+j2pi km/M}
        const int start = n * M / 2;
        for (int l = 0; l < L; ++l)
            s.samples[start + l] += f.g[l] * tone[(start + l) % M];
    }
    return s;
}

AfbGrid analyze_direct(const BasebandSignal& s, const PrototypeFilter& f,
                       int N) {
    const int M = f.M;
    const int L = f.length();
    if (s.length() < (N - 1) * M / 2 + L)
        throw std::invalid_argument("analyze: signal too short for N symbols");
    AfbGrid out(M, N);
    const double center = (L - 1) / 2.0;
    for (int q = 0; q < N; ++q) {
        const int start = q * M / 2;
        for (int p = 0; p < M; ++p) {
            cplx acc(0.0, 0.0);
            for (int l = 0; l < L; ++l) {
                const double theta = 2.0 * kPi / M * p * (start + l - center);
                acc += s.samples[start + l] * f.g[l] *
                       std::polar(1.0, -theta);
            }
            out.at(p, q) = acc * std::polar(1.0, -FrameGrid::phase(p, q));
        }
    }
    return out;
}

AfbGrid analyze(const BasebandSignal& s, const PrototypeFilter& f, int N) {
    const int M = f.M;
    const int L = f.length();
    if (s.length() < (N - 1) * M / 2 + L)
        throw std::invalid_argument("analyze: signal too short for N symbols");
    AfbGrid out(M, N);
    Fft fft(M);
    std::vector<cplx> folded(M), spec(M);
    const double center = (L - 1) / 2.0;
    for (int q = 0; q < N; ++q) {
        const int start = q * M / 2;
        std::fill(folded.begin(), folded.end(), cplx(0.0, 0.0));
        for (int l = 0; l < L; ++l)
            folded[(start + l) % M] += s.samples[start + l] * f.g[l];
        fft.forward(folded.data(), spec.data()); // sum_k u_k e^{-j2pi pk/M}
        for (int p = 0; p < M; ++p)
            out.at(p, q) = spec[p] *
                           std::polar(1.0, 2.0 * kPi / M * p * center -
                                               FrameGrid::phase(p, q));
    }
    return out;
}

} // namespace fbmc
