#include "fbmc/cpofdm.hpp"

#include "fbmc/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace fbmc {

BasebandSignal ofdm_modulate(const std::vector<std::vector<cplx>>& symbols,
                             int M, int cp) {
    if (M <= 0 || cp < 0 || cp >= M)
        throw std::invalid_argument("ofdm_modulate: bad M or CP length");
    const int n_sym = static_cast<int>(symbols.size());
    BasebandSignal s;
    s.samples.assign(size_t(n_sym) * (M + cp), cplx(0.0, 0.0));
    Fft fft(M);
    std::vector<cplx> t(M);
    const double scale = 1.0 / std::sqrt(double(M));
    for (int k = 0; k < n_sym; ++k) {
        if (static_cast<int>(symbols[k].size()) != M)
            throw std::invalid_argument("ofdm_modulate: symbol size != M");
        fft.inverse(symbols[k].data(), t.data());
        cplx* out = s.samples.data() + size_t(k) * (M + cp);
        for (int l = 0; l < cp; ++l) out[l] = t[M - cp + l] * scale;
        for (int l = 0; l < M; ++l) out[cp + l] = t[l] * scale;
    }
    return s;
}

std::vector<std::vector<cplx>> ofdm_demodulate(const BasebandSignal& s, int M,
                                               int cp, int n_sym) {
    if (s.length() < n_sym * (M + cp))
        throw std::invalid_argument("ofdm_demodulate: signal too short");
    std::vector<std::vector<cplx>> out(n_sym, std::vector<cplx>(M));
    Fft fft(M);
    std::vector<cplx> t(M);
    const double scale = 1.0 / std::sqrt(double(M));
    for (int k = 0; k < n_sym; ++k) {
        const cplx* in = s.samples.data() + size_t(k) * (M + cp) + cp;
        fft.forward(in, t.data());
        for (int p = 0; p < M; ++p) out[k][p] = t[p] * scale;
    }
    return out;
}

CfrEstimate ofdm_ls_estimate(
    const std::vector<std::vector<std::vector<cplx>>>& rx_freq,
    const std::vector<cplx>& x, int n_tx) {
    const int nr = static_cast<int>(rx_freq.size());
    if (nr == 0) throw std::invalid_argument("ofdm_ls_estimate: no rx data");
    if (n_tx <= 0 || (n_tx & (n_tx - 1)) != 0)
        throw std::invalid_argument(
            "ofdm_ls_estimate: N_t must be a power of two");
    const int M = static_cast<int>(x.size());
    for (const auto& blocks : rx_freq) {
        if (static_cast<int>(blocks.size()) != n_tx)
            throw std::invalid_argument(
                "ofdm_ls_estimate: need N_t pilot symbols per rx");
        for (const auto& b : blocks)
            if (static_cast<int>(b.size()) != M)
                throw std::invalid_argument("ofdm_ls_estimate: block size");
    }
    // Hadamard signs: A(i,k) = (-1)^{popcount(i & k)}
    CfrEstimate est(M, nr, n_tx);
    est.method = "cp-ofdm";
    for (int p = 0; p < M; ++p) {
        if (std::abs(x[p]) < 1e-12) {
            est.valid[p] = 0;
            continue;
        }
        for (int j = 0; j < nr; ++j)
            for (int i = 0; i < n_tx; ++i) {
                cplx acc(0.0, 0.0);
                for (int k = 0; k < n_tx; ++k) {
                    const double a =
                        (__builtin_popcount(unsigned(i & k)) % 2 == 0) ? 1.0
                                                                       : -1.0;
                    acc += rx_freq[j][k][p] * a;
                }
                est.at(p, j, i) = acc / (double(n_tx) * x[p]);
            }
    }
    return est;
}

} // namespace fbmc
