#include "doctest.h"

#include "fbmc/cpofdm.hpp"
#include "fbmc/rng.hpp"

#include <cmath>

using namespace fbmc;

TEST_CASE("OFDM modulate/demodulate round trip") {
    const int M = 32, cp = 5, n_sym = 3;
    Rng rng(2);
    std::vector<std::vector<cplx>> symbols(n_sym, std::vector<cplx>(M));
    for (auto& s : symbols)
        for (cplx& v : s) v = rng.qpsk();
    const BasebandSignal s = ofdm_modulate(symbols, M, cp);
    CHECK(s.length() == n_sym * (M + cp));
    const auto back = ofdm_demodulate(s, M, cp, n_sym);
    for (int k = 0; k < n_sym; ++k)
        for (int p = 0; p < M; ++p)
            CHECK(std::abs(back[k][p] - symbols[k][p]) < 1e-12);
    CHECK_THROWS_AS(ofdm_modulate(symbols, M, M), std::invalid_argument);
    CHECK_THROWS_AS(ofdm_demodulate(s, M, cp, n_sym + 1),
                    std::invalid_argument);
}

TEST_CASE("CP absorbs the channel exactly: noiseless LS is exact") {
    const int M = 32;
    PowerDelayProfile pdp;
    pdp.delays_ns = {0.0, 100.0, 300.0};
    pdp.powers_db = {0.0, -2.0, -6.0};
    pdp.sample_rate_hz = 1e7;
    Rng rng(6);
    for (int nt : {1, 2}) {
        const int nr = nt;
        const ChannelRealization ch =
            realize_channel(pdp, M, nt, nr, 0.3, 0.3, rng);
        const int cp = ch.L_h - 1;
        std::vector<cplx> x(M);
        for (int p = 0; p < M; ++p) x[p] = (p % 2 == 0) ? 1.0 : -1.0;
        std::vector<BasebandSignal> tx;
        for (int i = 0; i < nt; ++i) {
            std::vector<std::vector<cplx>> symbols;
            for (int k = 0; k < nt; ++k) {
                std::vector<cplx> s(M);
                const double a =
                    (__builtin_popcount(unsigned(i & k)) % 2 == 0) ? 1.0 : -1.0;
                for (int p = 0; p < M; ++p) s[p] = a * x[p];
                symbols.push_back(std::move(s));
            }
            tx.push_back(ofdm_modulate(symbols, M, cp));
        }
        Rng noise(1);
        const std::vector<BasebandSignal> rx =
            apply_channel(tx, ch, 0.0, noise);
        std::vector<std::vector<std::vector<cplx>>> rx_freq;
        for (int j = 0; j < nr; ++j)
            rx_freq.push_back(ofdm_demodulate(rx[j], M, cp, nt));
        const CfrEstimate est = ofdm_ls_estimate(rx_freq, x, nt);
        for (int p = 0; p < M; ++p)
            for (int j = 0; j < nr; ++j)
                for (int i = 0; i < nt; ++i)
                    CHECK(std::abs(est.at(p, j, i) - ch.H(p, j, i)) < 1e-10);
    }
}
