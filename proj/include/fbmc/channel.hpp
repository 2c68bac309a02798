#ifndef FBMC_CHANNEL_HPP
#define FBMC_CHANNEL_HPP

#include "fbmc/filterbank.hpp"
#include "fbmc/rng.hpp"
#include "fbmc/types.hpp"

#include <string>
#include <vector>

namespace fbmc {

/// Tapped-delay-line power profile. Delays are given in nanoseconds and
/// rounded to the nearest sample at sample_rate_hz; taps landing on the
/// same sample have their powers added. Linear tap powers are normalized
/// to unit total power.
struct PowerDelayProfile {
    std::string name;
    double sample_rate_hz = 10e6;
    std::vector<double> delays_ns;
    std::vector<double> powers_db;

    static PowerDelayProfile vehicular_a();
    static PowerDelayProfile vehicular_b();

    /// Parses a profile file: lines of key=value for name / sample_rate_hz
    /// plus one "delay_ns,power_db" pair per tap line. '#' comments and
    /// blank lines are skipped. Throws std::runtime_error on bad input.
    static PowerDelayProfile load(const std::string& path);

    /// Sample-spaced linear tap powers (unit total power). The vector
    /// length is the channel order bound L_h.
    std::vector<double> tap_powers() const;

    int tap_count() const { return static_cast<int>(tap_powers().size()); }
};

/// One block-fading draw of a frequency-selective MIMO channel.
struct ChannelRealization {
    int n_tx = 1, n_rx = 1;
    int L_h = 0; // number of sample-spaced taps
    int M = 0;   // CFR grid size
    std::vector<cplx> taps; // index (l*n_rx + j)*n_tx + i
    std::vector<cplx> cfr;  // index (p*n_rx + j)*n_tx + i

    cplx tap(int l, int rx, int tx) const {
        return taps[(size_t(l) * n_rx + rx) * n_tx + tx];
    }
    cplx& tap(int l, int rx, int tx) {
        return taps[(size_t(l) * n_rx + rx) * n_tx + tx];
    }
    /// Frequency response at subcarrier p: sum_l h_l e^{-j2pi p l / M}.
    cplx H(int p, int rx, int tx) const {
        return cfr[(size_t(p) * n_rx + rx) * n_tx + tx];
    }
};

/// Draws iid Rayleigh taps with the given power profile and applies the
/// Kronecker spatial model h_l = R_rx^{1/2} h_w(l) R_tx^{1/2}, where both
/// correlation matrices are exponential, R_{ab} = rho^{|a-b|}. rho = 0
/// gives spatially white taps. Also fills the M-point CFR.
ChannelRealization realize_channel(const PowerDelayProfile& pdp, int M,
                                   int n_tx, int n_rx, double rho_tx,
                                   double rho_rx, Rng& rng);

/// Convolves the per-antenna transmit signals with the channel and adds
/// circular complex AWGN of variance sigma2 per sample on each receive
/// antenna. Output length = input length + L_h - 1. All transmit signals
/// must have equal length, and tx.size() must equal channel.n_tx.
std::vector<BasebandSignal> apply_channel(
    const std::vector<BasebandSignal>& tx, const ChannelRealization& channel,
    double sigma2, Rng& noise_rng);

} // namespace fbmc

#endif
