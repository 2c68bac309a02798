#ifndef FBMC_CPOFDM_HPP
#define FBMC_CPOFDM_HPP

#include "fbmc/estimator.hpp"
#include "fbmc/filterbank.hpp"
#include "fbmc/types.hpp"

#include <vector>

namespace fbmc {

/// CP-OFDM modulator: unitary M-point IFFT per symbol plus a cyclic
/// prefix of cp samples. symbols[k] holds the M frequency-domain values
/// of OFDM symbol k.
BasebandSignal ofdm_modulate(const std::vector<std::vector<cplx>>& symbols,
                             int M, int cp);

/// Inverse of ofdm_modulate: drops each cyclic prefix and applies the
/// unitary FFT. The signal may be longer than n_sym*(M+cp) (channel tail).
std::vector<std::vector<cplx>> ofdm_demodulate(const BasebandSignal& s, int M,
                                               int cp, int n_sym);

/// LS channel estimation from N_t pilot OFDM symbols. Antenna i transmits
/// x_p * A(i,k) on subcarrier p in pilot symbol k, where A is the Hadamard
/// matrix of order N_t (A = [1] for SISO, giving H_p = y_p / x_p).
/// rx_freq[j][k][p] are the demodulated pilot symbols at receive antenna j.
CfrEstimate ofdm_ls_estimate(
    const std::vector<std::vector<std::vector<cplx>>>& rx_freq,
    const std::vector<cplx>& x, int n_tx);

} // namespace fbmc

#endif
