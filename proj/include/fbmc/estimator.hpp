#ifndef FBMC_ESTIMATOR_HPP
#define FBMC_ESTIMATOR_HPP

#include "fbmc/channel.hpp"
#include "fbmc/filterbank.hpp"
#include "fbmc/interference.hpp"
#include "fbmc/preamble.hpp"
#include "fbmc/types.hpp"

#include <string>
#include <vector>

namespace fbmc {

/// Per-subcarrier CFR estimate, N_rx x N_tx per subcarrier. Subcarriers
/// whose estimate is numerically degenerate (vanishing pseudo-pilot or
/// singular system) are flagged invalid and skipped by nmse().
struct CfrEstimate {
    int M = 0, n_rx = 1, n_tx = 1;
    std::vector<cplx> H;              // index (p*n_rx + j)*n_tx + i
    std::vector<unsigned char> valid; // per subcarrier
    std::string method;

    CfrEstimate() = default;
    CfrEstimate(int M_, int n_rx_, int n_tx_)
        : M(M_), n_rx(n_rx_), n_tx(n_tx_),
          H(size_t(M_) * n_rx_ * n_tx_, cplx(0.0, 0.0)),
          valid(size_t(M_), 1) {}

    cplx at(int p, int rx, int tx) const {
        return H[(size_t(p) * n_rx + rx) * n_tx + tx];
    }
    cplx& at(int p, int rx, int tx) {
        return H[(size_t(p) * n_rx + rx) * n_tx + tx];
    }
};

/// Pseudo-pilots c_p of a single-antenna IAM-style preamble at its pilot
/// instant, including the band-edge wrap corrections.
std::vector<cplx> siso_pseudo_pilots(const GeneratedPreamble& pre,
                                     const InterferenceTable& table);

/// SISO IAM: H_p = y_{p,q1} / c_p.
CfrEstimate iam_estimate(const AfbGrid& y, const GeneratedPreamble& pre,
                         const InterferenceTable& table);

/// SISO pairs-of-pilots: solves for the ZF coefficient
///   W_p = j (d_{p,0} y*_{p,1} - d_{p,1} y*_{p,0}) / Im(y*_{p,0} y_{p,1})
/// and returns H_p = 1 / W_p. Noise is neglected by construction.
CfrEstimate pop_estimate(const AfbGrid& y, const GeneratedPreamble& pre);

/// Interference-cancellation preambles: point division at the pilot
/// subcarriers (the pattern makes c_p = d_p) followed by circular linear
/// interpolation of the complex estimate over the skipped subcarriers.
CfrEstimate icm_estimate(const AfbGrid& y, const GeneratedPreamble& pre);

/// Pseudo-pilot matrices C_p for a replicated MIMO IAM preamble,
/// C_p(i, k) = pseudo-pilot of antenna i at pilot instant t_k. The
/// contributions from time offsets +-2 (nonnegligible between the
/// repetitions) are included exactly, so this is the correct, not the
/// idealized, matrix. Depends only on the preamble; compute once and
/// reuse across trials.
struct MimoPseudoPilots {
    int M = 0, n_tx = 0;
    std::vector<cplx> C; // index (p*n_tx + i)*n_tx + k

    cplx at(int p, int i, int k) const {
        return C[(size_t(p) * n_tx + i) * n_tx + k];
    }
};
MimoPseudoPilots mimo_pseudo_pilots(const GeneratedPreamble& pre,
                                    const InterferenceTable& table,
                                    const PrototypeFilter& f);

/// MIMO IAM: per subcarrier, [y_{p,t_1} ... y_{p,t_Nt}] = H_p C_p^T, solved
/// by right-multiplying with the inverse of the pseudo-pilot matrix.
CfrEstimate mimo_iam_estimate(const std::vector<AfbGrid>& y,
                              const GeneratedPreamble& pre,
                              const MimoPseudoPilots& pilots);

/// MIMO POP: [W^R W^I] = D_p Y_p^{-1} over 2 N_r symbols; the CFR is the
/// right inverse of W = W^R + j W^I. Requires N_r >= N_t.
CfrEstimate mimo_pop_estimate(const std::vector<AfbGrid>& y,
                              const GeneratedPreamble& pre);

/// Sparse pilots: least-squares recovery of all N_t N_r L_h impulse
/// response taps from the pilot-set equations y = C h + eta, then an
/// M-point CFR. With equipowered pilots and an orthogonal D the system
/// matrix C is scaled-unitary and the LS solution is MSE optimal.
CfrEstimate sparse_ls_estimate(const std::vector<AfbGrid>& y,
                               const PreambleSpec& spec,
                               const GeneratedPreamble& pre);

/// The system matrix C of the sparse design (rows: pilot-set equations
/// stacked per start position; columns: taps per antenna), without the
/// receive-antenna Kronecker factor (it is block diagonal in rx).
/// Size (N_t L_h) x (N_t L_h).
std::vector<cplx> sparse_system_matrix(const PreambleSpec& spec);

/// ||H - Hhat||_F^2 / ||H||_F^2 accumulated over valid subcarriers.
/// excluded (optional) receives the number of skipped subcarriers.
double nmse(const ChannelRealization& ch, const CfrEstimate& est,
            int* excluded = nullptr);

} // namespace fbmc

#endif
