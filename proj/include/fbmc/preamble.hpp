#ifndef FBMC_PREAMBLE_HPP
#define FBMC_PREAMBLE_HPP

#include "fbmc/frame.hpp"
#include "fbmc/interference.hpp"
#include "fbmc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fbmc {

enum class PreambleFamily {
    POP,
    IAM_R,
    IAM_I,
    IAM_C,
    E_IAM_C,
    ICM_A,
    ICM_B,
    ICM_C,
    ICM_D,
    MIMO_IAM,
    MIMO_SPARSE,
    MIMO_POP,
};

const char* family_name(PreambleFamily family);
PreambleFamily family_from_name(const std::string& name);

struct PreambleSpec {
    PreambleFamily family = PreambleFamily::IAM_C;
    int M = 512;
    int n_tx = 1;
    int n_rx = 1;            // MIMO_POP preamble length is 2*n_rx symbols
    double amplitude = 1.0;  // pilot amplitude d
    std::uint64_t seed = 0;  // IAM-I triplets, ICM_C data, MIMO_POP pilots
    bool epsilon_negative = false; // selects the E-IAM-C variant

    // MIMO_IAM: which SISO IAM preamble is replicated across antennas.
    PreambleFamily mimo_base = PreambleFamily::IAM_C;

    // MIMO_SPARSE: channel-length budget, per-antenna starting positions
    // p_i in {0..M/L_h-1}, and the N_t x N_t pilot matrix D (row-major;
    // must have orthogonal columns of equal norm). Empty D selects the
    // Hadamard default.
    int L_h = 0;
    std::vector<int> start_positions;
    std::vector<double> D;
};

struct GeneratedPreamble {
    std::vector<FrameGrid> grids; // one per transmit antenna
    std::vector<int> pilot_times; // AFB symbol instants used for estimation
    int symbols = 0;              // preamble duration in OQAM symbols
};

/// Builds the training grids for the given family. Throws
/// std::invalid_argument on infeasible parameters (odd M, N_t not a power
/// of two for MIMO_IAM, sparse feasibility violations, ...).
GeneratedPreamble generate(const PreambleSpec& spec);

/// Analytic per-subcarrier pseudo-pilot magnitude |c_p| for the IAM
/// families (interior-subcarrier formulas; the two band-edge subcarriers
/// physically deviate because the neighborhood wraps). Throws for
/// non-IAM families.
std::vector<double> predicted_magnitudes(const PreambleSpec& spec,
                                         const InterferenceTable& table);

} // namespace fbmc

#endif
