#ifndef FBMC_HARNESS_HPP
#define FBMC_HARNESS_HPP

#include "fbmc/channel.hpp"
#include "fbmc/preamble.hpp"
#include "fbmc/prototype.hpp"
#include "fbmc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fbmc {

/// How transmit power is equalized across the compared methods.
///  - SfbOutput: each method's synthesized signal is scaled so its mean
///    output power over the preamble span is 1 (per transmit antenna, data
///    leakage included in expectation). Pseudo-pilot magnitudes then match
///    the analytic per-method values.
///  - SfbInput: the training grids are first scaled to a common grid
///    energy (M * amplitude^2 per antenna), then one factor shared by all
///    methods anchors the mean output power across methods to 1. Methods
///    with peaky preambles keep their power advantage/disadvantage at the
///    waveform level.
enum class PowerNorm { SfbOutput, SfbInput };

struct ExperimentConfig {
    std::vector<std::string> methods = {"iam-r", "iam-c", "e-iam-c",
                                        "cp-ofdm"};
    int M = 512;
    int K = 3;
    std::vector<double> snrs_db = {0, 5, 10, 15, 20, 25, 30, 35, 40};
    int trials = 100;
    std::uint64_t seed = 1;
    std::string profile = "veh-a"; // veh-a | veh-b | path to a profile file
    int n_tx = 1, n_rx = 1;
    double rho = 0.2; // spatial correlation coefficient (Kronecker model)
    int data_symbols = 10; // trailing random OQAM data symbols
    PowerNorm norm = PowerNorm::SfbOutput;
    bool parallel = true; // OpenMP over trials; false = serial reference
    double amplitude = 1.0;
    std::string mimo_base = "iam-c"; // replicated preamble for mimo-iam
    bool epsilon_negative = false;
    int sparse_L_h = 0; // 0: use the channel order from the profile
    std::vector<int> sparse_positions; // empty: evenly spread
};

/// Parses a key=value config file ('#' comments, blank lines ignored).
/// Unknown keys and malformed values raise std::runtime_error. List values
/// (methods, snr_db, sparse_positions) are comma separated.
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& line);

struct SweepPoint {
    std::string method;
    double snr_db = 0.0;
    double nmse_mean = 0.0;
    double nmse_stderr = 0.0;
    int trials = 0;
    long excluded = 0; // subcarriers skipped as degenerate, summed
};

struct SweepResult {
    std::vector<SweepPoint> points;
};

/// Monte Carlo NMSE sweep. Channel, noise and data streams are derived
/// per trial from the master seed, so every method and SNR point sees the
/// same channel/noise realizations ("paired" comparison) and results do
/// not depend on the number of threads.
SweepResult run_sweep(const ExperimentConfig& cfg);

struct PaprPoint {
    std::string method;
    double papr_db = 0.0;
    double peak_power = 0.0;
    double mean_power = 0.0;
};

/// Peak-to-average power ratio of each method's preamble waveform
/// (preamble only, no data).
std::vector<PaprPoint> papr_profile(const ExperimentConfig& cfg);

void write_sweep_csv(const SweepResult& result, const std::string& path);
void write_papr_csv(const std::vector<PaprPoint>& points,
                    const std::string& path);

const char* norm_name(PowerNorm n);

} // namespace fbmc

#endif
