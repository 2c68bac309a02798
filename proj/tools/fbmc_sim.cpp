#include "fbmc/estimator.hpp"
#include "fbmc/harness.hpp"
#include "fbmc/interference.hpp"
#include "fbmc/preamble.hpp"
#include "fbmc/prototype.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

using nlohmann::json;

json config_to_json(const fbmc::ExperimentConfig& cfg) {
    json j;
    j["methods"] = cfg.methods;
    j["m"] = cfg.M;
    j["k"] = cfg.K;
    j["snr_db"] = cfg.snrs_db;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["profile"] = cfg.profile;
    j["n_tx"] = cfg.n_tx;
    j["n_rx"] = cfg.n_rx;
    j["rho"] = cfg.rho;
    j["data_symbols"] = cfg.data_symbols;
    j["normalization"] = fbmc::norm_name(cfg.norm);
    j["parallel"] = cfg.parallel;
    j["amplitude"] = cfg.amplitude;
    j["mimo_base"] = cfg.mimo_base;
    j["epsilon_negative"] = cfg.epsilon_negative;
    j["sparse_l_h"] = cfg.sparse_L_h;
    j["sparse_positions"] = cfg.sparse_positions;
    return j;
}

fbmc::ExperimentConfig load_config(const std::string& config_path,
                                   const std::vector<std::string>& overrides) {
    fbmc::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = fbmc::parse_config_file(config_path);
    for (const std::string& kv : overrides) fbmc::apply_config_line(cfg, kv);
    return cfg;
}

void write_manifest(const std::string& path, const fbmc::ExperimentConfig& cfg,
                    const std::string& command,
                    const std::vector<std::string>& outputs) {
    json j;
    j["tool"] = "fbmc_sim";
    j["command"] = command;
    j["config"] = config_to_json(cfg);
    j["outputs"] = outputs;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

int cmd_weights(int M, int K, bool as_json) {
    const fbmc::PrototypeFilter f = fbmc::design_prototype(M, K);
    const fbmc::InterferenceTable t = fbmc::closed_form_weights(f);
    if (as_json) {
        json j;
        j["m"] = M;
        j["k"] = K;
        j["beta"] = t.beta;
        j["gamma"] = t.gamma;
        j["delta"] = t.delta;
        j["epsilon"] = t.epsilon;
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("beta=%.10f\ngamma=%.10f\ndelta=%.10f\nepsilon=%.10f\n",
                    t.beta, t.gamma, t.delta, t.epsilon);
    }
    return kExitOk;
}

int cmd_preamble(const std::string& family, int M, int n_tx, int n_rx,
                 double amplitude, std::uint64_t seed, bool eps_neg,
                 const std::string& mimo_base, int L_h) {
    fbmc::PreambleSpec spec;
    spec.family = fbmc::family_from_name(family);
    spec.M = M;
    spec.n_tx = n_tx;
    spec.n_rx = n_rx;
    spec.amplitude = amplitude;
    spec.seed = seed;
    spec.epsilon_negative = eps_neg;
    spec.mimo_base = fbmc::family_from_name(mimo_base);
    if (spec.family == fbmc::PreambleFamily::MIMO_SPARSE) {
        spec.L_h = L_h;
        const int N = L_h > 0 ? M / L_h : 0;
        for (int i = 0; i < n_tx; ++i)
            spec.start_positions.push_back(N > 0 ? i * (N / n_tx) : 0);
    }
    const fbmc::GeneratedPreamble pre = fbmc::generate(spec);
    for (size_t i = 0; i < pre.grids.size(); ++i) {
        std::printf("# antenna %zu (%d symbols, pilot instants:", i,
                    pre.symbols);
        for (int q : pre.pilot_times) std::printf(" %d", q);
        std::printf(")\n");
        const fbmc::FrameGrid& g = pre.grids[i];
        for (int m = 0; m < g.subcarriers(); ++m) {
            for (int n = 0; n < g.symbols(); ++n) {
                const fbmc::cplx a = g.amplitude(m, n);
                std::printf("%s%g%+gi", n ? "," : "", a.real(), a.imag());
            }
            std::printf("\n");
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM/OQAM preamble-based channel estimation simulator"};
    app.require_subcommand(1);

    // weights
    auto* weights = app.add_subcommand(
        "weights", "Print the prototype filter's interference weights");
    int w_m = 512, w_k = 3;
    bool w_json = false;
    weights->add_option("-m,--subcarriers", w_m, "Number of subcarriers");
    weights->add_option("-k,--overlap", w_k, "Overlap factor (3 or 4)");
    weights->add_flag("--json", w_json, "JSON output");

    // preamble
    auto* preamble =
        app.add_subcommand("preamble", "Dump a training preamble grid");
    std::string p_family = "iam-c", p_base = "iam-c";
    int p_m = 8, p_ntx = 1, p_nrx = 1, p_lh = 0;
    double p_amp = 1.0;
    std::uint64_t p_seed = 0;
    bool p_epsneg = false;
    preamble->add_option("-f,--family", p_family, "Preamble family");
    preamble->add_option("-m,--subcarriers", p_m, "Number of subcarriers");
    preamble->add_option("--n-tx", p_ntx, "Transmit antennas");
    preamble->add_option("--n-rx", p_nrx, "Receive antennas");
    preamble->add_option("--amplitude", p_amp, "Pilot amplitude");
    preamble->add_option("--seed", p_seed, "Seed for randomized families");
    preamble->add_flag("--epsilon-negative", p_epsneg,
                       "Extended variant for epsilon < 0");
    preamble->add_option("--mimo-base", p_base, "Base family for mimo-iam");
    preamble->add_option("--l-h", p_lh, "Channel order (mimo-sparse)");

    // simulate
    auto* simulate =
        app.add_subcommand("simulate", "Run a Monte Carlo NMSE sweep");
    std::string s_config, s_output = "sweep.csv", s_manifest;
    std::vector<std::string> s_set;
    simulate->add_option("-c,--config", s_config, "key=value config file");
    simulate->add_option("-o,--output", s_output, "Output CSV path");
    simulate->add_option("--manifest", s_manifest, "Write a JSON manifest");
    simulate->add_option("--set", s_set, "Override config entries (key=value)");

    // papr
    auto* papr = app.add_subcommand(
        "papr", "Peak-to-average power ratio of the preamble waveforms");
    std::string pr_config, pr_output = "papr.csv";
    std::vector<std::string> pr_set;
    papr->add_option("-c,--config", pr_config, "key=value config file");
    papr->add_option("-o,--output", pr_output, "Output CSV path");
    papr->add_option("--set", pr_set, "Override config entries (key=value)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (weights->parsed()) return cmd_weights(w_m, w_k, w_json);
        if (preamble->parsed())
            return cmd_preamble(p_family, p_m, p_ntx, p_nrx, p_amp, p_seed,
                                p_epsneg, p_base, p_lh);
        if (simulate->parsed()) {
            fbmc::ExperimentConfig cfg;
            try {
                cfg = load_config(s_config, s_set);
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return kExitConfig;
            }
            const fbmc::SweepResult result = fbmc::run_sweep(cfg);
            fbmc::write_sweep_csv(result, s_output);
            if (!s_manifest.empty())
                write_manifest(s_manifest, cfg, "simulate", {s_output});
            return kExitOk;
        }
        if (papr->parsed()) {
            fbmc::ExperimentConfig cfg;
            try {
                cfg = load_config(pr_config, pr_set);
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return kExitConfig;
            }
            fbmc::write_papr_csv(fbmc::papr_profile(cfg), pr_output);
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
