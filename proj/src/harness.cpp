#include "fbmc/harness.hpp"

#include "fbmc/cpofdm.hpp"
#include "fbmc/estimator.hpp"
#include "fbmc/filterbank.hpp"
#include "fbmc/interference.hpp"
#include "fbmc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fbmc {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

double hadamard_sign(int i, int k) {
    return (__builtin_popcount(unsigned(i & k)) % 2 == 0) ? 1.0 : -1.0;
}

struct MethodContext {
    std::string name;
    bool is_ofdm = false;
    PreambleFamily family = PreambleFamily::IAM_C;
    PreambleSpec spec;
    GeneratedPreamble pre; // grids already scaled by pilot_scale
    MimoPseudoPilots mimo_c;
    double pilot_scale = 1.0;
    double data_scale = 1.0;
    double pilot_power = 0.0; // mean preamble-span power, unscaled grids
    double data_power = 0.0;  // data leakage at unit data scale
};

PowerDelayProfile select_profile(const std::string& name) {
    if (name == "veh-a") return PowerDelayProfile::vehicular_a();
    if (name == "veh-b") return PowerDelayProfile::vehicular_b();
    return PowerDelayProfile::load(name);
}

/// Mean preamble-span output power split into the deterministic preamble
/// part (at the grid's current amplitudes) and the expected leakage of
/// unit-scale random data starting right after the preamble.
void span_power(const GeneratedPreamble& pre, const PrototypeFilter& f,
                int data_symbols, double* pilot_part, double* data_part) {
    const int M = f.M;
    const int span = frame_span(M, f.K, pre.symbols);
    const int nt = static_cast<int>(pre.grids.size());
    double pp = 0.0;
    for (const FrameGrid& g : pre.grids) {
        const BasebandSignal s = synthesize(g, f);
        for (int l = 0; l < span && l < s.length(); ++l)
            pp += std::norm(s.samples[l]);
    }
    *pilot_part = pp / (double(span) * nt);
    // E|data part|^2 = var_per_cell * M * sum_n g^2(l - n M/2); the cells
    // are iid with variance 1/2 at unit scale (+-1/sqrt(2) values)
    double dp = 0.0;
    const int L = f.length();
    for (int n = pre.symbols; n < pre.symbols + data_symbols; ++n) {
        const int start = n * M / 2;
        if (start >= span) break;
        for (int l = start; l < span && l - start < L; ++l)
            dp += f.g[l - start] * f.g[l - start];
    }
    *data_part = 0.5 * M * dp / double(span);
}

MethodContext make_context(const std::string& name,
                           const ExperimentConfig& cfg, int channel_order) {
    MethodContext ctx;
    ctx.name = name;
    if (name == "cp-ofdm") {
        ctx.is_ofdm = true;
        if ((cfg.n_tx & (cfg.n_tx - 1)) != 0)
            throw std::runtime_error("cp-ofdm: n_tx must be a power of two");
        return ctx;
    }
    ctx.family = family_from_name(name);
    PreambleSpec& spec = ctx.spec;
    spec.family = ctx.family;
    spec.M = cfg.M;
    spec.amplitude = cfg.amplitude;
    spec.seed = cfg.seed;
    spec.epsilon_negative = cfg.epsilon_negative;
    const bool mimo = ctx.family == PreambleFamily::MIMO_IAM ||
                      ctx.family == PreambleFamily::MIMO_SPARSE ||
                      ctx.family == PreambleFamily::MIMO_POP;
    if (!mimo && (cfg.n_tx != 1 || cfg.n_rx != 1))
        throw std::runtime_error("method '" + name +
                                 "' requires n_tx = n_rx = 1");
    if (mimo) {
        spec.n_tx = cfg.n_tx;
        spec.n_rx = cfg.n_rx;
    }
    if (ctx.family == PreambleFamily::MIMO_IAM)
        spec.mimo_base = family_from_name(cfg.mimo_base);
    if (ctx.family == PreambleFamily::MIMO_SPARSE) {
        spec.L_h = cfg.sparse_L_h > 0 ? cfg.sparse_L_h : channel_order;
        if (spec.L_h <= 0 || cfg.M % spec.L_h != 0)
            throw std::runtime_error(
                "mimo-sparse: M must be a multiple of the channel order; "
                "set sparse_l_h explicitly");
        spec.start_positions = cfg.sparse_positions;
        if (spec.start_positions.empty()) {
            const int N = cfg.M / spec.L_h;
            for (int i = 0; i < cfg.n_tx; ++i)
                spec.start_positions.push_back(i * (N / cfg.n_tx));
        }
    }
    ctx.pre = generate(spec);
    return ctx;
}

void finalize_scaling(std::vector<MethodContext>& ctxs,
                      const ExperimentConfig& cfg, const PrototypeFilter& f,
                      const InterferenceTable& table) {
    for (MethodContext& ctx : ctxs) {
        if (ctx.is_ofdm) continue;
        span_power(ctx.pre, f, cfg.data_symbols, &ctx.pilot_power,
                   &ctx.data_power);
    }
    if (cfg.norm == PowerNorm::SfbOutput) {
        for (MethodContext& ctx : ctxs) {
            if (ctx.is_ofdm) continue;
            const double s =
                1.0 / std::sqrt(ctx.pilot_power + ctx.data_power);
            ctx.pilot_scale = ctx.data_scale = s;
        }
    } else {
        // equalize grid energies, then anchor the cross-method mean
        // output power to 1 with one shared factor
        double mean_power = 0.0;
        int n_oqam = 0;
        for (MethodContext& ctx : ctxs) {
            if (ctx.is_ofdm) continue;
            double energy = 0.0;
            for (const FrameGrid& g : ctx.pre.grids) energy += g.energy();
            energy /= double(ctx.pre.grids.size());
            const double target = cfg.M * cfg.amplitude * cfg.amplitude;
            ctx.pilot_scale = std::sqrt(target / energy);
            mean_power += ctx.pilot_power * ctx.pilot_scale * ctx.pilot_scale +
                          ctx.data_power;
            ++n_oqam;
        }
        if (n_oqam > 0) {
            const double shared = 1.0 / std::sqrt(mean_power / n_oqam);
            for (MethodContext& ctx : ctxs) {
                if (ctx.is_ofdm) continue;
                ctx.pilot_scale *= shared;
                ctx.data_scale = shared;
            }
        }
    }
    for (MethodContext& ctx : ctxs) {
        if (ctx.is_ofdm) continue;
        for (FrameGrid& g : ctx.pre.grids) g.scale(ctx.pilot_scale);
        ctx.spec.amplitude *= ctx.pilot_scale;
        if (ctx.family == PreambleFamily::MIMO_IAM)
            ctx.mimo_c = mimo_pseudo_pilots(ctx.pre, table, f);
    }
}

void copy_preamble(FrameGrid& frame, const FrameGrid& pre) {
    for (int n = 0; n < pre.symbols(); ++n)
        for (int m = 0; m < pre.subcarriers(); ++m)
            if (pre.role(m, n) != CellRole::GuardNull)
                frame.set(m, n, pre.value(m, n), pre.quarter_phase(m, n),
                          pre.role(m, n));
}

double run_oqam_trial(const MethodContext& ctx, const ExperimentConfig& cfg,
                      const PrototypeFilter& f, const InterferenceTable& table,
                      const PowerDelayProfile& pdp, double sigma2, int trial,
                      int* excluded) {
    Rng data_rng(mix_seed(cfg.seed, std::uint64_t(trial) * 4 + 0));
    Rng chan_rng(mix_seed(cfg.seed, std::uint64_t(trial) * 4 + 1));
    Rng noise_rng(mix_seed(cfg.seed, std::uint64_t(trial) * 4 + 2));

    const int nt = static_cast<int>(ctx.pre.grids.size());
    const int nr = (ctx.family == PreambleFamily::MIMO_IAM ||
                    ctx.family == PreambleFamily::MIMO_SPARSE ||
                    ctx.family == PreambleFamily::MIMO_POP)
                       ? cfg.n_rx
                       : 1;
    const ChannelRealization ch =
        realize_channel(pdp, cfg.M, nt, nr, cfg.rho, cfg.rho, chan_rng);

    const int n_total = ctx.pre.symbols + cfg.data_symbols;
    std::vector<BasebandSignal> tx;
    tx.reserve(nt);
    for (int i = 0; i < nt; ++i) {
        FrameGrid frame(cfg.M, n_total);
        copy_preamble(frame, ctx.pre.grids[i]);
        for (int n = ctx.pre.symbols; n < n_total; ++n)
            for (int m = 0; m < cfg.M; ++m)
                frame.set(m, n, ctx.data_scale * kInvSqrt2 * data_rng.bpsk(),
                          false, CellRole::Data);
        tx.push_back(synthesize(frame, f));
    }
    const std::vector<BasebandSignal> rx =
        apply_channel(tx, ch, sigma2, noise_rng);
    std::vector<AfbGrid> y;
    y.reserve(nr);
    for (int j = 0; j < nr; ++j)
        y.push_back(analyze(rx[j], f, ctx.pre.symbols));

    CfrEstimate est;
    switch (ctx.family) {
    case PreambleFamily::POP:
        est = pop_estimate(y[0], ctx.pre);
        break;
    case PreambleFamily::IAM_R:
    case PreambleFamily::IAM_I:
    case PreambleFamily::IAM_C:
    case PreambleFamily::E_IAM_C:
        est = iam_estimate(y[0], ctx.pre, table);
        break;
    case PreambleFamily::ICM_A:
    case PreambleFamily::ICM_B:
    case PreambleFamily::ICM_C:
    case PreambleFamily::ICM_D:
        est = icm_estimate(y[0], ctx.pre);
        break;
    case PreambleFamily::MIMO_IAM:
        est = mimo_iam_estimate(y, ctx.pre, ctx.mimo_c);
        break;
    case PreambleFamily::MIMO_POP:
        est = mimo_pop_estimate(y, ctx.pre);
        break;
    case PreambleFamily::MIMO_SPARSE:
        est = sparse_ls_estimate(y, ctx.spec, ctx.pre);
        break;
    }
    return nmse(ch, est, excluded);
}

double run_ofdm_trial(const ExperimentConfig& cfg,
                      const PowerDelayProfile& pdp, double sigma2, int trial,
                      int* excluded) {
    Rng data_rng(mix_seed(cfg.seed, std::uint64_t(trial) * 4 + 0));
    Rng chan_rng(mix_seed(cfg.seed, std::uint64_t(trial) * 4 + 1));
    Rng noise_rng(mix_seed(cfg.seed, std::uint64_t(trial) * 4 + 2));

    const int nt = cfg.n_tx, nr = cfg.n_rx, M = cfg.M;
    const ChannelRealization ch =
        realize_channel(pdp, M, nt, nr, cfg.rho, cfg.rho, chan_rng);
    const int cp = ch.L_h - 1;
    if (cp >= M)
        throw std::runtime_error("cp-ofdm: channel order exceeds symbol size");

    std::vector<cplx> x(M);
    for (int p = 0; p < M; ++p) x[p] = (p % 2 == 0) ? 1.0 : -1.0;
    const int n_data = (cfg.data_symbols + 1) / 2;

    std::vector<BasebandSignal> tx;
    tx.reserve(nt);
    for (int i = 0; i < nt; ++i) {
        std::vector<std::vector<cplx>> symbols;
        for (int k = 0; k < nt; ++k) {
            std::vector<cplx> s(M);
            const double a = hadamard_sign(i, k);
            for (int p = 0; p < M; ++p) s[p] = a * x[p];
            symbols.push_back(std::move(s));
        }
        for (int k = 0; k < n_data; ++k) {
            std::vector<cplx> s(M);
            for (int p = 0; p < M; ++p) s[p] = data_rng.qpsk();
            symbols.push_back(std::move(s));
        }
        tx.push_back(ofdm_modulate(symbols, M, cp));
    }
    const std::vector<BasebandSignal> rx =
        apply_channel(tx, ch, sigma2, noise_rng);
    std::vector<std::vector<std::vector<cplx>>> rx_freq;
    rx_freq.reserve(nr);
    for (int j = 0; j < nr; ++j)
        rx_freq.push_back(ofdm_demodulate(rx[j], M, cp, nt));
    const CfrEstimate est = ofdm_ls_estimate(rx_freq, x, nt);
    return nmse(ch, est, excluded);
}

} // namespace

const char* norm_name(PowerNorm n) {
    return n == PowerNorm::SfbOutput ? "sfb-output" : "sfb-input";
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
    if (cfg.trials <= 0) throw std::runtime_error("trials must be positive");
    if (cfg.methods.empty()) throw std::runtime_error("no methods selected");
    const PrototypeFilter f = design_prototype(cfg.M, cfg.K);
    const InterferenceTable table = closed_form_weights(f);
    const PowerDelayProfile pdp = select_profile(cfg.profile);
    const int order = pdp.tap_count();

    std::vector<MethodContext> ctxs;
    for (const std::string& name : cfg.methods)
        ctxs.push_back(make_context(name, cfg, order));
    finalize_scaling(ctxs, cfg, f, table);

    SweepResult result;
    for (const MethodContext& ctx : ctxs) {
        for (double snr : cfg.snrs_db) {
            const double sigma2 = std::pow(10.0, -snr / 10.0);
            std::vector<double> tr_nmse(cfg.trials, 0.0);
            std::vector<int> tr_excl(cfg.trials, 0);
            // trials are independent and indexed: identical results with
            // and without OpenMP
            if (cfg.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
                for (int t = 0; t < cfg.trials; ++t)
                    tr_nmse[t] = ctx.is_ofdm
                                     ? run_ofdm_trial(cfg, pdp, sigma2, t,
                                                      &tr_excl[t])
                                     : run_oqam_trial(ctx, cfg, f, table, pdp,
                                                      sigma2, t, &tr_excl[t]);
            } else {
                for (int t = 0; t < cfg.trials; ++t)
                    tr_nmse[t] = ctx.is_ofdm
                                     ? run_ofdm_trial(cfg, pdp, sigma2, t,
                                                      &tr_excl[t])
                                     : run_oqam_trial(ctx, cfg, f, table, pdp,
                                                      sigma2, t, &tr_excl[t]);
            }
            SweepPoint pt;
            pt.method = ctx.name;
            pt.snr_db = snr;
            pt.trials = cfg.trials;
            double mean = 0.0;
            for (int t = 0; t < cfg.trials; ++t) {
                mean += tr_nmse[t];
                pt.excluded += tr_excl[t];
            }
            mean /= cfg.trials;
            double var = 0.0;
            for (int t = 0; t < cfg.trials; ++t)
                var += (tr_nmse[t] - mean) * (tr_nmse[t] - mean);
            pt.nmse_mean = mean;
            pt.nmse_stderr =
                cfg.trials > 1
                    ? std::sqrt(var / (double(cfg.trials) - 1.0) / cfg.trials)
                    : 0.0;
            result.points.push_back(std::move(pt));
        }
    }
    return result;
}

std::vector<PaprPoint> papr_profile(const ExperimentConfig& cfg) {
    const PrototypeFilter f = design_prototype(cfg.M, cfg.K);
    const PowerDelayProfile pdp = select_profile(cfg.profile);
    const int order = pdp.tap_count();
    std::vector<PaprPoint> out;
    for (const std::string& name : cfg.methods) {
        const MethodContext ctx = make_context(name, cfg, order);
        PaprPoint pt;
        pt.method = name;
        double peak = 0.0, mean = 0.0;
        long count = 0;
        if (ctx.is_ofdm) {
            std::vector<cplx> x(cfg.M);
            for (int p = 0; p < cfg.M; ++p)
                x[p] = (p % 2 == 0) ? cfg.amplitude : -cfg.amplitude;
            const BasebandSignal s = ofdm_modulate({x}, cfg.M, 0);
            for (const cplx& v : s.samples) {
                const double pw = std::norm(v);
                peak = std::max(peak, pw);
                mean += pw;
                ++count;
            }
        } else {
            const int span = frame_span(cfg.M, cfg.K, ctx.pre.symbols);
            for (const FrameGrid& g : ctx.pre.grids) {
                const BasebandSignal s = synthesize(g, f);
                for (int l = 0; l < span && l < s.length(); ++l) {
                    const double pw = std::norm(s.samples[l]);
                    peak = std::max(peak, pw);
                    mean += pw;
                    ++count;
                }
            }
        }
        mean /= double(count);
        pt.peak_power = peak;
        pt.mean_power = mean;
        pt.papr_db = 10.0 * std::log10(peak / mean);
        out.push_back(std::move(pt));
    }
    return out;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw std::runtime_error("config: expected boolean, got '" + v + "'");
}

} // namespace

void apply_config_line(ExperimentConfig& cfg, const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos)
        throw std::runtime_error("config: expected key=value, got '" + line +
                                 "'");
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    try {
        if (key == "methods") {
            cfg.methods = split_list(val);
        } else if (key == "m") {
            cfg.M = std::stoi(val);
        } else if (key == "k") {
            cfg.K = std::stoi(val);
        } else if (key == "snr_db") {
            cfg.snrs_db.clear();
            for (const std::string& v : split_list(val))
                cfg.snrs_db.push_back(std::stod(v));
        } else if (key == "trials") {
            cfg.trials = std::stoi(val);
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (key == "profile") {
            cfg.profile = val;
        } else if (key == "n_tx") {
            cfg.n_tx = std::stoi(val);
        } else if (key == "n_rx") {
            cfg.n_rx = std::stoi(val);
        } else if (key == "rho") {
            cfg.rho = std::stod(val);
        } else if (key == "data_symbols") {
            cfg.data_symbols = std::stoi(val);
        } else if (key == "normalization") {
            if (val == "sfb-output")
                cfg.norm = PowerNorm::SfbOutput;
            else if (val == "sfb-input")
                cfg.norm = PowerNorm::SfbInput;
            else
                throw std::runtime_error(
                    "config: normalization must be sfb-output or sfb-input");
        } else if (key == "parallel") {
            cfg.parallel = parse_bool(val);
        } else if (key == "amplitude") {
            cfg.amplitude = std::stod(val);
        } else if (key == "mimo_base") {
            cfg.mimo_base = val;
        } else if (key == "epsilon_negative") {
            cfg.epsilon_negative = parse_bool(val);
        } else if (key == "sparse_l_h") {
            cfg.sparse_L_h = std::stoi(val);
        } else if (key == "sparse_positions") {
            cfg.sparse_positions.clear();
            for (const std::string& v : split_list(val))
                cfg.sparse_positions.push_back(std::stoi(v));
        } else {
            throw std::runtime_error("config: unknown key '" + key + "'");
        }
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("config: bad value for '" + key + "': '" +
                                 val + "'");
    } catch (const std::out_of_range&) {
        throw std::runtime_error("config: value out of range for '" + key +
                                 "'");
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty()) continue;
        apply_config_line(cfg, trimmed);
    }
    return cfg;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "method,snr_db,nmse_mean,nmse_stderr,trials,excluded\n";
    char buf[256];
    for (const SweepPoint& pt : result.points) {
        std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g,%d,%ld\n",
                      pt.method.c_str(), pt.snr_db, pt.nmse_mean,
                      pt.nmse_stderr, pt.trials, pt.excluded);
        out << buf;
    }
}

void write_papr_csv(const std::vector<PaprPoint>& points,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "method,papr_db,peak_power,mean_power\n";
    char buf[256];
    for (const PaprPoint& pt : points) {
        std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g\n",
                      pt.method.c_str(), pt.papr_db, pt.peak_power,
                      pt.mean_power);
        out << buf;
    }
}

} // namespace fbmc
