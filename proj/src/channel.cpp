#include "fbmc/channel.hpp"

#include <Eigen/Dense>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fbmc {

namespace {

Eigen::MatrixXd exp_correlation_sqrt(int n, double rho) {
    Eigen::MatrixXd R(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) R(a, b) = std::pow(rho, std::abs(a - b));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw std::runtime_error("correlation matrix not PSD");
    return es.operatorSqrt();
}

} // namespace

PowerDelayProfile PowerDelayProfile::vehicular_a() {
    PowerDelayProfile p;
    p.name = "veh-a";
    p.delays_ns = {0.0, 310.0, 710.0, 1090.0, 1730.0, 2510.0};
    p.powers_db = {0.0, -1.0, -9.0, -10.0, -15.0, -20.0};
    return p;
}

PowerDelayProfile PowerDelayProfile::vehicular_b() {
    PowerDelayProfile p;
    p.name = "veh-b";
    p.delays_ns = {0.0, 300.0, 8900.0, 12900.0, 17100.0, 20000.0};
    p.powers_db = {-2.5, 0.0, -12.8, -10.0, -25.2, -16.0};
    return p;
}

PowerDelayProfile PowerDelayProfile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    PowerDelayProfile p;
    p.name = path;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq != std::string::npos) {
            const std::string key = trimmed.substr(0, eq);
            const std::string val = trimmed.substr(eq + 1);
            if (key == "name") {
                p.name = val;
            } else if (key == "sample_rate_hz") {
                p.sample_rate_hz = std::stod(val);
            } else {
                throw std::runtime_error("profile file: unknown key '" + key +
                                         "' at line " + std::to_string(lineno));
            }
            continue;
        }
        const auto comma = trimmed.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("profile file: expected delay_ns,power_db"
                                     " at line " + std::to_string(lineno));
        p.delays_ns.push_back(std::stod(trimmed.substr(0, comma)));
        p.powers_db.push_back(std::stod(trimmed.substr(comma + 1)));
    }
    if (p.delays_ns.empty())
        throw std::runtime_error("profile file has no taps: " + path);
    if (p.sample_rate_hz <= 0.0)
        throw std::runtime_error("profile file: sample_rate_hz must be > 0");
    return p;
}

std::vector<double> PowerDelayProfile::tap_powers() const {
    if (delays_ns.size() != powers_db.size() || delays_ns.empty())
        throw std::runtime_error("power delay profile is malformed");
    int max_idx = 0;
    std::vector<int> idx(delays_ns.size());
    for (size_t k = 0; k < delays_ns.size(); ++k) {
        const double samples = delays_ns[k] * 1e-9 * sample_rate_hz;
        idx[k] = static_cast<int>(std::lround(samples));
        if (idx[k] < 0)
            throw std::runtime_error("power delay profile: negative delay");
        if (idx[k] > max_idx) max_idx = idx[k];
    }
    std::vector<double> lin(max_idx + 1, 0.0);
    double total = 0.0;
    for (size_t k = 0; k < delays_ns.size(); ++k) {
        const double pw = std::pow(10.0, powers_db[k] / 10.0);
        lin[idx[k]] += pw;
        total += pw;
    }
    for (double& v : lin) v /= total;
    return lin;
}

ChannelRealization realize_channel(const PowerDelayProfile& pdp, int M,
                                   int n_tx, int n_rx, double rho_tx,
                                   double rho_rx, Rng& rng) {
    if (M <= 0 || n_tx <= 0 || n_rx <= 0)
        throw std::invalid_argument("realize_channel: bad dimensions");
    const std::vector<double> power = pdp.tap_powers();
    const int L = static_cast<int>(power.size());

    ChannelRealization ch;
    ch.n_tx = n_tx;
    ch.n_rx = n_rx;
    ch.L_h = L;
    ch.M = M;
    ch.taps.assign(size_t(L) * n_rx * n_tx, cplx(0.0, 0.0));
    ch.cfr.assign(size_t(M) * n_rx * n_tx, cplx(0.0, 0.0));

    const bool correlated = (n_tx > 1 || n_rx > 1) &&
                            (rho_tx != 0.0 || rho_rx != 0.0);
    Eigen::MatrixXd Rt_sqrt, Rr_sqrt;
    if (correlated) {
        Rt_sqrt = exp_correlation_sqrt(n_tx, rho_tx);
        Rr_sqrt = exp_correlation_sqrt(n_rx, rho_rx);
    }

    Eigen::MatrixXcd Hw(n_rx, n_tx);
    for (int l = 0; l < L; ++l) {
        if (power[l] == 0.0) continue;
        const double amp = std::sqrt(power[l]);
        for (int j = 0; j < n_rx; ++j)
            for (int i = 0; i < n_tx; ++i) Hw(j, i) = amp * rng.cgaussian();
        if (correlated) Hw = (Rr_sqrt * Hw * Rt_sqrt).eval();
        for (int j = 0; j < n_rx; ++j)
            for (int i = 0; i < n_tx; ++i) ch.tap(l, j, i) = Hw(j, i);
    }

    for (int p = 0; p < M; ++p) {
        for (int l = 0; l < L; ++l) {
            if (power[l] == 0.0) continue;
            const cplx w = std::polar(1.0, -2.0 * kPi * p * l / M);
            for (int j = 0; j < n_rx; ++j)
                for (int i = 0; i < n_tx; ++i)
                    ch.cfr[(size_t(p) * n_rx + j) * n_tx + i] +=
                        ch.tap(l, j, i) * w;
        }
    }
    return ch;
}

std::vector<BasebandSignal> apply_channel(
    const std::vector<BasebandSignal>& tx, const ChannelRealization& channel,
    double sigma2, Rng& noise_rng) {
    if (static_cast<int>(tx.size()) != channel.n_tx)
        throw std::invalid_argument("apply_channel: tx count mismatch");
    const int len = tx.empty() ? 0 : tx[0].length();
    for (const BasebandSignal& s : tx)
        if (s.length() != len)
            throw std::invalid_argument("apply_channel: unequal tx lengths");
    if (sigma2 < 0.0)
        throw std::invalid_argument("apply_channel: negative noise variance");

    const int out_len = len + channel.L_h - 1;
    const double nstd = std::sqrt(sigma2);
    std::vector<BasebandSignal> rx(channel.n_rx);
    for (int j = 0; j < channel.n_rx; ++j) {
        rx[j].samples.assign(out_len, cplx(0.0, 0.0));
        for (int i = 0; i < channel.n_tx; ++i)
            for (int l = 0; l < channel.L_h; ++l) {
                const cplx h = channel.tap(l, j, i);
                if (h == cplx(0.0, 0.0)) continue;
                for (int t = 0; t < len; ++t)
                    rx[j].samples[t + l] += h * tx[i].samples[t];
            }
        if (nstd > 0.0)
            for (cplx& v : rx[j].samples) v += nstd * noise_rng.cgaussian();
    }
    return rx;
}

} // namespace fbmc
