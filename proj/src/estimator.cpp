#include "fbmc/estimator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbmc {

namespace {

constexpr double kDegenerate = 1e-12;
constexpr cplx kJ(0.0, 1.0);

std::vector<double> hadamard_rowmajor(int n) {
    std::vector<double> h(size_t(n) * n, 1.0);
    for (int blk = 1; blk < n; blk *= 2)
        for (int r = 0; r < blk; ++r)
            for (int c = 0; c < blk; ++c) {
                const double v = h[size_t(r) * n + c];
                h[size_t(r) * n + c + blk] = v;
                h[size_t(r + blk) * n + c] = v;
                h[size_t(r + blk) * n + c + blk] = -v;
            }
    return h;
}

void check_grid(const AfbGrid& y, const GeneratedPreamble& pre) {
    if (pre.grids.empty())
        throw std::invalid_argument("estimator: empty preamble");
    if (y.M != pre.grids[0].subcarriers())
        throw std::invalid_argument("estimator: grid width mismatch");
    if (y.N < pre.symbols)
        throw std::invalid_argument("estimator: demodulated grid too short");
}

} // namespace

std::vector<cplx> siso_pseudo_pilots(const GeneratedPreamble& pre,
                                     const InterferenceTable& table) {
    if (pre.grids.size() != 1)
        throw std::invalid_argument("siso_pseudo_pilots: expects one antenna");
    const FrameGrid& g = pre.grids[0];
    const int q1 = pre.pilot_times.at(0);
    std::vector<cplx> c(g.subcarriers());
    for (int p = 0; p < g.subcarriers(); ++p)
        c[p] = pseudo_pilot(g, table, p, q1);
    return c;
}

CfrEstimate iam_estimate(const AfbGrid& y, const GeneratedPreamble& pre,
                         const InterferenceTable& table) {
    check_grid(y, pre);
    const std::vector<cplx> c = siso_pseudo_pilots(pre, table);
    const int q1 = pre.pilot_times.at(0);
    CfrEstimate est(y.M, 1, 1);
    est.method = "iam";
    for (int p = 0; p < y.M; ++p) {
        if (std::abs(c[p]) < kDegenerate) {
            est.valid[p] = 0;
            continue;
        }
        est.at(p, 0, 0) = y.at(p, q1) / c[p];
    }
    return est;
}

CfrEstimate pop_estimate(const AfbGrid& y, const GeneratedPreamble& pre) {
    check_grid(y, pre);
    if (pre.pilot_times.size() != 2)
        throw std::invalid_argument("pop_estimate: needs two pilot instants");
    const FrameGrid& g = pre.grids[0];
    const int q1 = pre.pilot_times[0], q2 = pre.pilot_times[1];
    CfrEstimate est(y.M, 1, 1);
    est.method = "pop";
    for (int p = 0; p < y.M; ++p) {
        const double d1 = g.amplitude(p, q1).real();
        const double d2 = g.amplitude(p, q2).real();
        const cplx y1 = y.at(p, q1), y2 = y.at(p, q2);
        const double den = std::imag(std::conj(y1) * y2);
        if (std::abs(den) < kDegenerate) {
            est.valid[p] = 0;
            continue;
        }
        const cplx W = kJ * (d1 * std::conj(y2) - d2 * std::conj(y1)) / den;
        if (std::abs(W) < kDegenerate) {
            est.valid[p] = 0;
            continue;
        }
        est.at(p, 0, 0) = 1.0 / W;
    }
    return est;
}

CfrEstimate icm_estimate(const AfbGrid& y, const GeneratedPreamble& pre) {
    check_grid(y, pre);
    const FrameGrid& g = pre.grids[0];
    const int q1 = pre.pilot_times.at(0);
    const int M = y.M;
    CfrEstimate est(M, 1, 1);
    est.method = "icm";
    std::vector<int> pilots;
    for (int p = 0; p < M; ++p) {
        if (g.role(p, q1) != CellRole::Pilot) continue;
        const cplx d = g.amplitude(p, q1);
        if (std::abs(d) < kDegenerate) continue;
        est.at(p, 0, 0) = y.at(p, q1) / d;
        pilots.push_back(p);
    }
    if (pilots.empty())
        throw std::invalid_argument("icm_estimate: preamble has no pilots");
    // circular linear interpolation over the skipped subcarriers
    const int n = static_cast<int>(pilots.size());
    for (int k = 0; k < n; ++k) {
        const int a = pilots[k];
        const int b = pilots[(k + 1) % n];
        const int gap = ((b - a) % M + M) % M;
        if (gap <= 1 && n > 1) continue;
        const int span = (n == 1) ? M : gap;
        const cplx Ha = est.at(a, 0, 0);
        const cplx Hb = est.at(b % M, 0, 0);
        for (int t = 1; t < span; ++t) {
            const int p = (a + t) % M;
            const double w = double(t) / span;
            est.at(p, 0, 0) = (1.0 - w) * Ha + w * Hb;
        }
        if (n == 1) break;
    }
    return est;
}

MimoPseudoPilots mimo_pseudo_pilots(const GeneratedPreamble& pre,
                                    const InterferenceTable& table,
                                    const PrototypeFilter& f) {
    const int nt = static_cast<int>(pre.grids.size());
    const int M = pre.grids.at(0).subcarriers();
    const int nk = static_cast<int>(pre.pilot_times.size());
    if (nk != nt)
        throw std::invalid_argument(
            "mimo_pseudo_pilots: pilot instants != antennas");
    MimoPseudoPilots out;
    out.M = M;
    out.n_tx = nt;
    out.C.resize(size_t(M) * nt * nt);
    for (int p = 0; p < M; ++p)
        for (int i = 0; i < nt; ++i)
            for (int k = 0; k < nt; ++k)
                out.C[(size_t(p) * nt + i) * nt + k] = pseudo_pilot(
                    pre.grids[i], table, p, pre.pilot_times[k], true, &f);
    return out;
}

CfrEstimate mimo_iam_estimate(const std::vector<AfbGrid>& y,
                              const GeneratedPreamble& pre,
                              const MimoPseudoPilots& pilots) {
    const int nt = static_cast<int>(pre.grids.size());
    const int nr = static_cast<int>(y.size());
    if (nr == 0) throw std::invalid_argument("mimo_iam_estimate: no rx grids");
    for (const AfbGrid& g : y) check_grid(g, pre);
    const int M = y[0].M;
    if (pilots.M != M || pilots.n_tx != nt)
        throw std::invalid_argument("mimo_iam_estimate: pilot matrix mismatch");
    CfrEstimate est(M, nr, nt);
    est.method = "mimo-iam";
    Eigen::MatrixXcd Cp(nt, nt), Y(nr, nt);
    for (int p = 0; p < M; ++p) {
        for (int i = 0; i < nt; ++i)
            for (int k = 0; k < nt; ++k) Cp(i, k) = pilots.at(p, i, k);
        for (int j = 0; j < nr; ++j)
            for (int k = 0; k < nt; ++k)
                Y(j, k) = y[j].at(p, pre.pilot_times[k]);
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(Cp);
        lu.setThreshold(kDegenerate);
        if (!lu.isInvertible()) {
            est.valid[p] = 0;
            continue;
        }
        // y_{p,t_k} = H_p c_{p,t_k}  =>  Y = Hp Cp
        const Eigen::MatrixXcd Hp = Y * lu.inverse();
        for (int j = 0; j < nr; ++j)
            for (int i = 0; i < nt; ++i) est.at(p, j, i) = Hp(j, i);
    }
    return est;
}

CfrEstimate mimo_pop_estimate(const std::vector<AfbGrid>& y,
                              const GeneratedPreamble& pre) {
    const int nt = static_cast<int>(pre.grids.size());
    const int nr = static_cast<int>(y.size());
    if (nr < nt)
        throw std::invalid_argument("mimo_pop_estimate: needs N_r >= N_t");
    for (const AfbGrid& g : y) check_grid(g, pre);
    const int M = y[0].M;
    const int T = pre.symbols;
    if (T != 2 * nr)
        throw std::invalid_argument(
            "mimo_pop_estimate: preamble length must be 2*N_r symbols");
    CfrEstimate est(M, nr, nt);
    est.method = "mimo-pop";
    Eigen::MatrixXd Yp(2 * nr, T), Dp(nt, T);
    for (int p = 0; p < M; ++p) {
        for (int q = 0; q < T; ++q) {
            for (int j = 0; j < nr; ++j) {
                const cplx v = y[j].at(p, q);
                Yp(j, q) = v.real();
                Yp(nr + j, q) = -v.imag();
            }
            for (int i = 0; i < nt; ++i)
                Dp(i, q) = pre.grids[i].amplitude(p, q).real();
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(Yp);
        lu.setThreshold(kDegenerate);
        if (!lu.isInvertible()) {
            est.valid[p] = 0;
            continue;
        }
        const Eigen::MatrixXd WRI = Dp * lu.inverse(); // nt x 2nr
        const Eigen::MatrixXcd W =
            WRI.leftCols(nr).cast<cplx>() + kJ * WRI.rightCols(nr).cast<cplx>();
        const Eigen::MatrixXcd G = W * W.adjoint(); // nt x nt
        Eigen::FullPivLU<Eigen::MatrixXcd> lug(G);
        lug.setThreshold(kDegenerate);
        if (!lug.isInvertible()) {
            est.valid[p] = 0;
            continue;
        }
        const Eigen::MatrixXcd Hp = W.adjoint() * lug.inverse(); // nr x nt
        for (int j = 0; j < nr; ++j)
            for (int i = 0; i < nt; ++i) est.at(p, j, i) = Hp(j, i);
    }
    return est;
}

std::vector<cplx> sparse_system_matrix(const PreambleSpec& spec) {
    const int nt = spec.n_tx;
    const int Lh = spec.L_h;
    const int M = spec.M;
    if (Lh <= 0 || M % Lh != 0)
        throw std::invalid_argument("sparse_system_matrix: M/L_h not integer");
    const int N = M / Lh;
    if (static_cast<int>(spec.start_positions.size()) != nt)
        throw std::invalid_argument("sparse_system_matrix: start positions");
    std::vector<double> D = spec.D;
    if (D.empty()) D = hadamard_rowmajor(nt);
    const int n = nt * Lh;
    std::vector<cplx> C(size_t(n) * n);
    for (int k = 0; k < nt; ++k)
        for (int a = 0; a < Lh; ++a) {
            const int s = spec.start_positions[k] + a * N; // pilot subcarrier
            const int row = k * Lh + a;
            for (int i = 0; i < nt; ++i) {
                const double d = spec.amplitude * D[size_t(k) * nt + i];
                for (int l = 0; l < Lh; ++l)
                    C[size_t(row) * n + i * Lh + l] =
                        d * std::polar(1.0, -2.0 * kPi * s * l / M);
            }
        }
    return C;
}

CfrEstimate sparse_ls_estimate(const std::vector<AfbGrid>& y,
                               const PreambleSpec& spec,
                               const GeneratedPreamble& pre) {
    const int nt = spec.n_tx;
    const int nr = static_cast<int>(y.size());
    if (nr == 0) throw std::invalid_argument("sparse_ls_estimate: no rx");
    for (const AfbGrid& g : y) check_grid(g, pre);
    const int M = spec.M;
    const int Lh = spec.L_h;
    const int N = M / Lh;
    const int q1 = pre.pilot_times.at(0);
    const int n = nt * Lh;

    const std::vector<cplx> Cv = sparse_system_matrix(spec);
    Eigen::MatrixXcd C(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) C(r, c) = Cv[size_t(r) * n + c];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(C);

    CfrEstimate est(M, nr, nt);
    est.method = "sparse-ls";
    Eigen::VectorXcd b(n);
    for (int j = 0; j < nr; ++j) {
        for (int k = 0; k < nt; ++k)
            for (int a = 0; a < Lh; ++a)
                b(k * Lh + a) = y[j].at(spec.start_positions[k] + a * N, q1);
        const Eigen::VectorXcd h = qr.solve(b); // [antenna i taps l]
        for (int p = 0; p < M; ++p)
            for (int i = 0; i < nt; ++i) {
                cplx acc(0.0, 0.0);
                for (int l = 0; l < Lh; ++l)
                    acc += h(i * Lh + l) *
                           std::polar(1.0, -2.0 * kPi * p * l / M);
                est.at(p, j, i) = acc;
            }
    }
    return est;
}

double nmse(const ChannelRealization& ch, const CfrEstimate& est,
            int* excluded) {
    if (ch.M != est.M || ch.n_rx != est.n_rx || ch.n_tx != est.n_tx)
        throw std::invalid_argument("nmse: dimension mismatch");
    double num = 0.0, den = 0.0;
    int skipped = 0;
    for (int p = 0; p < ch.M; ++p) {
        if (!est.valid[p]) {
            ++skipped;
            continue;
        }
        for (int j = 0; j < ch.n_rx; ++j)
            for (int i = 0; i < ch.n_tx; ++i) {
                num += std::norm(ch.H(p, j, i) - est.at(p, j, i));
                den += std::norm(ch.H(p, j, i));
            }
    }
    if (excluded) *excluded = skipped;
    return den > 0.0 ? num / den : 0.0;
}

} // namespace fbmc
