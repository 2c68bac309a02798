#include "doctest.h"

#include "fbmc/cpofdm.hpp"
#include "fbmc/estimator.hpp"
#include "fbmc/prototype.hpp"
#include "fbmc/rng.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace fbmc;

namespace {

constexpr cplx kJ(0.0, 1.0);

AfbGrid demodulate_preamble(const GeneratedPreamble& pre,
                            const PrototypeFilter& f, cplx flat_gain) {
    BasebandSignal s = synthesize(pre.grids[0], f);
    for (cplx& v : s.samples) v *= flat_gain;
    return analyze(s, f, pre.symbols);
}

} // namespace

TEST_CASE("SISO estimators recover a flat channel without noise") {
    const int M = 64;
    const PrototypeFilter f = design_prototype(M, 4);
    const InterferenceTable t = closed_form_weights(f);
    const cplx gain(0.8, -0.6);

    for (PreambleFamily fam :
         {PreambleFamily::IAM_R, PreambleFamily::IAM_C,
          PreambleFamily::E_IAM_C}) {
        PreambleSpec spec;
        spec.family = fam;
        spec.M = M;
        const GeneratedPreamble pre = generate(spec);
        const AfbGrid y = demodulate_preamble(pre, f, gain);
        const CfrEstimate est = iam_estimate(y, pre, t);
        for (int p = 0; p < M; ++p) {
            CAPTURE(p);
            REQUIRE(est.valid[p]);
            // residual: interference outside the modeled window
            CHECK(std::abs(est.at(p, 0, 0) - gain) < 2e-2);
        }
    }
    {
        PreambleSpec spec;
        spec.family = PreambleFamily::POP;
        spec.M = M;
        const GeneratedPreamble pre = generate(spec);
        const AfbGrid y = demodulate_preamble(pre, f, gain);
        const CfrEstimate est = pop_estimate(y, pre);
        for (int p = 0; p < M; ++p)
            if (est.valid[p])
                CHECK(std::abs(est.at(p, 0, 0) - gain) < 2e-2);
    }
    for (PreambleFamily fam : {PreambleFamily::ICM_A, PreambleFamily::ICM_B,
                               PreambleFamily::ICM_C, PreambleFamily::ICM_D}) {
        PreambleSpec spec;
        spec.family = fam;
        spec.M = M;
        const GeneratedPreamble pre = generate(spec);
        const AfbGrid y = demodulate_preamble(pre, f, gain);
        const CfrEstimate est = icm_estimate(y, pre);
        // band edges wrap and are not interference-free; check the interior
        for (int p = 3; p < M - 3; ++p) {
            CAPTURE(p);
            CHECK(std::abs(est.at(p, 0, 0) - gain) < 5e-2);
        }
    }
}

TEST_CASE("MIMO IAM solver inverts an exact pseudo-pilot model") {
    PreambleSpec spec;
    spec.family = PreambleFamily::MIMO_IAM;
    spec.M = 16;
    spec.n_tx = 2;
    const GeneratedPreamble pre = generate(spec);
    const PrototypeFilter f = design_prototype(16, 3);
    const InterferenceTable t = closed_form_weights(f);
    const MimoPseudoPilots pilots = mimo_pseudo_pilots(pre, t, f);

    Rng rng(21);
    const int nr = 2, nt = 2;
    std::vector<cplx> H(size_t(16) * nr * nt);
    for (cplx& h : H) h = rng.cgaussian();
    std::vector<AfbGrid> y(nr, AfbGrid(16, pre.symbols));
    for (int p = 0; p < 16; ++p)
        for (int j = 0; j < nr; ++j)
            for (int k = 0; k < nt; ++k) {
                cplx acc(0.0, 0.0);
                for (int i = 0; i < nt; ++i)
                    acc += H[(size_t(p) * nr + j) * nt + i] *
                           pilots.at(p, i, k);
                y[j].at(p, pre.pilot_times[k]) = acc;
            }
    const CfrEstimate est = mimo_iam_estimate(y, pre, pilots);
    for (int p = 0; p < 16; ++p)
        for (int j = 0; j < nr; ++j)
            for (int i = 0; i < nt; ++i)
                CHECK(std::abs(est.at(p, j, i) -
                               H[(size_t(p) * nr + j) * nt + i]) < 1e-10);
}

TEST_CASE("MIMO POP recovers the channel from noiseless pilot pairs") {
    // y_{p,q} = H (d_q + j u_q) with arbitrary real interference u
    PreambleSpec spec;
    spec.family = PreambleFamily::MIMO_POP;
    spec.M = 8;
    spec.n_tx = 2;
    spec.n_rx = 2;
    spec.seed = 11;
    const GeneratedPreamble pre = generate(spec);
    const int nt = 2, nr = 2, T = pre.symbols;
    Rng rng(4);
    std::vector<AfbGrid> y(nr, AfbGrid(8, T));
    std::vector<cplx> H(size_t(8) * nr * nt);
    for (cplx& h : H) h = rng.cgaussian();
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < T; ++q) {
            cplx c[2];
            for (int i = 0; i < nt; ++i)
                c[i] = pre.grids[i].amplitude(p, q) + kJ * rng.gaussian();
            for (int j = 0; j < nr; ++j) {
                cplx acc(0.0, 0.0);
                for (int i = 0; i < nt; ++i)
                    acc += H[(size_t(p) * nr + j) * nt + i] * c[i];
                y[j].at(p, q) = acc;
            }
        }
    const CfrEstimate est = mimo_pop_estimate(y, pre);
    for (int p = 0; p < 8; ++p) {
        REQUIRE(est.valid[p]);
        for (int j = 0; j < nr; ++j)
            for (int i = 0; i < nt; ++i)
                CHECK(std::abs(est.at(p, j, i) -
                               H[(size_t(p) * nr + j) * nt + i]) < 1e-8);
    }
}

TEST_CASE("sparse LS: scaled-unitary system and exact noiseless recovery") {
    PreambleSpec spec;
    spec.family = PreambleFamily::MIMO_SPARSE;
    spec.M = 64;
    spec.n_tx = 2;
    spec.L_h = 4;
    spec.amplitude = 1.25;
    spec.start_positions = {0, 8};
    const GeneratedPreamble pre = generate(spec);

    const int n = spec.n_tx * spec.L_h;
    const std::vector<cplx> Cv = sparse_system_matrix(spec);
    // C^H C = N_t L_h d^2 I
    const double want = spec.n_tx * spec.L_h * spec.amplitude * spec.amplitude;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx acc(0.0, 0.0);
            for (int r = 0; r < n; ++r)
                acc += std::conj(Cv[size_t(r) * n + a]) * Cv[size_t(r) * n + b];
            CHECK(std::abs(acc - (a == b ? cplx(want, 0.0) : cplx(0.0, 0.0))) <
                  1e-10);
        }

    // noiseless synthetic observations y = C h
    Rng rng(8);
    const int nr = 2;
    std::vector<cplx> h(size_t(spec.n_tx) * spec.L_h * nr);
    for (cplx& v : h) v = rng.cgaussian();
    std::vector<AfbGrid> y(nr, AfbGrid(64, 3));
    const int N = spec.M / spec.L_h;
    for (int j = 0; j < nr; ++j)
        for (int k = 0; k < spec.n_tx; ++k)
            for (int a = 0; a < spec.L_h; ++a) {
                const int row = k * spec.L_h + a;
                cplx acc(0.0, 0.0);
                for (int c = 0; c < n; ++c)
                    acc += Cv[size_t(row) * n + c] *
                           h[size_t(c) * nr + j]; // h indexed [i*L_h+l][rx]
                y[j].at(spec.start_positions[k] + a * N, 1) = acc;
            }
    const CfrEstimate est = sparse_ls_estimate(y, spec, pre);
    for (int p = 0; p < 64; ++p)
        for (int j = 0; j < nr; ++j)
            for (int i = 0; i < spec.n_tx; ++i) {
                cplx cfr(0.0, 0.0);
                for (int l = 0; l < spec.L_h; ++l)
                    cfr += h[size_t(i * spec.L_h + l) * nr + j] *
                           std::polar(1.0, -2.0 * kPi * p * l / 64.0);
                CHECK(std::abs(est.at(p, j, i) - cfr) < 1e-8);
            }
}

TEST_CASE("sparse LS matches a pseudo-inverse oracle at M=16") {
    PreambleSpec spec;
    spec.family = PreambleFamily::MIMO_SPARSE;
    spec.M = 16;
    spec.n_tx = 2;
    spec.L_h = 2;
    spec.start_positions = {0, 4};
    const GeneratedPreamble pre = generate(spec);
    const int n = spec.n_tx * spec.L_h;
    const std::vector<cplx> Cv = sparse_system_matrix(spec);
    Eigen::MatrixXcd C(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) C(r, c) = Cv[size_t(r) * n + c];

    Rng rng(13);
    std::vector<AfbGrid> y(1, AfbGrid(16, 3));
    Eigen::VectorXcd b(n);
    const int N = spec.M / spec.L_h;
    for (int k = 0; k < spec.n_tx; ++k)
        for (int a = 0; a < spec.L_h; ++a) {
            const cplx v = rng.cgaussian(); // arbitrary observation
            b(k * spec.L_h + a) = v;
            y[0].at(spec.start_positions[k] + a * N, 1) = v;
        }
    const Eigen::VectorXcd h_oracle =
        C.completeOrthogonalDecomposition().pseudoInverse() * b;
    const CfrEstimate est = sparse_ls_estimate(y, spec, pre);
    for (int p = 0; p < 16; ++p)
        for (int i = 0; i < spec.n_tx; ++i) {
            cplx cfr(0.0, 0.0);
            for (int l = 0; l < spec.L_h; ++l)
                cfr += h_oracle(i * spec.L_h + l) *
                       std::polar(1.0, -2.0 * kPi * p * l / 16.0);
            CHECK(std::abs(est.at(p, 0, i) - cfr) < 1e-8);
        }
}

TEST_CASE("nmse accounting") {
    ChannelRealization ch;
    ch.M = 2;
    ch.n_rx = ch.n_tx = 1;
    ch.L_h = 1;
    ch.cfr = {cplx(1.0, 0.0), cplx(0.0, 2.0)};
    ch.taps = {cplx(1.0, 0.0)};
    CfrEstimate est(2, 1, 1);
    est.at(0, 0, 0) = cplx(1.0, 1.0); // error 1
    est.at(1, 0, 0) = cplx(0.0, 2.0); // exact
    int excluded = -1;
    CHECK(nmse(ch, est, &excluded) == doctest::Approx(1.0 / 5.0));
    CHECK(excluded == 0);
    est.valid[1] = 0;
    CHECK(nmse(ch, est, &excluded) == doctest::Approx(1.0));
    CHECK(excluded == 1);
    CfrEstimate wrong(3, 1, 1);
    CHECK_THROWS_AS(nmse(ch, wrong, nullptr), std::invalid_argument);
}
