#include "fbmc/preamble.hpp"

#include "fbmc/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace fbmc {

namespace {

constexpr cplx kJ(0.0, 1.0);

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// +1, -1, -1, +1 repeating; satisfies d_{m+1} = -d_{m-1}.
double sgn4(int m) {
    static const double s[4] = {1.0, -1.0, -1.0, 1.0};
    return s[m % 4];
}

// IAM-C middle-column value (unit amplitude): sgn4 with odd rows times j.
cplx iam_c_value(int m) {
    return (m % 2 == 0) ? cplx(sgn4(m), 0.0) : cplx(0.0, sgn4(m));
}

std::vector<double> hadamard(int n) {
    if (!is_pow2(n))
        throw std::invalid_argument("Hadamard order must be a power of two");
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

void require_even(int M) {
    if (M < 8 || M % 2 != 0)
        throw std::invalid_argument("preamble: M must be even and >= 8");
}

// Middle-column values of a SISO IAM preamble (unit amplitude).
std::vector<cplx> iam_middle_column(const PreambleSpec& spec,
                                    PreambleFamily family) {
    const int M = spec.M;
    std::vector<cplx> v(M);
    switch (family) {
    case PreambleFamily::IAM_R:
        for (int m = 0; m < M; ++m) v[m] = sgn4(m);
        break;
    case PreambleFamily::IAM_C:
    case PreambleFamily::E_IAM_C:
        for (int m = 0; m < M; ++m) v[m] = iam_c_value(m);
        break;
    case PreambleFamily::IAM_I: {
        // Triplets (e, -j e, -e) at rows (3k, 3k+1, 3k+2) with seeded BPSK
        // e_k. For M = 3T+2 the last triplet wraps into row 0, which forces
        // e_last = -e_0.
        if (M % 3 == 1)
            throw std::invalid_argument(
                "IAM-I: M mod 3 must be 0 or 2 (triplet layout)");
        const int triplets = (M + 2) / 3;
        Rng rng(mix_seed(spec.seed, 0x1a3));
        std::vector<double> e(triplets);
        for (int k = 0; k < triplets; ++k) e[k] = rng.bpsk();
        if (M % 3 == 2) e[triplets - 1] = -e[0];
        for (int k = 0; k < triplets; ++k) {
            v[(3 * k) % M] = e[k];
            v[(3 * k + 1) % M] = -kJ * e[k];
            v[(3 * k + 2) % M] = -e[k];
        }
        break;
    }
    default:
        throw std::invalid_argument("not an IAM family");
    }
    return v;
}

// Side columns of the E-IAM-C preamble (unit amplitude): (left, right).
std::pair<std::vector<cplx>, std::vector<cplx>> e_iam_c_sides(
    int M, bool epsilon_negative) {
    std::vector<cplx> left(M), right(M);
    if (!epsilon_negative) {
        // left column repeats each middle quadruple in reverse order,
        // right column is its negative
        for (int m = 0; m < M; ++m) {
            const int base = (m / 4) * 4;
            left[m] = iam_c_value(base + 3 - (m % 4));
            right[m] = -left[m];
        }
    } else {
        for (int m = 0; m < M; ++m) {
            const cplx u = (m % 2 == 0) ? cplx(1.0, 0.0) : kJ;
            left[m] = -u;
            right[m] = u;
        }
    }
    return {left, right};
}

void set_column(FrameGrid& g, int q, const std::vector<cplx>& v, double d,
                CellRole role) {
    for (int m = 0; m < g.subcarriers(); ++m)
        if (v[m] != cplx(0.0, 0.0)) g.set(m, q, v[m] * d, role);
}

GeneratedPreamble generate_siso_iam(const PreambleSpec& spec,
                                    PreambleFamily family) {
    const int M = spec.M;
    GeneratedPreamble out;
    out.symbols = 3;
    FrameGrid g(M, 3);
    const std::vector<cplx> mid = iam_middle_column(spec, family);
    set_column(g, 1, mid, spec.amplitude, CellRole::Pilot);
    if (family == PreambleFamily::E_IAM_C) {
        auto [left, right] = e_iam_c_sides(M, spec.epsilon_negative);
        set_column(g, 0, left, spec.amplitude, CellRole::Pilot);
        set_column(g, 2, right, spec.amplitude, CellRole::Pilot);
    }
    out.grids.push_back(std::move(g));
    out.pilot_times = {1};
    return out;
}

GeneratedPreamble generate_pop(const PreambleSpec& spec) {
    GeneratedPreamble out;
    out.symbols = 2;
    FrameGrid g(spec.M, 2);
    for (int m = 0; m < spec.M; ++m)
        g.set(m, 0, (m % 2 == 0 ? 1.0 : -1.0) * spec.amplitude, false,
              CellRole::Pilot);
    out.grids.push_back(std::move(g));
    out.pilot_times = {0, 1};
    return out;
}

GeneratedPreamble generate_icm(const PreambleSpec& spec) {
    const int M = spec.M;
    const double d = spec.amplitude;
    GeneratedPreamble out;
    switch (spec.family) {
    case PreambleFamily::ICM_A: {
        out.symbols = 3;
        FrameGrid g(M, 3);
        for (int m = 0; m < M; m += 2)
            g.set(m, 1, d * ((m / 2) % 2 == 0 ? 1.0 : -1.0), false,
                  CellRole::Pilot);
        out.grids.push_back(std::move(g));
        out.pilot_times = {1};
        break;
    }
    case PreambleFamily::ICM_B: {
        out.symbols = 3;
        FrameGrid g(M, 3);
        for (int m = 0; m < M; ++m)
            g.set(m, 1, d * (m % 2 == 0 ? 1.0 : -1.0), false, CellRole::Pilot);
        out.grids.push_back(std::move(g));
        out.pilot_times = {1};
        break;
    }
    case PreambleFamily::ICM_C: {
        // Pairwise-cancellation pattern at every second subcarrier. Free
        // data: one (a, b, c) triple propagated as a_{m+2} = -a_m,
        // c_{m+2} = -c_m, b constant, plus one side value per pilot.
        if (M % 4 != 0)
            throw std::invalid_argument("ICM-C: M must be a multiple of 4");
        out.symbols = 3;
        FrameGrid g(M, 3);
        double a = -d, b = -d, c = -d; // seed 0: the canonical table
        std::vector<double> side(M / 2);
        for (int k = 0; k < M / 2; ++k) side[k] = d * (k % 2 == 0 ? 1.0 : -1.0);
        if (spec.seed != 0) {
            Rng rng(mix_seed(spec.seed, 0x1c3));
            a = d * rng.bpsk();
            b = d * rng.bpsk();
            c = d * rng.bpsk();
            for (double& s : side) s = d * rng.bpsk();
        }
        for (int m = 0; m < M; m += 2) {
            const int k = m / 2;
            g.set(m, 1, d, false, CellRole::Pilot);
            g.set(m, 0, side[k], false, CellRole::StructuredData);
            g.set(m, 2, side[k], false, CellRole::StructuredData);
        }
        for (int m = 1; m < M; m += 2) {
            const double flip = ((m - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
            g.set(m, 0, a * flip, false, CellRole::StructuredData);
            g.set(m, 1, b, false, CellRole::StructuredData);
            g.set(m, 2, c * flip, false, CellRole::StructuredData);
        }
        out.grids.push_back(std::move(g));
        out.pilot_times = {1};
        break;
    }
    case PreambleFamily::ICM_D: {
        out.symbols = 1;
        FrameGrid g(M, 1);
        for (int m = 0; m < M; ++m)
            g.set(m, 0, d * (m % 2 == 0 ? 1.0 : -1.0), false, CellRole::Pilot);
        out.grids.push_back(std::move(g));
        out.pilot_times = {0};
        break;
    }
    default:
        throw std::invalid_argument("generate_icm: not an ICM family");
    }
    return out;
}

GeneratedPreamble generate_mimo_iam(const PreambleSpec& spec) {
    const int M = spec.M;
    const int nt = spec.n_tx;
    if (!is_pow2(nt))
        throw std::invalid_argument(
            "MIMO IAM: N_t must be a power of two (Hadamard signs)");
    const PreambleFamily base = spec.mimo_base;
    if (base != PreambleFamily::IAM_R && base != PreambleFamily::IAM_I &&
        base != PreambleFamily::IAM_C && base != PreambleFamily::E_IAM_C)
        throw std::invalid_argument("MIMO IAM: base must be an IAM family");
    const std::vector<double> A = hadamard(nt);
    const std::vector<cplx> mid = iam_middle_column(spec, base);
    GeneratedPreamble out;
    if (base == PreambleFamily::E_IAM_C) {
        out.symbols = 3 * nt;
        auto [left, right] = e_iam_c_sides(M, spec.epsilon_negative);
        for (int i = 0; i < nt; ++i) {
            FrameGrid g(M, out.symbols);
            for (int k = 0; k < nt; ++k) {
                const double s = A[size_t(i) * nt + k] * spec.amplitude;
                set_column(g, 3 * k, left, s, CellRole::Pilot);
                set_column(g, 3 * k + 1, mid, s, CellRole::Pilot);
                set_column(g, 3 * k + 2, right, s, CellRole::Pilot);
            }
            out.grids.push_back(std::move(g));
        }
        for (int k = 0; k < nt; ++k) out.pilot_times.push_back(3 * k + 1);
    } else {
        out.symbols = 2 * nt + 1;
        for (int i = 0; i < nt; ++i) {
            FrameGrid g(M, out.symbols);
            for (int k = 0; k < nt; ++k)
                set_column(g, 2 * k + 1, mid,
                           A[size_t(i) * nt + k] * spec.amplitude,
                           CellRole::Pilot);
            out.grids.push_back(std::move(g));
        }
        for (int k = 0; k < nt; ++k) out.pilot_times.push_back(2 * k + 1);
    }
    return out;
}

GeneratedPreamble generate_mimo_sparse(const PreambleSpec& spec) {
    const int M = spec.M;
    const int nt = spec.n_tx;
    const int Lh = spec.L_h;
    if (Lh <= 0 || M % Lh != 0)
        throw std::invalid_argument("MIMO sparse: M/L_h must be an integer");
    const int N = M / Lh;
    if (N < 2 * nt)
        throw std::invalid_argument("MIMO sparse: M/L_h must be >= 2*N_t");
    if (static_cast<int>(spec.start_positions.size()) != nt)
        throw std::invalid_argument("MIMO sparse: need N_t start positions");
    for (int i = 0; i < nt; ++i) {
        const int pi = spec.start_positions[i];
        if (pi < 0 || pi >= N)
            throw std::invalid_argument("MIMO sparse: p_i out of range");
        for (int j = 0; j < i; ++j) {
            const int gap = std::abs(pi - spec.start_positions[j]) % N;
            if (std::min(gap, N - gap) < 2)
                throw std::invalid_argument(
                    "MIMO sparse: pilot sets need a null between them");
        }
    }
    std::vector<double> D = spec.D;
    if (D.empty())
        D = hadamard(nt);
    if (static_cast<int>(D.size()) != nt * nt)
        throw std::invalid_argument("MIMO sparse: D must be N_t x N_t");
    // columns must be orthogonal with equal norms (scaled-unitary D)
    double norm0 = 0.0;
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j <= i; ++j) {
            double dot = 0.0;
            for (int k = 0; k < nt; ++k)
                dot += D[size_t(k) * nt + i] * D[size_t(k) * nt + j];
            if (i == j) {
                if (i == 0) norm0 = dot;
                else if (std::abs(dot - norm0) > 1e-9 * norm0)
                    throw std::invalid_argument(
                        "MIMO sparse: D columns must have equal norms");
            } else if (std::abs(dot) > 1e-9) {
                throw std::invalid_argument("MIMO sparse: D not orthogonal");
            }
        }
    GeneratedPreamble out;
    out.symbols = 3;
    for (int i = 0; i < nt; ++i) {
        FrameGrid g(M, 3);
        for (int k = 0; k < nt; ++k) {
            const double v = spec.amplitude * D[size_t(k) * nt + i];
            for (int r = 0; r < Lh; ++r)
                g.set(spec.start_positions[k] + r * N, 1, v, false,
                      CellRole::Pilot);
        }
        out.grids.push_back(std::move(g));
    }
    out.pilot_times = {1};
    return out;
}

GeneratedPreamble generate_mimo_pop(const PreambleSpec& spec) {
    const int M = spec.M;
    const int nt = spec.n_tx;
    const int nr = spec.n_rx;
    if (nr < nt)
        throw std::invalid_argument("MIMO POP: requires N_r >= N_t");
    const int T = 2 * nr;
    GeneratedPreamble out;
    out.symbols = T;
    std::vector<FrameGrid> grids(nt, FrameGrid(M, T));
    Rng rng(mix_seed(spec.seed, 0x909));
    Eigen::MatrixXd Dp(nt, T);
    for (int p = 0; p < M; ++p) {
        // redraw until D_p is well conditioned; noise enhancement in POP
        // depends on the pilot values
        for (;;) {
            for (int i = 0; i < nt; ++i)
                for (int q = 0; q < T; ++q) Dp(i, q) = rng.bpsk();
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(Dp);
            const auto& sv = svd.singularValues();
            if (sv(sv.size() - 1) > 1e-12 && sv(0) / sv(sv.size() - 1) < 10.0)
                break;
        }
        for (int i = 0; i < nt; ++i)
            for (int q = 0; q < T; ++q)
                grids[i].set(p, q, spec.amplitude * Dp(i, q), false,
                             CellRole::Pilot);
    }
    out.grids = std::move(grids);
    for (int q = 0; q < T; ++q) out.pilot_times.push_back(q);
    return out;
}

} // namespace

const char* family_name(PreambleFamily family) {
    switch (family) {
    case PreambleFamily::POP: return "pop";
    case PreambleFamily::IAM_R: return "iam-r";
    case PreambleFamily::IAM_I: return "iam-i";
    case PreambleFamily::IAM_C: return "iam-c";
    case PreambleFamily::E_IAM_C: return "e-iam-c";
    case PreambleFamily::ICM_A: return "icm-a";
    case PreambleFamily::ICM_B: return "icm-b";
    case PreambleFamily::ICM_C: return "icm-c";
    case PreambleFamily::ICM_D: return "icm-d";
    case PreambleFamily::MIMO_IAM: return "mimo-iam";
    case PreambleFamily::MIMO_SPARSE: return "mimo-sparse";
    case PreambleFamily::MIMO_POP: return "mimo-pop";
    }
    return "?";
}

PreambleFamily family_from_name(const std::string& name) {
    for (PreambleFamily f :
         {PreambleFamily::POP, PreambleFamily::IAM_R, PreambleFamily::IAM_I,
          PreambleFamily::IAM_C, PreambleFamily::E_IAM_C, PreambleFamily::ICM_A,
          PreambleFamily::ICM_B, PreambleFamily::ICM_C, PreambleFamily::ICM_D,
          PreambleFamily::MIMO_IAM, PreambleFamily::MIMO_SPARSE,
          PreambleFamily::MIMO_POP})
        if (name == family_name(f)) return f;
    throw std::invalid_argument("unknown preamble family: " + name);
}

GeneratedPreamble generate(const PreambleSpec& spec) {
    require_even(spec.M);
    switch (spec.family) {
    case PreambleFamily::POP:
        return generate_pop(spec);
    case PreambleFamily::IAM_R:
    case PreambleFamily::IAM_I:
    case PreambleFamily::IAM_C:
    case PreambleFamily::E_IAM_C:
        return generate_siso_iam(spec, spec.family);
    case PreambleFamily::ICM_A:
    case PreambleFamily::ICM_B:
    case PreambleFamily::ICM_C:
    case PreambleFamily::ICM_D:
        return generate_icm(spec);
    case PreambleFamily::MIMO_IAM:
        return generate_mimo_iam(spec);
    case PreambleFamily::MIMO_SPARSE:
        return generate_mimo_sparse(spec);
    case PreambleFamily::MIMO_POP:
        return generate_mimo_pop(spec);
    }
    throw std::invalid_argument("generate: unknown family");
}

std::vector<double> predicted_magnitudes(const PreambleSpec& spec,
                                         const InterferenceTable& table) {
    const int M = spec.M;
    const double d = spec.amplitude;
    const double b = table.beta;
    std::vector<double> mag(M);
    switch (spec.family) {
    case PreambleFamily::IAM_R:
        std::fill(mag.begin(), mag.end(), d * std::sqrt(1.0 + 4.0 * b * b));
        break;
    case PreambleFamily::IAM_C:
        std::fill(mag.begin(), mag.end(), d * (1.0 + 2.0 * b));
        break;
    case PreambleFamily::IAM_I: {
        const double center = d * (1.0 + 2.0 * b);
        const double other = d * std::hypot(1.0 + b, b);
        for (int m = 0; m < M; ++m)
            mag[m] = (m % 3 == 1) ? center : other;
        break;
    }
    case PreambleFamily::E_IAM_C: {
        const double g = table.gamma, e = table.epsilon;
        const double v =
            spec.epsilon_negative
                ? d * std::sqrt((1.0 + 2.0 * b) * (1.0 + 2.0 * b) +
                                4.0 * (g - 2.0 * e) * (g - 2.0 * e))
                : d * std::abs(1.0 + 2.0 * (b + g + 2.0 * e));
        std::fill(mag.begin(), mag.end(), v);
        break;
    }
    default:
        throw std::invalid_argument(
            "predicted_magnitudes: only IAM families are supported");
    }
    return mag;
}

} // namespace fbmc
