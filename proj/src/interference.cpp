#include "fbmc/interference.hpp"

#include "fbmc/filterbank.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fbmc {

double InterferenceTable::weight(int m, int dm, int dq) const {
    if (std::abs(dm) > 2 || std::abs(dq) > 1)
        throw std::invalid_argument("InterferenceTable::weight: offset range");
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    if (dq == 0) {
        if (dm == 1) return beta;
        if (dm == -1) return -beta;
        return 0.0; // dm = 0 (no self weight) and |dm| = 2 (ambiguity zero)
    }
    if (dm == 0) return (dq == 1 ? gamma : -gamma) * parity;
    if (std::abs(dm) == 1) return delta * parity;
    return (dq == 1 ? -epsilon : epsilon) * parity; // |dm| = 2
}

std::array<std::array<double, 3>, 5> InterferenceTable::neighborhood(
    int m) const {
    std::array<std::array<double, 3>, 5> w{};
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 3; ++c)
            w[r][c] = weight(m, r - 2, c - 1);
    return w;
}

double InterferenceTable::wrap_factor() const {
    const int e = (L_g - 1) + M / 2;
    return (e % 2 == 0) ? 1.0 : -1.0;
}

cplx inner_product_bruteforce(const PrototypeFilter& f, int m, int n, int p,
                              int q) {
    if (n < 0 || q < 0)
        throw std::invalid_argument("inner_product_bruteforce: negative time");
    const int len = frame_span(f.M, f.K, std::max(n, q) + 1);
    const std::vector<cplx> a = subcarrier_atom(f, m, n, len);
    const std::vector<cplx> b = subcarrier_atom(f, p, q, len);
    cplx acc(0.0, 0.0);
    for (int l = 0; l < len; ++l) acc += a[l] * std::conj(b[l]);
    return acc;
}

InterferenceTable closed_form_weights(const PrototypeFilter& f) {
    const int M = f.M;
    const int L = f.length();
    const std::vector<double>& g = f.g;
    const cplx ph = std::polar(1.0, -2.0 * kPi / M * (L - 1) / 2.0);

    cplx beta(0.0, 0.0);
    for (int l = 0; l < L; ++l)
        beta += g[l] * g[l] * std::polar(1.0, 2.0 * kPi / M * l);
    beta *= ph;

    cplx gamma(0.0, 0.0), delta(0.0, 0.0), eps(0.0, 0.0);
    for (int l = M / 2; l < L; ++l) { // empty when L <= M/2
        const double gg = g[l] * g[l - M / 2];
        gamma += gg;
        delta += gg * std::polar(1.0, 2.0 * kPi / M * l);
        eps += gg * std::polar(1.0, 2.0 * 2.0 * kPi / M * l);
    }
    delta *= cplx(0.0, -1.0) * ph;
    eps *= std::polar(1.0, -2.0 * kPi / M * (L - 1));

    const double residue =
        std::max(std::max(std::abs(beta.imag()), std::abs(gamma.imag())),
                 std::max(std::abs(delta.imag()), std::abs(eps.imag())));
    if (residue > 1e-10)
        throw std::runtime_error("closed_form_weights: imaginary residue");

    InterferenceTable t;
    t.beta = beta.real();
    t.gamma = gamma.real();
    t.delta = delta.real();
    t.epsilon = eps.real();
    t.M = M;
    t.L_g = L;
    return t;
}

cplx pseudo_pilot(const FrameGrid& frame, const InterferenceTable& table,
                  int p, int q, bool extended_time,
                  const PrototypeFilter* f) {
    const int M = frame.subcarriers();
    const int N = frame.symbols();
    if (M != table.M)
        throw std::invalid_argument("pseudo_pilot: table/frame M mismatch");
    const double wf = table.wrap_factor();

    cplx c = frame.amplitude(p, q);
    for (int dm = -2; dm <= 2; ++dm) {
        for (int dq = -1; dq <= 1; ++dq) {
            if (dm == 0 && dq == 0) continue;
            const int n = q + dq;
            if (n < 0 || n >= N) continue; // nothing transmitted there
            const int raw = p + dm;
            const int m = ((raw % M) + M) % M;
            const CellRole role = frame.role(m, n);
            if (role != CellRole::Pilot && role != CellRole::GuardNull)
                throw std::domain_error(
                    "pseudo_pilot: neighborhood contains unknown data");
            double w = table.weight(p, dm, dq);
            if (raw != m) w *= wf;
            c += cplx(0.0, 1.0) * frame.amplitude(m, n) * w;
        }
    }

    if (extended_time) {
        if (!f)
            throw std::invalid_argument(
                "pseudo_pilot: extended model needs the prototype filter");
        for (int dq : {-2, 2}) {
            const int n = q + dq;
            if (n < 0 || n >= N) continue;
            for (int dm = -2; dm <= 2; ++dm) {
                const int m = (((p + dm) % M) + M) % M;
                const CellRole role = frame.role(m, n);
                if (role != CellRole::Pilot && role != CellRole::GuardNull)
                    continue; // unknown cell, cannot be approximated
                const cplx a = frame.amplitude(m, n);
                if (a == cplx(0.0, 0.0)) continue;
                c += a * inner_product_bruteforce(*f, m, n, p, q);
            }
        }
    }
    return c;
}

} // namespace fbmc
