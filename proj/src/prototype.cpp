#include "fbmc/prototype.hpp"
#include "fbmc/types.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fbmc {

namespace {

// Frequency-domain samples of the half-Nyquist design used throughout:
// P[k], k = 1..K-1 (P[0] = 1).
const double kFreqSamplesK3[] = {1.0, 0.91143783, 0.41143783};
const double kFreqSamplesK4[] = {1.0, 0.97195983, 0.70710678118654752440,
                                 0.23514695};

} // namespace

PrototypeFilter design_prototype(int M, int K) {
    if (M < 8 || M % 2 != 0)
        throw std::invalid_argument("design_prototype: M must be even and >= 8");
    const double* P = nullptr;
    if (K == 3)
        P = kFreqSamplesK3;
    else if (K == 4)
        P = kFreqSamplesK4;
    else
        throw std::invalid_argument("design_prototype: K must be 3 or 4");

    const int L = K * M;
    PrototypeFilter f;
    f.M = M;
    f.K = K;
    f.g.resize(L);
    const double center = (L - 1) / 2.0;
    for (int l = 0; l < L; ++l) {
        double v = P[0];
        for (int k = 1; k < K; ++k)
            v += 2.0 * P[k] * std::cos(2.0 * kPi * k * (l - center) / L);
        f.g[l] = v;
    }
    double energy = 0.0;
    for (double v : f.g) energy += v * v;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& v : f.g) v *= scale;
    return f;
}

void export_coefficients_csv(const PrototypeFilter& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp)
        throw std::runtime_error("cannot open " + path + " for writing");
    for (double v : f.g)
        std::fprintf(fp, "%.17g\n", v);
    std::fclose(fp);
}

} // namespace fbmc
