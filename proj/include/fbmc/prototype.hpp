#ifndef FBMC_PROTOTYPE_HPP
#define FBMC_PROTOTYPE_HPP

#include <string>
#include <vector>

namespace fbmc {

/// Real symmetric unit-energy prototype pulse of length K*M.
struct PrototypeFilter {
    std::vector<double> g; // coefficients, g[l] = g[K*M-1-l]
    int M = 0;             // even subcarrier count
    int K = 0;             // overlap factor

    int length() const { return static_cast<int>(g.size()); }
};

/// Frequency-sampling design. Supports K in {3,4}; M even, M >= 8.
/// The derived interference weights for M=512, K=3 are
/// (beta, gamma, delta) = (0.250, 0.553, 0.2172), |epsilon| < 1e-3.
PrototypeFilter design_prototype(int M, int K);

/// One coefficient per line, 17 significant digits.
void export_coefficients_csv(const PrototypeFilter& f, const std::string& path);

} // namespace fbmc

#endif
