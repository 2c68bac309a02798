#ifndef FBMC_INTERFERENCE_HPP
#define FBMC_INTERFERENCE_HPP

#include "fbmc/frame.hpp"
#include "fbmc/prototype.hpp"
#include "fbmc/types.hpp"

#include <array>

namespace fbmc {

/// Closed-form intrinsic-interference weights of the prototype pulse.
///
/// The neighborhood pattern gives the weight <g> with which the symbol at
/// (m+dm, n+dq) leaks into the AFB output at (m, n):
///
///   dq:        -1              0            +1
///   dm=-2   (-1)^m eps         0        -(-1)^m eps
///   dm=-1   (-1)^m delta     -beta       (-1)^m delta
///   dm= 0  -(-1)^m gamma       .         (-1)^m gamma
///   dm=+1   (-1)^m delta     +beta       (-1)^m delta
///   dm=+2   (-1)^m eps         0        -(-1)^m eps
///
/// independent of n. Rows of neighborhood() follow this layout top to
/// bottom (dm = -2..+2), columns dq = -1, 0, +1.
struct InterferenceTable {
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    int M = 0;
    int L_g = 0;

    /// Signed pattern with the (-1)^m parity applied; center entry is 0.
    std::array<std::array<double, 3>, 5> neighborhood(int m) const;

    /// Pattern weight for offset (dm, dq) seen by receiver subcarrier m.
    /// |dm| <= 2, |dq| <= 1 required.
    double weight(int m, int dm, int dq) const;

    /// Phase factor relating atoms at subcarrier indices m and m+M,
    /// equal to (-1)^{L_g-1+M/2} for even M. Applies when a neighborhood
    /// wraps across the subcarrier band edge.
    double wrap_factor() const;
};

/// Direct summation of sum_l g_{m,n}(l) g*_{p,q}(l); the oracle for the
/// closed forms. Indices must be nonnegative grid positions.
cplx inner_product_bruteforce(const PrototypeFilter& f, int m, int n, int p,
                              int q);

/// Evaluates the four closed-form sums. Imaginary residue above 1e-10
/// raises; otherwise it is discarded.
InterferenceTable closed_form_weights(const PrototypeFilter& f);

/// Pseudo-pilot c_{p,q} = a_{p,q} + j sum_{5x3 window} a_{m,n} <g>.
/// All window cells must be pilot or guard-null; otherwise throws
/// std::domain_error (interference not approximable). With extended_time,
/// contributions from time offsets +-2 are added via brute-force inner
/// products (known cells only; requires the filter).
cplx pseudo_pilot(const FrameGrid& frame, const InterferenceTable& table,
                  int p, int q, bool extended_time = false,
                  const PrototypeFilter* f = nullptr);

} // namespace fbmc

#endif
