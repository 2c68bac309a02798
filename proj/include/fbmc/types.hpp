#ifndef FBMC_TYPES_HPP
#define FBMC_TYPES_HPP

#include <complex>
#include <vector>

namespace fbmc {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

} // namespace fbmc

#endif
