#include "fbmc/frame.hpp"

#include <cmath>
#include <stdexcept>

namespace fbmc {

FrameGrid::FrameGrid(int M, int N) : M_(M), N_(N), cells_(size_t(M) * N) {
    if (M <= 0 || N <= 0)
        throw std::invalid_argument("FrameGrid: dimensions must be positive");
}

const FrameGrid::Cell& FrameGrid::cell(int m, int n) const {
    if (m < 0 || m >= M_ || n < 0 || n >= N_)
        throw std::invalid_argument("FrameGrid: index out of range");
    return cells_[size_t(n) * M_ + m];
}

FrameGrid::Cell& FrameGrid::cell(int m, int n) {
    return const_cast<Cell&>(static_cast<const FrameGrid*>(this)->cell(m, n));
}

void FrameGrid::set(int m, int n, double value, bool quarter, CellRole role) {
    Cell& c = cell(m, n);
    c.value = (role == CellRole::GuardNull) ? 0.0 : value;
    c.quarter = quarter;
    c.role = role;
}

void FrameGrid::set(int m, int n, cplx value, CellRole role) {
    if (value.real() != 0.0 && value.imag() != 0.0)
        throw std::invalid_argument(
            "FrameGrid::set: cell must be purely real or purely imaginary");
    if (value.imag() != 0.0)
        set(m, n, value.imag(), true, role);
    else
        set(m, n, value.real(), false, role);
}

void FrameGrid::scale(double s) {
    for (Cell& c : cells_) c.value *= s;
}

double FrameGrid::energy() const {
    double e = 0.0;
    for (const Cell& c : cells_) e += c.value * c.value;
    return e;
}

double FrameGrid::phase(int m, int n) {
    return (m + n) * kPi / 2.0 - double(m) * n * kPi;
}

FrameGrid oqam_stagger(const std::vector<cplx>& qam, int M, int qam_symbols) {
    if (static_cast<int>(qam.size()) != M * qam_symbols)
        throw std::invalid_argument("oqam_stagger: size mismatch");
    FrameGrid grid(M, 2 * qam_symbols);
    for (int t = 0; t < qam_symbols; ++t)
        for (int m = 0; m < M; ++m) {
            const cplx x = qam[size_t(t) * M + m];
            grid.set(m, 2 * t, x.real(), false, CellRole::Data);
            grid.set(m, 2 * t + 1, x.imag(), false, CellRole::Data);
        }
    return grid;
}

std::vector<cplx> oqam_destagger(const FrameGrid& grid) {
    const int M = grid.subcarriers();
    const int N = grid.symbols();
    if (N % 2 != 0)
        throw std::invalid_argument("oqam_destagger: symbol count must be even");
    std::vector<cplx> qam(size_t(M) * (N / 2));
    for (int t = 0; t < N / 2; ++t)
        for (int m = 0; m < M; ++m)
            qam[size_t(t) * M + m] =
                cplx(grid.value(m, 2 * t), grid.value(m, 2 * t + 1));
    return qam;
}

} // namespace fbmc
