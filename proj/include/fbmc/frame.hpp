#ifndef FBMC_FRAME_HPP
#define FBMC_FRAME_HPP

#include "fbmc/types.hpp"

#include <vector>

namespace fbmc {

enum class CellRole : unsigned char {
    GuardNull,      // exactly zero
    Pilot,          // known training symbol
    Data,           // payload, unknown to the estimator
    StructuredData, // payload constrained by a cancellation pattern
};

/// M x N grid of real OQAM values. Imaginary pilots are stored as their
/// real value plus a quarter-period phase flag, so the transmitted symbol
/// is value * (j if flagged) * e^{j phi_{m,n}}.
class FrameGrid {
public:
    FrameGrid() = default;
    FrameGrid(int M, int N);

    int subcarriers() const { return M_; }
    int symbols() const { return N_; }

    double value(int m, int n) const { return cell(m, n).value; }
    bool quarter_phase(int m, int n) const { return cell(m, n).quarter; }
    CellRole role(int m, int n) const { return cell(m, n).role; }

    /// Complex amplitude before the phi_{m,n} phase: value * (j if flagged).
    cplx amplitude(int m, int n) const {
        const Cell& c = cell(m, n);
        return c.quarter ? cplx(0.0, c.value) : cplx(c.value, 0.0);
    }

    void set(int m, int n, double value, bool quarter, CellRole role);
    /// Convenience for purely real or purely imaginary cells.
    void set(int m, int n, cplx value, CellRole role);

    void scale(double s);
    /// Sum of |amplitude|^2 over all cells.
    double energy() const;

    /// phi_{m,n} = (m+n)*pi/2 - m*n*pi
    static double phase(int m, int n);

private:
    struct Cell {
        double value = 0.0;
        bool quarter = false;
        CellRole role = CellRole::GuardNull;
    };
    const Cell& cell(int m, int n) const;
    Cell& cell(int m, int n);

    int M_ = 0, N_ = 0;
    std::vector<Cell> cells_;
};

/// Maps each QAM symbol to two consecutive OQAM instants (Re then Im).
FrameGrid oqam_stagger(const std::vector<cplx>& qam, int M, int qam_symbols);
std::vector<cplx> oqam_destagger(const FrameGrid& grid);

} // namespace fbmc

#endif
