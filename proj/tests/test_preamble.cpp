#include "doctest.h"

#include "fbmc/interference.hpp"
#include "fbmc/preamble.hpp"
#include "fbmc/prototype.hpp"

#include <cmath>

using namespace fbmc;

namespace {

constexpr cplx kJ(0.0, 1.0);

PreambleSpec spec8(PreambleFamily fam) {
    PreambleSpec s;
    s.family = fam;
    s.M = 8;
    return s;
}

void check_cell(const FrameGrid& g, int m, int n, cplx want) {
    CAPTURE(m);
    CAPTURE(n);
    CHECK(std::abs(g.amplitude(m, n) - want) < 1e-12);
}

} // namespace

TEST_CASE("golden table: pairs-of-pilots preamble") {
    const GeneratedPreamble pre = generate(spec8(PreambleFamily::POP));
    REQUIRE(pre.symbols == 2);
    for (int m = 0; m < 8; ++m) {
        check_cell(pre.grids[0], m, 0, (m % 2 == 0) ? 1.0 : -1.0);
        check_cell(pre.grids[0], m, 1, 0.0);
    }
    CHECK(pre.pilot_times == std::vector<int>{0, 1});
}

TEST_CASE("golden table: IAM-R") {
    const GeneratedPreamble pre = generate(spec8(PreambleFamily::IAM_R));
    REQUIRE(pre.symbols == 3);
    const double mid[8] = {1, -1, -1, 1, 1, -1, -1, 1};
    for (int m = 0; m < 8; ++m) {
        check_cell(pre.grids[0], m, 0, 0.0);
        check_cell(pre.grids[0], m, 1, mid[m]);
        check_cell(pre.grids[0], m, 2, 0.0);
    }
}

TEST_CASE("golden table: IAM-C") {
    const GeneratedPreamble pre = generate(spec8(PreambleFamily::IAM_C));
    const cplx mid[8] = {1.0, -kJ, -1.0, kJ, 1.0, -kJ, -1.0, kJ};
    for (int m = 0; m < 8; ++m) {
        check_cell(pre.grids[0], m, 1, mid[m]);
        check_cell(pre.grids[0], m, 0, 0.0);
        check_cell(pre.grids[0], m, 2, 0.0);
    }
}

TEST_CASE("golden table: extended IAM-C, both variants") {
    const GeneratedPreamble pos = generate(spec8(PreambleFamily::E_IAM_C));
    // rows (left, mid, right), repeating every 4 subcarriers
    const cplx lpos[4] = {kJ, -1.0, -kJ, 1.0};
    const cplx mid[4] = {1.0, -kJ, -1.0, kJ};
    for (int m = 0; m < 8; ++m) {
        check_cell(pos.grids[0], m, 0, lpos[m % 4]);
        check_cell(pos.grids[0], m, 1, mid[m % 4]);
        check_cell(pos.grids[0], m, 2, -lpos[m % 4]);
    }
    PreambleSpec sn = spec8(PreambleFamily::E_IAM_C);
    sn.epsilon_negative = true;
    const GeneratedPreamble neg = generate(sn);
    for (int m = 0; m < 8; ++m) {
        const cplx u = (m % 2 == 0) ? cplx(1.0, 0.0) : kJ;
        check_cell(neg.grids[0], m, 0, -u);
        check_cell(neg.grids[0], m, 1, mid[m % 4]);
        check_cell(neg.grids[0], m, 2, u);
    }
}

TEST_CASE("IAM-I triplet structure and wrap constraint") {
    PreambleSpec s = spec8(PreambleFamily::IAM_I);
    s.seed = 42;
    const GeneratedPreamble pre = generate(s);
    const FrameGrid& g = pre.grids[0];
    // M=8: triplets at rows (0,1,2), (3,4,5), (6,7,0): e2 = -e0
    for (int k = 0; k < 3; ++k) {
        const cplx e = g.amplitude((3 * k) % 8, 1);
        CHECK(std::abs(e.imag()) < 1e-12);
        CHECK(std::abs(std::abs(e.real()) - 1.0) < 1e-12);
        check_cell(g, (3 * k + 1) % 8, 1, -kJ * e);
        check_cell(g, (3 * k + 2) % 8, 1, -e);
    }
    const cplx e0 = g.amplitude(0, 1);
    const cplx e2 = g.amplitude(6, 1);
    CHECK(std::abs(e2 + e0) < 1e-12);
    // guard columns
    for (int m = 0; m < 8; ++m) {
        check_cell(g, m, 0, 0.0);
        check_cell(g, m, 2, 0.0);
    }
    PreambleSpec bad = spec8(PreambleFamily::IAM_I);
    bad.M = 10; // 10 mod 3 == 1: no consistent triplet layout
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}

TEST_CASE("golden tables: interference-cancellation families") {
    {
        const GeneratedPreamble a = generate(spec8(PreambleFamily::ICM_A));
        for (int m = 0; m < 8; ++m) {
            const cplx want =
                (m % 2 == 0) ? cplx((m / 2) % 2 == 0 ? 1.0 : -1.0, 0.0)
                             : cplx(0.0, 0.0);
            check_cell(a.grids[0], m, 1, want);
            check_cell(a.grids[0], m, 0, 0.0);
            check_cell(a.grids[0], m, 2, 0.0);
        }
    }
    {
        const GeneratedPreamble b = generate(spec8(PreambleFamily::ICM_B));
        for (int m = 0; m < 8; ++m)
            check_cell(b.grids[0], m, 1, (m % 2 == 0) ? 1.0 : -1.0);
    }
    {
        const GeneratedPreamble c = generate(spec8(PreambleFamily::ICM_C));
        const FrameGrid& g = c.grids[0];
        for (int m = 0; m < 8; m += 2) {
            const double side = ((m / 2) % 2 == 0) ? 1.0 : -1.0;
            check_cell(g, m, 0, side);
            check_cell(g, m, 1, 1.0);
            check_cell(g, m, 2, side);
            CHECK(g.role(m, 1) == CellRole::Pilot);
            CHECK(g.role(m, 0) == CellRole::StructuredData);
        }
        for (int m = 1; m < 8; m += 2) {
            const double t = ((m + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
            check_cell(g, m, 0, t);
            check_cell(g, m, 1, -1.0);
            check_cell(g, m, 2, t);
        }
    }
    {
        const GeneratedPreamble d = generate(spec8(PreambleFamily::ICM_D));
        REQUIRE(d.symbols == 1);
        for (int m = 0; m < 8; ++m)
            check_cell(d.grids[0], m, 0, (m % 2 == 0) ? 1.0 : -1.0);
    }
}

TEST_CASE("golden table: replicated MIMO preamble, two antennas") {
    PreambleSpec s = spec8(PreambleFamily::MIMO_IAM);
    s.n_tx = 2;
    s.mimo_base = PreambleFamily::IAM_C;
    const GeneratedPreamble pre = generate(s);
    REQUIRE(pre.grids.size() == 2);
    REQUIRE(pre.symbols == 5);
    CHECK(pre.pilot_times == std::vector<int>{1, 3});
    const cplx mid[4] = {1.0, -kJ, -1.0, kJ};
    for (int m = 0; m < 8; ++m) {
        // antenna 1: (0, c, 0, c, 0); antenna 2: (0, c, 0, -c, 0)
        check_cell(pre.grids[0], m, 1, mid[m % 4]);
        check_cell(pre.grids[0], m, 3, mid[m % 4]);
        check_cell(pre.grids[1], m, 1, mid[m % 4]);
        check_cell(pre.grids[1], m, 3, -mid[m % 4]);
        for (int q : {0, 2, 4}) {
            check_cell(pre.grids[0], m, q, 0.0);
            check_cell(pre.grids[1], m, q, 0.0);
        }
    }
    PreambleSpec bad = s;
    bad.n_tx = 3;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}

TEST_CASE("golden table: sparse two-antenna pilots") {
    PreambleSpec s = spec8(PreambleFamily::MIMO_SPARSE);
    s.n_tx = 2;
    s.L_h = 2;
    s.start_positions = {0, 2};
    s.D = {1, 1, 1, -1};
    const GeneratedPreamble pre = generate(s);
    REQUIRE(pre.grids.size() == 2);
    const double a0[8] = {1, 0, 1, 0, 1, 0, 1, 0};
    const double a1[8] = {1, 0, -1, 0, 1, 0, -1, 0};
    for (int m = 0; m < 8; ++m) {
        check_cell(pre.grids[0], m, 1, a0[m]);
        check_cell(pre.grids[1], m, 1, a1[m]);
        check_cell(pre.grids[0], m, 0, 0.0);
        check_cell(pre.grids[0], m, 2, 0.0);
    }
}

TEST_CASE("sparse feasibility checks") {
    PreambleSpec s = spec8(PreambleFamily::MIMO_SPARSE);
    s.n_tx = 2;
    s.L_h = 2;
    s.start_positions = {0, 1}; // adjacent pilot sets: no null between them
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
    s.start_positions = {0, 2};
    s.L_h = 3; // 8 % 3 != 0
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
    s.L_h = 2;
    s.D = {1, 1, 1, 1}; // singular pilot matrix
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
    s.D = {2, 0, 0, 1}; // orthogonal but unequal column norms
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
    s.D.clear();
    CHECK_NOTHROW(generate(s));
}

TEST_CASE("MIMO POP pilots are full BPSK grids") {
    PreambleSpec s = spec8(PreambleFamily::MIMO_POP);
    s.n_tx = 2;
    s.n_rx = 2;
    s.seed = 3;
    const GeneratedPreamble pre = generate(s);
    REQUIRE(pre.symbols == 4);
    REQUIRE(pre.grids.size() == 2);
    for (const FrameGrid& g : pre.grids)
        for (int n = 0; n < 4; ++n)
            for (int m = 0; m < 8; ++m) {
                CHECK(g.role(m, n) == CellRole::Pilot);
                CHECK(std::abs(std::abs(g.value(m, n)) - 1.0) < 1e-12);
            }
    PreambleSpec bad = s;
    bad.n_rx = 1; // fewer receive than transmit antennas
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}

TEST_CASE("predicted pseudo-pilot magnitudes match the generated grids") {
    const PrototypeFilter f = design_prototype(64, 3);
    const InterferenceTable t = closed_form_weights(f);
    for (PreambleFamily fam :
         {PreambleFamily::IAM_R, PreambleFamily::IAM_C,
          PreambleFamily::E_IAM_C}) {
        PreambleSpec s;
        s.family = fam;
        s.M = 64;
        s.amplitude = 1.5;
        const GeneratedPreamble pre = generate(s);
        const std::vector<double> want = predicted_magnitudes(s, t);
        for (int p = 2; p < 62; ++p) { // interior: no band-edge wrap
            CAPTURE(p);
            const cplx c = pseudo_pilot(pre.grids[0], t, p, 1);
            CHECK(std::abs(std::abs(c) - want[p]) < 1e-6);
        }
    }
    {
        // IAM-I needs M divisible by 3 for an aligned triplet layout
        const PrototypeFilter f66 = design_prototype(66, 3);
        const InterferenceTable t66 = closed_form_weights(f66);
        PreambleSpec s;
        s.family = PreambleFamily::IAM_I;
        s.M = 66;
        s.amplitude = 1.5;
        s.seed = 9;
        const GeneratedPreamble pre = generate(s);
        const std::vector<double> want = predicted_magnitudes(s, t66);
        for (int p = 2; p < 64; ++p) {
            CAPTURE(p);
            const cplx c = pseudo_pilot(pre.grids[0], t66, p, 1);
            CHECK(std::abs(std::abs(c) - want[p]) < 1e-6);
        }
    }
    PreambleSpec icm;
    icm.family = PreambleFamily::ICM_A;
    CHECK_THROWS_AS(predicted_magnitudes(icm, t), std::invalid_argument);
}

TEST_CASE("family names round-trip") {
    for (PreambleFamily f :
         {PreambleFamily::POP, PreambleFamily::IAM_R, PreambleFamily::IAM_I,
          PreambleFamily::IAM_C, PreambleFamily::E_IAM_C,
          PreambleFamily::ICM_A, PreambleFamily::ICM_B, PreambleFamily::ICM_C,
          PreambleFamily::ICM_D, PreambleFamily::MIMO_IAM,
          PreambleFamily::MIMO_SPARSE, PreambleFamily::MIMO_POP})
        CHECK(family_from_name(family_name(f)) == f);
    CHECK_THROWS_AS(family_from_name("nope"), std::invalid_argument);
}
