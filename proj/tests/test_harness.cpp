#include "doctest.h"

#include "fbmc/harness.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace fbmc;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.methods = {"iam-c", "pop", "cp-ofdm"};
    cfg.M = 64;
    cfg.K = 3;
    cfg.snrs_db = {5, 25};
    cfg.trials = 6;
    cfg.seed = 99;
    return cfg;
}

std::string csv_string(const SweepResult& r) {
    const std::string path = "tmp_sweep.csv";
    write_sweep_csv(r, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(path.c_str());
    return ss.str();
}

} // namespace

TEST_CASE("config parsing") {
    const std::string path = "tmp_config.txt";
    {
        std::ofstream out(path);
        out << "# experiment\n"
               "methods = iam-r, e-iam-c\n"
               "m=128\nk=4\nsnr_db=0,10,20\ntrials=7\nseed=42\n"
               "profile=veh-b\nrho=0.5\ndata_symbols=4\n"
               "normalization=sfb-input\nparallel=false\namplitude=2\n"
               "n_tx=2\nn_rx=2\nmimo_base=e-iam-c\nepsilon_negative=true\n"
               "sparse_l_h=16\nsparse_positions=0,4\n";
    }
    const ExperimentConfig cfg = parse_config_file(path);
    CHECK(cfg.methods == std::vector<std::string>{"iam-r", "e-iam-c"});
    CHECK(cfg.M == 128);
    CHECK(cfg.K == 4);
    CHECK(cfg.snrs_db == std::vector<double>{0, 10, 20});
    CHECK(cfg.trials == 7);
    CHECK(cfg.seed == 42);
    CHECK(cfg.profile == "veh-b");
    CHECK(cfg.rho == 0.5);
    CHECK(cfg.data_symbols == 4);
    CHECK(cfg.norm == PowerNorm::SfbInput);
    CHECK_FALSE(cfg.parallel);
    CHECK(cfg.amplitude == 2.0);
    CHECK(cfg.n_tx == 2);
    CHECK(cfg.mimo_base == "e-iam-c");
    CHECK(cfg.epsilon_negative);
    CHECK(cfg.sparse_L_h == 16);
    CHECK(cfg.sparse_positions == std::vector<int>{0, 4});
    std::remove(path.c_str());

    ExperimentConfig c;
    CHECK_THROWS_AS(apply_config_line(c, "unknown=1"), std::runtime_error);
    CHECK_THROWS_AS(apply_config_line(c, "trials=abc"), std::runtime_error);
    CHECK_THROWS_AS(apply_config_line(c, "no_equals"), std::runtime_error);
    CHECK_THROWS_AS(apply_config_line(c, "normalization=maybe"),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_config_file("does_not_exist.cfg"),
                    std::runtime_error);
}

TEST_CASE("sweep results are deterministic and thread-count independent") {
    ExperimentConfig cfg = small_config();
    const std::string a = csv_string(run_sweep(cfg));
    const std::string b = csv_string(run_sweep(cfg));
    CHECK(a == b);
    cfg.parallel = false; // serial reference path
    const std::string c = csv_string(run_sweep(cfg));
    CHECK(a == c);
}

TEST_CASE("NMSE improves with SNR and methods behave sanely") {
    ExperimentConfig cfg = small_config();
    cfg.trials = 12;
    const SweepResult r = run_sweep(cfg);
    REQUIRE(r.points.size() == 6);
    for (size_t i = 0; i < r.points.size(); i += 2) {
        CAPTURE(r.points[i].method);
        CHECK(r.points[i].nmse_mean > r.points[i + 1].nmse_mean);
        CHECK(r.points[i].nmse_mean > 0.0);
        CHECK(r.points[i].trials == 12);
    }
}

TEST_CASE("output normalization makes results amplitude invariant") {
    // with per-method output normalization and no random payload, the
    // pilot amplitude cancels
    ExperimentConfig cfg = small_config();
    cfg.methods = {"iam-c", "e-iam-c"};
    cfg.data_symbols = 0;
    const std::string a = csv_string(run_sweep(cfg));
    cfg.amplitude = 3.0;
    const std::string b = csv_string(run_sweep(cfg));
    CHECK(a == b);
}

TEST_CASE("papr profile reports sane powers") {
    ExperimentConfig cfg = small_config();
    cfg.methods = {"iam-r", "iam-c", "cp-ofdm"};
    const auto papr = papr_profile(cfg);
    REQUIRE(papr.size() == 3);
    for (const PaprPoint& pt : papr) {
        CHECK(pt.peak_power >= pt.mean_power);
        CHECK(pt.mean_power > 0.0);
        CHECK(pt.papr_db >= 0.0);
    }
}

TEST_CASE("invalid experiment setups are rejected") {
    ExperimentConfig cfg = small_config();
    cfg.methods = {"iam-c"};
    cfg.n_tx = 2; // SISO method with multiple antennas
    cfg.n_rx = 2;
    CHECK_THROWS(run_sweep(cfg));
    cfg = small_config();
    cfg.methods = {"not-a-method"};
    CHECK_THROWS(run_sweep(cfg));
    cfg = small_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(run_sweep(cfg), std::runtime_error);
}
