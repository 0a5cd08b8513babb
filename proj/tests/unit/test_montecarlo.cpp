#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "tempres/errors.hpp"
#include "tempres/estimator.hpp"
#include "tempres/montecarlo.hpp"
#include "tempres/philox.hpp"

using namespace tempres;

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::generate(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    Philox4x32 g(0, C{0, 0, 0, 0});
    CHECK(g() == 0x6627e8d5u);
}

TEST_CASE("default experiment shape") {
    const auto cfg = ExperimentConfig::defaults();
    CHECK(cfg.tau_grid.size() == 7);
    CHECK(cfg.gammas.size() == 5);
    const auto recs = run_experiment(cfg);
    CHECK(recs.size() == 3500);
    CHECK(recs.front().tau_index == 0);
    CHECK(recs.back().tau_index == 6);
    CHECK(recs.back().gamma_index == 4);
    CHECK(recs.back().run_index == 99);
}

TEST_CASE("determinism across seeds and thread counts") {
    auto cfg = ExperimentConfig::defaults();
    cfg.repetitions = 20;
    const auto a = run_experiment(cfg, 1);
    const auto b = run_experiment(cfg, 4);
    CHECK(a == b);
    cfg.master_seed += 1;
    CHECK(run_experiment(cfg, 2) != a);
}

TEST_CASE("degenerate cases") {
    auto cfg = ExperimentConfig::defaults();
    cfg.device = DeviceModel::ideal();
    const auto r = sample_run(cfg, 0, 0, 3);  // tau = 0, gamma = 0
    for (int n = 0; n < kRecordedModes; ++n) {
        CHECK(r.counts_a[n] == 0);
        if (n > 0) CHECK(r.counts_s[n] == 0);
    }
    CHECK(r.counts_s[0] > 0);

    cfg.mean_total_detections = 1e-300;
    const auto z = sample_run(cfg, 3, 2, 0);
    for (int n = 0; n < kRecordedModes; ++n) CHECK(z.counts_s[n] + z.counts_a[n] == 0);

    cfg.mean_total_detections = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("empirical mean matches the closed-form rate") {
    auto cfg = ExperimentConfig::defaults();
    cfg.tau_grid = {TimeOffset(1.0)};
    cfg.gammas = {CoherenceParam(0.0)};
    const double N = cfg.mean_total_detections;
    const double eps = cfg.device.crosstalk();
    // Symmetric channel at gamma = 0 only has even modes; n = 0 keeps 1 - eps and gets eps/2 reflected back.
    const double rate = (1.0 - eps / 2.0) * std::exp(-1.0 / 16.0);
    const int runs = 1000;
    double sum = 0.0;
    for (int run = 0; run < runs; ++run) sum += sample_run(cfg, 0, 0, run).counts_s[0] / N;
    const double mean = sum / runs;
    const double se = std::sqrt(rate / N / runs);
    CHECK(std::abs(mean - rate) < 3.0 * se);
}

TEST_CASE("drift") {
    auto cfg = ExperimentConfig::defaults();
    CHECK(apply_drift(cfg, 1, 1, 7) == 0.0);
    cfg.drift = DriftSpec{0.05, 10, 1.0};
    CHECK(apply_drift(cfg, 1, 1, 0) == 0.0);
    CHECK(apply_drift(cfg, 1, 1, 20) == 0.0);
    CHECK(apply_drift(cfg, 1, 1, 7) != 0.0);
    cfg.drift = DriftSpec{10.0, 50, 0.2};
    for (int run = 0; run < 50; ++run) CHECK(std::abs(apply_drift(cfg, 2, 0, run)) <= 0.2);
}

TEST_CASE("drift inflates the estimator variance at small separation") {
    auto cfg = ExperimentConfig::defaults();
    cfg.gammas = {CoherenceParam(0.0)};
    cfg.device = DeviceModel::ideal();
    auto variance_at = [&](const ExperimentConfig& c) {
        const auto a = analyze(c);
        return *a.stats[1].variance;  // tau = 0.1
    };
    const double still = variance_at(cfg);
    cfg.drift = DriftSpec{0.05, 10, 1.0};
    const double drifting = variance_at(cfg);
    MESSAGE("variance at tau=0.1: no drift " << still << ", drift " << drifting);
    CHECK(drifting > still);
}

TEST_CASE("thread cap from the environment") {
    ::setenv("TEMPRES_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    ::unsetenv("TEMPRES_THREADS");
    CHECK(worker_count() >= 1);
}
