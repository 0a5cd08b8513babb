#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "tempres/channels.hpp"
#include "tempres/pulse_model.hpp"

namespace tempres {

/// Projections n = 0..3 are recorded per channel.
inline constexpr int kRecordedModes = 4;

/// Slow centroid drift: Gaussian-increment random walk reset every `recenter_period` runs.
struct DriftSpec {
    double step_std = 0.0;  // per-run increment std, units of sigma_t
    int recenter_period = 10;
    double bound = 1.0;     // |offset| is clamped to this value

    friend bool operator==(const DriftSpec&, const DriftSpec&) = default;
};

/// Settings of the constrained GLS estimator.
struct EstimatorSettings {
    double tau_max = 2.0;
    int grid_points = 1001;

    friend bool operator==(const EstimatorSettings&, const EstimatorSettings&) = default;
};

struct ExperimentConfig {
    PulseSpec pulse{};
    std::vector<TimeOffset> tau_grid;
    std::vector<CoherenceParam> gammas;
    int repetitions = 100;
    /// Fresh runs per (tau, gamma) used only for calibration.
    int calibration_repetitions = 1000;
    /// Calibrate from the measurement runs themselves instead of fresh runs.
    bool reuse_calibration_runs = false;
    double mean_total_detections = 1e4;
    DeviceModel device{};
    std::optional<DriftSpec> drift;
    std::uint64_t master_seed = kDefaultSeed;
    EstimatorSettings estimator{};

    static constexpr std::uint64_t kDefaultSeed = 20220315;

    /// 7 separations on [0, 1], the five coherence settings, 100 runs, 1e4 detections.
    static ExperimentConfig defaults();

    /// Throws ParameterError on an invalid combination.
    void validate() const;
};

/// Which family of random streams a draw belongs to.
enum class StreamKind : std::uint32_t { measurement = 1, calibration = 2, drift = 3 };

struct DetectionRecord {
    double tau_true = 0.0;
    double gamma = 0.0;
    int tau_index = 0;
    int gamma_index = 0;
    int run_index = 0;
    std::array<std::int64_t, kRecordedModes> counts_s{};
    std::array<std::int64_t, kRecordedModes> counts_a{};

    const std::array<std::int64_t, kRecordedModes>& counts(Channel c) const {
        return c == Channel::symmetric ? counts_s : counts_a;
    }
    friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

/// Expected normalized rates (per detection) for projections 0..3 of both channels,
/// i.e. apply_device(mixed_projection_probs(...)) truncated to the recorded modes.
struct ExpectedRates {
    std::array<double, kRecordedModes> s{};
    std::array<double, kRecordedModes> a{};
};

ExpectedRates expected_rates(const ExperimentConfig& config, double tau, CoherenceParam gamma,
                             double centroid = 0.0);

/// Centroid offset for a run; 0 when drift is off and at every recentering run.
double apply_drift(const ExperimentConfig& config, int tau_index, int gamma_index, int run_index,
                   StreamKind kind = StreamKind::measurement);

/// One simulated run: independent Poisson counts per projection with mean
/// mean_total_detections * expected rate. The stream is keyed by
/// (master_seed, kind, tau_index, gamma_index, run_index, channel, n).
DetectionRecord sample_run(const ExperimentConfig& config, int tau_index, int gamma_index, int run_index,
                           StreamKind kind = StreamKind::measurement);

/// Every (tau, gamma, run) record, ordered by tau index, then gamma index, then run.
/// Runs may execute on several threads; the output equals the sequential result.
/// threads <= 0 picks worker_count().
std::vector<DetectionRecord> run_experiment(const ExperimentConfig& config, int threads = 0);

/// Calibration runs (calibration_repetitions per grid point) on their own streams.
std::vector<DetectionRecord> run_calibration(const ExperimentConfig& config, int threads = 0);

/// Hardware concurrency, capped by the TEMPRES_THREADS environment variable.
int worker_count();

} // namespace tempres
