#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "tempres/montecarlo.hpp"

namespace tempres {

inline constexpr int kResponseDegree = 4;
inline constexpr int kResponseCount = 2 * kRecordedModes;

/// Index of (channel, n) in the flattened response vector: s0..s3, a0..a3.
constexpr std::size_t response_index(Channel c, int n) {
    return static_cast<std::size_t>((c == Channel::symmetric ? 0 : kRecordedModes) + n);
}

/// Mean normalized count of one projection as a polynomial in tau.
struct ResponseCurve {
    std::array<double, kResponseDegree + 1> coeffs{};  // ascending powers
    double residual_rms = 0.0;

    double operator()(double tau) const;
};

/// Measured input-output relation of the projector for one coherence setting.
struct CalibrationModel {
    double gamma = 0.0;
    double mean_total_detections = 1.0;
    std::vector<double> tau_grid;
    std::array<ResponseCurve, kResponseCount> curves{};

    const ResponseCurve& curve(Channel c, int n) const { return curves[response_index(c, n)]; }
    std::array<double, kResponseCount> means(double tau) const;
};

using NormalizedCounts = std::array<double, kResponseCount>;

NormalizedCounts normalized_counts(const DetectionRecord& rec, double mean_total_detections);

/// Fits degree-4 polynomials to the mean normalized counts of every projection.
/// Only records whose gamma matches are used. Throws CalibrationError with fewer
/// than five distinct separations or a rank-deficient design.
CalibrationModel calibrate(std::span<const DetectionRecord> records, CoherenceParam gamma,
                           double mean_total_detections);

/// Lower-level form: fit directly from mean responses at each separation.
CalibrationModel calibrate_means(std::span<const double> taus, std::span<const NormalizedCounts> means,
                                 CoherenceParam gamma, double mean_total_detections);

struct Estimate {
    double tau_hat = 0.0;
    bool low_information = false;  // the run registered no counts at all
};

/// Constrained GLS: minimises sum_k w_k (c_k - m_k(tau))^2 over [0, tau_max], with
/// Poisson weights w_k = N / max(m_k, 1/N) taken from an unweighted pilot fit and
/// refreshed once at the first weighted estimate. Each minimisation is a dense scan
/// followed by Brent refinement inside the best cell.
Estimate estimate_gls(const NormalizedCounts& counts, const CalibrationModel& cal,
                      const EstimatorSettings& settings = {});
Estimate estimate_gls(const DetectionRecord& rec, const CalibrationModel& cal, const EstimatorSettings& settings = {});

struct EstimateStats {
    double tau_true = 0.0;
    double gamma = 0.0;
    int n_runs = 0;
    double mean = 0.0;
    std::optional<double> variance;  // absent for a single estimate
    double bias = 0.0;
    std::optional<double> variance_per_detection;
};

/// Sample mean, unbiased variance, bias and variance scaled by detections per run.
EstimateStats aggregate(std::span<const double> estimates, double tau_true, double gamma,
                        double detections_per_run);

struct RunEstimate {
    double tau_true = 0.0;
    double gamma = 0.0;
    int tau_index = 0;
    int gamma_index = 0;
    int run_index = 0;
    double tau_hat = 0.0;
    bool low_information = false;
};

struct Analysis {
    std::vector<DetectionRecord> records;
    std::vector<CalibrationModel> calibrations;  // one per config gamma
    std::vector<RunEstimate> estimates;
    std::vector<EstimateStats> stats;            // ordered by tau index, then gamma index
};

/// One calibration per configured gamma. Uses fresh calibration runs unless
/// reuse_calibration_runs is set, in which case `measured` is used.
std::vector<CalibrationModel> calibrate_config(const ExperimentConfig& config,
                                               std::span<const DetectionRecord> measured);

std::vector<RunEstimate> estimate_records(const ExperimentConfig& config, std::span<const DetectionRecord> records,
                                          std::span<const CalibrationModel> calibrations);

std::vector<EstimateStats> summarize(const ExperimentConfig& config, std::span<const RunEstimate> estimates);

/// Simulate (unless records are supplied), calibrate, estimate and aggregate.
Analysis analyze(const ExperimentConfig& config, std::optional<std::vector<DetectionRecord>> records = std::nullopt);

} // namespace tempres
