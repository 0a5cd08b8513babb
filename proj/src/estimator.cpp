#include "tempres/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "tempres/errors.hpp"

namespace tempres {

double ResponseCurve::operator()(double tau) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * tau + *it;
    return acc;
}

std::array<double, kResponseCount> CalibrationModel::means(double tau) const {
    std::array<double, kResponseCount> out{};
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = curves[k](tau);
    return out;
}

NormalizedCounts normalized_counts(const DetectionRecord& rec, double mean_total_detections) {
    NormalizedCounts c{};
    for (int n = 0; n < kRecordedModes; ++n) {
        const auto i = static_cast<std::size_t>(n);
        c[response_index(Channel::symmetric, n)] = static_cast<double>(rec.counts_s[i]) / mean_total_detections;
        c[response_index(Channel::antisymmetric, n)] = static_cast<double>(rec.counts_a[i]) / mean_total_detections;
    }
    return c;
}

CalibrationModel calibrate_means(std::span<const double> taus, std::span<const NormalizedCounts> means,
                                 CoherenceParam gamma, double mean_total_detections) {
    if (taus.size() != means.size()) throw CalibrationError("separations and mean responses differ in length");
    std::vector<double> distinct(taus.begin(), taus.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < kResponseDegree + 1) {
        throw CalibrationError("calibration needs at least " + std::to_string(kResponseDegree + 1) +
                               " distinct separations, got " + std::to_string(distinct.size()));
    }

    const auto rows = static_cast<Eigen::Index>(taus.size());
    Eigen::MatrixXd design(rows, kResponseDegree + 1);
    for (Eigen::Index i = 0; i < rows; ++i) {
        double power = 1.0;
        for (int j = 0; j <= kResponseDegree; ++j) {
            design(i, j) = power;
            power *= taus[static_cast<std::size_t>(i)];
        }
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < kResponseDegree + 1) throw CalibrationError("calibration design matrix is singular");

    CalibrationModel model;
    model.gamma = gamma.value();
    model.mean_total_detections = mean_total_detections;
    model.tau_grid = distinct;
    for (std::size_t k = 0; k < kResponseCount; ++k) {
        Eigen::VectorXd y(rows);
        for (Eigen::Index i = 0; i < rows; ++i) y(i) = means[static_cast<std::size_t>(i)][k];
        const Eigen::VectorXd beta = qr.solve(y);
        auto& curve = model.curves[k];
        for (int j = 0; j <= kResponseDegree; ++j) curve.coeffs[static_cast<std::size_t>(j)] = beta(j);
        curve.residual_rms = std::sqrt((design * beta - y).squaredNorm() / static_cast<double>(rows));
    }
    return model;
}

CalibrationModel calibrate(std::span<const DetectionRecord> records, CoherenceParam gamma,
                           double mean_total_detections) {
    std::map<double, std::pair<NormalizedCounts, int>> sums;
    for (const auto& rec : records) {
        if (std::abs(rec.gamma - gamma.value()) > 1e-12) continue;
        auto& [acc, count] = sums[rec.tau_true];
        const auto c = normalized_counts(rec, mean_total_detections);
        for (std::size_t k = 0; k < c.size(); ++k) acc[k] += c[k];
        ++count;
    }
    std::vector<double> taus;
    std::vector<NormalizedCounts> means;
    for (const auto& [tau, entry] : sums) {
        NormalizedCounts m = entry.first;
        for (auto& v : m) v /= entry.second;
        taus.push_back(tau);
        means.push_back(m);
    }
    return calibrate_means(taus, means, gamma, mean_total_detections);
}

namespace {

struct Objective {
    const NormalizedCounts& counts;
    const CalibrationModel& cal;
    std::array<double, kResponseCount> weights;

    double operator()(double tau) const {
        const auto m = cal.means(tau);
        double acc = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) {
            const double r = counts[k] - m[k];
            acc += weights[k] * r * r;
        }
        return acc;
    }
};

double minimise(const Objective& f, const EstimatorSettings& settings) {
    const int points = settings.grid_points;
    const double h = settings.tau_max / static_cast<double>(points - 1);
    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double v = f(h * i);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const double lo = h * std::max(best - 1, 0);
    const double hi = std::min(h * (best + 1), settings.tau_max);
    const auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, std::numeric_limits<double>::digits / 2);
    return fx <= best_value ? x : h * best;
}

std::array<double, kResponseCount> poisson_weights(const CalibrationModel& cal, double tau) {
    const double n = cal.mean_total_detections;
    const auto m = cal.means(tau);
    std::array<double, kResponseCount> w{};
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = n / std::max(m[k], 1.0 / n);
    return w;
}

} // namespace

Estimate estimate_gls(const NormalizedCounts& counts, const CalibrationModel& cal, const EstimatorSettings& settings) {
    if (std::all_of(counts.begin(), counts.end(), [](double c) { return c == 0.0; })) return {0.0, true};
    Objective f{counts, cal, {}};
    f.weights.fill(1.0);
    const double pilot = minimise(f, settings);
    f.weights = poisson_weights(cal, pilot);
    const double first = minimise(f, settings);
    f.weights = poisson_weights(cal, first);
    return {minimise(f, settings), false};
}

Estimate estimate_gls(const DetectionRecord& rec, const CalibrationModel& cal, const EstimatorSettings& settings) {
    return estimate_gls(normalized_counts(rec, cal.mean_total_detections), cal, settings);
}

EstimateStats aggregate(std::span<const double> estimates, double tau_true, double gamma,
                        double detections_per_run) {
    if (estimates.empty()) throw ParameterError("cannot aggregate an empty group of estimates");
    EstimateStats s;
    s.tau_true = tau_true;
    s.gamma = gamma;
    s.n_runs = static_cast<int>(estimates.size());
    s.mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / static_cast<double>(estimates.size());
    s.bias = s.mean - tau_true;
    if (estimates.size() > 1) {
        double ss = 0.0;
        for (double e : estimates) ss += (e - s.mean) * (e - s.mean);
        s.variance = ss / static_cast<double>(estimates.size() - 1);
        s.variance_per_detection = *s.variance * detections_per_run;
    }
    return s;
}

std::vector<CalibrationModel> calibrate_config(const ExperimentConfig& config,
                                               std::span<const DetectionRecord> measured) {
    std::vector<DetectionRecord> fresh;
    std::span<const DetectionRecord> source = measured;
    if (!config.reuse_calibration_runs) {
        fresh = run_calibration(config);
        source = fresh;
    }
    std::vector<CalibrationModel> out;
    out.reserve(config.gammas.size());
    for (const auto& g : config.gammas) out.push_back(calibrate(source, g, config.mean_total_detections));
    return out;
}

std::vector<RunEstimate> estimate_records(const ExperimentConfig& config, std::span<const DetectionRecord> records,
                                          std::span<const CalibrationModel> calibrations) {
    std::vector<RunEstimate> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        const auto gi = static_cast<std::size_t>(rec.gamma_index);
        if (gi >= calibrations.size()) throw CalibrationError("no calibration for gamma index " + std::to_string(gi));
        const auto e = estimate_gls(rec, calibrations[gi], config.estimator);
        out.push_back({rec.tau_true, rec.gamma, rec.tau_index, rec.gamma_index, rec.run_index, e.tau_hat,
                       e.low_information});
    }
    return out;
}

std::vector<EstimateStats> summarize(const ExperimentConfig& config, std::span<const RunEstimate> estimates) {
    const auto n_gamma = config.gammas.size();
    std::vector<std::vector<double>> groups(config.tau_grid.size() * n_gamma);
    for (const auto& e : estimates) {
        groups.at(static_cast<std::size_t>(e.tau_index) * n_gamma + static_cast<std::size_t>(e.gamma_index))
            .push_back(e.tau_hat);
    }
    std::vector<EstimateStats> out;
    for (std::size_t ti = 0; ti < config.tau_grid.size(); ++ti) {
        for (std::size_t gi = 0; gi < n_gamma; ++gi) {
            const auto& g = groups[ti * n_gamma + gi];
            if (g.empty()) continue;
            out.push_back(aggregate(g, config.tau_grid[ti].value(), config.gammas[gi].value(),
                                    config.mean_total_detections));
        }
    }
    return out;
}

Analysis analyze(const ExperimentConfig& config, std::optional<std::vector<DetectionRecord>> records) {
    config.validate();
    Analysis a;
    a.records = records ? std::move(*records) : run_experiment(config);
    a.calibrations = calibrate_config(config, a.records);
    a.estimates = estimate_records(config, a.records, a.calibrations);
    a.stats = summarize(config, a.estimates);
    return a;
}

} // namespace tempres
