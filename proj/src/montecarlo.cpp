#include "tempres/montecarlo.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "tempres/errors.hpp"
#include "tempres/philox.hpp"

namespace tempres {

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig c;
    for (double t : {0.0, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0}) c.tau_grid.emplace_back(t);
    for (double g : {0.0, 0.125, 0.25, 0.375, 0.5}) c.gammas.emplace_back(g);
    return c;
}

void ExperimentConfig::validate() const {
    if (tau_grid.empty()) throw ParameterError("tau_grid must not be empty");
    if (gammas.empty()) throw ParameterError("gammas must not be empty");
    if (pulse.mode_cutoff() < kRecordedModes + 1) {
        throw ParameterError("mode_cutoff must be at least " + std::to_string(kRecordedModes + 1));
    }
    if (repetitions < 1) throw ParameterError("repetitions must be at least 1");
    if (calibration_repetitions < 1) throw ParameterError("calibration_repetitions must be at least 1");
    if (!(mean_total_detections > 0.0)) throw ParameterError("mean_total_detections must be positive");
    if (drift) {
        if (!(drift->step_std >= 0.0)) throw ParameterError("drift std must be non-negative");
        if (drift->recenter_period < 1) throw ParameterError("drift recenter_period must be at least 1");
        if (!(drift->bound > 0.0)) throw ParameterError("drift bound must be positive");
    }
    if (!(estimator.tau_max > 0.0)) throw ParameterError("estimator tau_max must be positive");
    if (estimator.grid_points < 3) throw ParameterError("estimator grid_points must be at least 3");
}

namespace {

Philox4x32 stream(const ExperimentConfig& config, std::uint32_t lane, int run_or_block, int tau_index,
                  int gamma_index) {
    return Philox4x32(config.master_seed,
                      {0u, lane, static_cast<std::uint32_t>(run_or_block),
                       (static_cast<std::uint32_t>(tau_index) << 16) | static_cast<std::uint32_t>(gamma_index)});
}

std::uint32_t count_lane(StreamKind kind, Channel c, int n) {
    return (static_cast<std::uint32_t>(kind) << 24) | (c == Channel::symmetric ? 0u : 1u) << 16 |
           static_cast<std::uint32_t>(n);
}

std::uint32_t drift_lane(StreamKind kind) {
    return (static_cast<std::uint32_t>(StreamKind::drift) << 24) | static_cast<std::uint32_t>(kind);
}

bool drift_enabled(const ExperimentConfig& config) { return config.drift && config.drift->step_std > 0.0; }

} // namespace

ExpectedRates expected_rates(const ExperimentConfig& config, double tau, CoherenceParam gamma, double centroid) {
    const auto& spec = config.pulse;
    const ChannelPair ideal = centroid == 0.0
                                  ? hg_projection_probs(spec, tau)
                                  : hg_projection_probs_quadrature(
                                        spec, tau, TimeGrid::standard(spec, std::abs(tau) + std::abs(centroid)),
                                        centroid);
    const auto mixed = mixed_projection_probs(ideal, gamma);
    const auto rs = apply_device(mixed.symmetric, config.device, config.mean_total_detections);
    const auto ra = apply_device(mixed.antisymmetric, config.device, config.mean_total_detections);
    ExpectedRates out;
    for (int n = 0; n < kRecordedModes && n < spec.mode_cutoff(); ++n) {
        out.s[static_cast<std::size_t>(n)] = rs[static_cast<std::size_t>(n)];
        out.a[static_cast<std::size_t>(n)] = ra[static_cast<std::size_t>(n)];
    }
    return out;
}

double apply_drift(const ExperimentConfig& config, int tau_index, int gamma_index, int run_index, StreamKind kind) {
    if (!drift_enabled(config)) return 0.0;
    const auto& d = *config.drift;
    const int block = run_index / d.recenter_period;
    const int steps = run_index % d.recenter_period;
    auto engine = stream(config, drift_lane(kind), block, tau_index, gamma_index);
    std::normal_distribution<double> increment(0.0, d.step_std);
    double offset = 0.0;
    for (int k = 0; k < steps; ++k) {
        offset = std::clamp(offset + increment(engine), -d.bound, d.bound);
    }
    return offset;
}

DetectionRecord sample_run(const ExperimentConfig& config, int tau_index, int gamma_index, int run_index,
                           StreamKind kind) {
    const double tau = config.tau_grid.at(static_cast<std::size_t>(tau_index)).value();
    const CoherenceParam gamma = config.gammas.at(static_cast<std::size_t>(gamma_index));
    const double centroid = apply_drift(config, tau_index, gamma_index, run_index, kind);
    const auto rates = expected_rates(config, tau, gamma, centroid);

    DetectionRecord rec;
    rec.tau_true = tau;
    rec.gamma = gamma.value();
    rec.tau_index = tau_index;
    rec.gamma_index = gamma_index;
    rec.run_index = run_index;
    auto draw = [&](Channel c, int n, double rate) -> std::int64_t {
        const double mean = config.mean_total_detections * rate;
        if (!(mean > 0.0)) return 0;
        auto engine = stream(config, count_lane(kind, c, n), run_index, tau_index, gamma_index);
        return std::poisson_distribution<std::int64_t>(mean)(engine);
    };
    for (int n = 0; n < kRecordedModes; ++n) {
        const auto i = static_cast<std::size_t>(n);
        rec.counts_s[i] = draw(Channel::symmetric, n, rates.s[i]);
        rec.counts_a[i] = draw(Channel::antisymmetric, n, rates.a[i]);
    }
    return rec;
}

int worker_count() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("TEMPRES_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) n = std::min(n, cap);
        } catch (const std::exception&) {
            // ignore malformed values
        }
    }
    return n;
}

namespace {

std::vector<DetectionRecord> run_grid(const ExperimentConfig& config, int repetitions, StreamKind kind, int threads) {
    config.validate();
    const auto n_tau = config.tau_grid.size();
    const auto n_gamma = config.gammas.size();
    const auto reps = static_cast<std::size_t>(repetitions);
    std::vector<DetectionRecord> out(n_tau * n_gamma * reps);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto run = i % reps;
            const auto gi = (i / reps) % n_gamma;
            const auto ti = i / (reps * n_gamma);
            out[i] = sample_run(config, static_cast<int>(ti), static_cast<int>(gi), static_cast<int>(run), kind);
        }
    };

    const std::size_t workers = std::min<std::size_t>(threads > 0 ? threads : worker_count(), out.size());
    if (workers <= 1) {
        work(0, out.size());
        return out;
    }
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (out.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(out.size(), begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
    }
    return out;
}

} // namespace

std::vector<DetectionRecord> run_experiment(const ExperimentConfig& config, int threads) {
    return run_grid(config, config.repetitions, StreamKind::measurement, threads);
}

std::vector<DetectionRecord> run_calibration(const ExperimentConfig& config, int threads) {
    return run_grid(config, config.calibration_repetitions, StreamKind::calibration, threads);
}

} // namespace tempres
