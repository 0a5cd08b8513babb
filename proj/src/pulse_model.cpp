#include "tempres/pulse_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tempres/errors.hpp"

namespace tempres {

PulseSpec::PulseSpec(double sigma_t, int mode_cutoff) : sigma_t_(sigma_t), mode_cutoff_(mode_cutoff) {
    if (!(sigma_t > 0.0) || !std::isfinite(sigma_t)) {
        throw ParameterError("sigma_t must be positive and finite, got " + std::to_string(sigma_t));
    }
    if (mode_cutoff < 2) {
        throw ParameterError("mode_cutoff must be at least 2, got " + std::to_string(mode_cutoff));
    }
}

TimeOffset::TimeOffset(double tau) : tau_(tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw ParameterError("time offset must be finite and non-negative, got " + std::to_string(tau));
    }
}

TimeGrid::TimeGrid(double lo, double hi, std::size_t points) {
    if (points < 2 || !(hi > lo)) {
        throw GridError("time grid needs at least two points on a non-empty interval");
    }
    spacing_ = (hi - lo) / static_cast<double>(points - 1);
    points_.resize(points);
    weights_.assign(points, spacing_);
    for (std::size_t i = 0; i < points; ++i) {
        points_[i] = lo + spacing_ * static_cast<double>(i);
    }
    points_.back() = hi;
    weights_.front() *= 0.5;
    weights_.back() *= 0.5;
}

std::shared_ptr<const TimeGrid> TimeGrid::standard(const PulseSpec& spec, double tau_max, std::size_t points) {
    const double half = kHalfWidthInSigma * spec.sigma_t() + std::abs(tau_max);
    return std::make_shared<const TimeGrid>(-half, half, points);
}

std::shared_ptr<const TimeGrid> TimeGrid::refined() const {
    return std::make_shared<const TimeGrid>(lo(), hi(), 2 * size() - 1);
}

WaveformSamples::WaveformSamples(GridPtr g, std::vector<std::complex<double>> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid || grid->size() != values.size()) {
        throw GridError("waveform values do not match the grid length");
    }
}

namespace {

double envelope(const PulseSpec& spec, double t) {
    const double s = spec.sigma_t();
    return std::pow(2.0 * std::numbers::pi * s * s, -0.25) * std::exp(-t * t / (4.0 * s * s));
}

} // namespace

double gaussian_amplitude(const PulseSpec& spec, double t) { return envelope(spec, t); }

std::vector<double> hg_amplitudes(const PulseSpec& spec, int count, double t) {
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
    if (out.empty()) return out;
    // h_n = H_n(x) / sqrt(2^n n!) obeys
    // h_{n+1} = x sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}.
    const double x = t / (std::numbers::sqrt2 * spec.sigma_t());
    const double env = envelope(spec, t);
    double prev = 0.0;
    double cur = 1.0;
    out[0] = env;
    for (int n = 0; n + 1 < count; ++n) {
        const double dn = static_cast<double>(n);
        const double next = x * std::sqrt(2.0 / (dn + 1.0)) * cur - std::sqrt(dn / (dn + 1.0)) * prev;
        prev = cur;
        cur = next;
        out[static_cast<std::size_t>(n) + 1] = env * cur;
    }
    return out;
}

double hg_amplitude(const PulseSpec& spec, int n, double t) {
    if (n < 0 || n >= spec.mode_cutoff()) {
        throw ModeIndexError("mode index " + std::to_string(n) + " outside [0, " +
                             std::to_string(spec.mode_cutoff()) + ")");
    }
    return hg_amplitudes(spec, n + 1, t)[static_cast<std::size_t>(n)];
}

WaveformSamples sample_hg(const PulseSpec& spec, int n, const GridPtr& grid) {
    if (n < 0 || n >= spec.mode_cutoff()) {
        throw ModeIndexError("mode index " + std::to_string(n) + " outside [0, " +
                             std::to_string(spec.mode_cutoff()) + ")");
    }
    std::vector<std::complex<double>> values(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        values[i] = hg_amplitudes(spec, n + 1, (*grid)[i])[static_cast<std::size_t>(n)];
    }
    return {grid, std::move(values)};
}

WaveformSamples shifted_pulse(const PulseSpec& spec, double tau, PulseSign sign, const GridPtr& grid,
                              double centroid) {
    const double shift = sign == PulseSign::plus ? 0.5 * tau : -0.5 * tau;
    std::vector<std::complex<double>> values(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        values[i] = envelope(spec, (*grid)[i] - centroid + shift) / std::numbers::sqrt2;
    }
    return {grid, std::move(values)};
}

WaveformSamples shifted_pulse(const PulseSpec& spec, TimeOffset tau, PulseSign sign) {
    return shifted_pulse(spec, tau.value(), sign, TimeGrid::standard(spec, tau.value()));
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (!a || !b) throw GridError("waveform has no grid");
    if (a != b && !(*a == *b)) throw GridError("waveforms are sampled on different grids");
}

std::complex<double> quadrature_inner_product(const WaveformSamples& f, const WaveformSamples& g) {
    require_same_grid(f.grid, g.grid);
    const auto& w = f.grid->weights();
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i] * std::conj(f.values[i]) * g.values[i];
    }
    return acc;
}

double norm_squared(const WaveformSamples& f) {
    const auto& w = f.grid->weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::norm(f.values[i]);
    return acc;
}

} // namespace tempres
