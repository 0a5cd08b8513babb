#include "tempres/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "tempres/errors.hpp"

namespace tempres {

std::string_view channel_label(Channel c) noexcept { return c == Channel::symmetric ? "s" : "a"; }

Channel parse_channel(std::string_view label) {
    if (label == "s" || label == "symmetric" || label == "in-phase") return Channel::symmetric;
    if (label == "a" || label == "antisymmetric" || label == "anti-phase") return Channel::antisymmetric;
    throw ParameterError("unknown channel label '" + std::string(label) + "'");
}

CoherenceParam::CoherenceParam(double gamma) : gamma_(gamma) {
    if (!(gamma >= 0.0 && gamma <= 0.5)) {
        throw ParameterError("coherence parameter gamma must lie in [0, 1/2], got " + std::to_string(gamma));
    }
}

CoherentModes coherent_modes(const PulseSpec& spec, double tau, const GridPtr& grid, double centroid) {
    const auto plus = shifted_pulse(spec, tau, PulseSign::plus, grid, centroid);
    const auto minus = shifted_pulse(spec, tau, PulseSign::minus, grid, centroid);
    std::vector<std::complex<double>> s(grid->size());
    std::vector<std::complex<double>> a(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        s[i] = (plus.values[i] + minus.values[i]) / std::numbers::sqrt2;
        a[i] = (plus.values[i] - minus.values[i]) / std::numbers::sqrt2;
    }
    return {{grid, std::move(s)}, {grid, std::move(a)}};
}

CoherentModes coherent_modes(const PulseSpec& spec, TimeOffset tau) {
    return coherent_modes(spec, tau.value(), TimeGrid::standard(spec, tau.value()));
}

double ChannelDistribution::captured() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

double poisson_mode_weight(const PulseSpec& spec, double tau, int n) {
    if (n < 0) throw ModeIndexError("negative mode index");
    const double x = tau * tau / (16.0 * spec.sigma_t() * spec.sigma_t());
    if (n == 0) return std::exp(-x);
    if (x == 0.0) return 0.0;
    const double dn = static_cast<double>(n);
    return std::exp(dn * std::log(x) - x - std::lgamma(dn + 1.0));
}

double antisymmetric_norm(const PulseSpec& spec, double tau) {
    return 0.5 * -std::expm1(-tau * tau / (8.0 * spec.sigma_t() * spec.sigma_t()));
}

namespace {

// Sum of p_n over n >= first with the given parity, until terms stop mattering.
double parity_tail(const PulseSpec& spec, double tau, int first) {
    const double x = tau * tau / (16.0 * spec.sigma_t() * spec.sigma_t());
    double sum = 0.0;
    for (int n = first;; n += 2) {
        const double term = poisson_mode_weight(spec, tau, n);
        sum += term;
        if (static_cast<double>(n) > x && term <= 1e-20 * std::max(sum, 1e-300)) break;
        if (n > first + 4000) break;
    }
    return sum;
}

} // namespace

ChannelPair hg_projection_probs(const PulseSpec& spec, double tau) {
    const int cutoff = spec.mode_cutoff();
    ChannelPair out{{Channel::symmetric, std::vector<double>(cutoff, 0.0), 0.0},
                    {Channel::antisymmetric, std::vector<double>(cutoff, 0.0), 0.0}};
    for (int n = 0; n < cutoff; ++n) {
        const double p = poisson_mode_weight(spec, tau, n);
        (n % 2 == 0 ? out.symmetric : out.antisymmetric).probs[static_cast<std::size_t>(n)] = p;
    }
    const int next_even = cutoff % 2 == 0 ? cutoff : cutoff + 1;
    const int next_odd = cutoff % 2 == 1 ? cutoff : cutoff + 1;
    out.symmetric.tail_mass = parity_tail(spec, tau, next_even);
    out.antisymmetric.tail_mass = parity_tail(spec, tau, next_odd);
    return out;
}

ChannelPair hg_projection_probs(const PulseSpec& spec, TimeOffset tau) {
    return hg_projection_probs(spec, tau.value());
}

ChannelPair hg_projection_probs_quadrature(const PulseSpec& spec, double tau, const GridPtr& grid,
                                           double centroid) {
    const auto modes = coherent_modes(spec, tau, grid, centroid);
    const auto cutoff = static_cast<std::size_t>(spec.mode_cutoff());
    std::vector<std::complex<double>> cs(cutoff);
    std::vector<std::complex<double>> ca(cutoff);
    const auto& w = grid->weights();
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const auto hg = hg_amplitudes(spec, spec.mode_cutoff(), (*grid)[i]);
        for (std::size_t n = 0; n < cutoff; ++n) {
            cs[n] += w[i] * hg[n] * modes.symmetric.values[i];
            ca[n] += w[i] * hg[n] * modes.antisymmetric.values[i];
        }
    }
    ChannelPair out{{Channel::symmetric, std::vector<double>(cutoff), 0.0},
                    {Channel::antisymmetric, std::vector<double>(cutoff), 0.0}};
    for (std::size_t n = 0; n < cutoff; ++n) {
        out.symmetric.probs[n] = std::norm(cs[n]);
        out.antisymmetric.probs[n] = std::norm(ca[n]);
    }
    out.symmetric.tail_mass = std::max(0.0, norm_squared(modes.symmetric) - out.symmetric.captured());
    out.antisymmetric.tail_mass = std::max(0.0, norm_squared(modes.antisymmetric) - out.antisymmetric.captured());
    return out;
}

ChannelPair mixed_projection_probs(const ChannelPair& ideal, CoherenceParam gamma) {
    const double g = gamma.value();
    const auto& s = ideal.symmetric;
    const auto& a = ideal.antisymmetric;
    if (s.probs.size() != a.probs.size()) throw ModelError("channel distributions differ in length");
    ChannelPair out{{Channel::symmetric, std::vector<double>(s.probs.size()), 0.0},
                    {Channel::antisymmetric, std::vector<double>(s.probs.size()), 0.0}};
    for (std::size_t n = 0; n < s.probs.size(); ++n) {
        out.symmetric.probs[n] = (1.0 - g) * s.probs[n] + g * a.probs[n];
        out.antisymmetric.probs[n] = g * s.probs[n] + (1.0 - g) * a.probs[n];
    }
    out.symmetric.tail_mass = (1.0 - g) * s.tail_mass + g * a.tail_mass;
    out.antisymmetric.tail_mass = g * s.tail_mass + (1.0 - g) * a.tail_mass;
    return out;
}

IntensityPair intensity_profiles(const PulseSpec& spec, double tau, const GridPtr& grid) {
    const auto modes = coherent_modes(spec, tau, grid);
    IntensityPair out{{Channel::symmetric, grid, std::vector<double>(grid->size())},
                      {Channel::antisymmetric, grid, std::vector<double>(grid->size())}};
    for (std::size_t i = 0; i < grid->size(); ++i) {
        out.symmetric.density[i] = std::norm(modes.symmetric.values[i]);
        out.antisymmetric.density[i] = std::norm(modes.antisymmetric.values[i]);
    }
    return out;
}

IntensityPair intensity_profiles(const PulseSpec& spec, TimeOffset tau) {
    return intensity_profiles(spec, tau.value(), TimeGrid::standard(spec, tau.value()));
}

IntensityPair mixed_intensity_profiles(const IntensityPair& pure, CoherenceParam gamma) {
    require_same_grid(pure.symmetric.grid, pure.antisymmetric.grid);
    const double g = gamma.value();
    IntensityPair out = pure;
    for (std::size_t i = 0; i < pure.symmetric.density.size(); ++i) {
        const double s = pure.symmetric.density[i];
        const double a = pure.antisymmetric.density[i];
        out.symmetric.density[i] = (1.0 - g) * s + g * a;
        out.antisymmetric.density[i] = g * s + (1.0 - g) * a;
    }
    return out;
}

std::vector<double> incoherent_intensity(const PulseSpec& spec, double tau, const GridPtr& grid) {
    const auto plus = shifted_pulse(spec, tau, PulseSign::plus, grid);
    const auto minus = shifted_pulse(spec, tau, PulseSign::minus, grid);
    std::vector<double> out(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        out[i] = std::norm(plus.values[i]) + std::norm(minus.values[i]);
    }
    return out;
}

DeviceModel::DeviceModel(double crosstalk, double efficiency, double dark_rate)
    : crosstalk_(crosstalk), efficiency_(efficiency), dark_rate_(dark_rate) {
    if (!(crosstalk >= 0.0 && crosstalk < 1.0)) {
        throw ParameterError("crosstalk must lie in [0, 1), got " + std::to_string(crosstalk));
    }
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
        throw ParameterError("efficiency must lie in (0, 1], got " + std::to_string(efficiency));
    }
    if (!(dark_rate >= 0.0) || !std::isfinite(dark_rate)) {
        throw ParameterError("dark_rate must be finite and non-negative, got " + std::to_string(dark_rate));
    }
}

std::vector<double> apply_device(const ChannelDistribution& ideal, const DeviceModel& dev,
                                 double mean_total_detections) {
    const auto& p = ideal.probs;
    const std::size_t count = p.size();
    const double eps = dev.crosstalk();
    const double dark = dev.dark_rate() > 0.0 ? dev.dark_rate() / mean_total_detections : 0.0;
    std::vector<double> rate(count, 0.0);
    for (std::size_t n = 0; n < count; ++n) {
        double r = (1.0 - eps) * p[n];
        if (n > 0) r += 0.5 * eps * p[n - 1];
        if (n + 1 < count) r += 0.5 * eps * p[n + 1];
        if (n == 0) r += 0.5 * eps * p[0];  // reflected at the lower boundary
        rate[n] = dev.efficiency() * r + dark;
    }
    return rate;
}

} // namespace tempres
