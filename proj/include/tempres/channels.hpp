#pragma once

#include <string_view>
#include <vector>

#include "tempres/pulse_model.hpp"

namespace tempres {

enum class Channel { symmetric, antisymmetric };

/// "s" or "a", the labels used in CSV output.
std::string_view channel_label(Channel c) noexcept;

/// Accepts s/symmetric/in-phase and a/antisymmetric/anti-phase.
Channel parse_channel(std::string_view label);

/// Convex weight between the two channel-swapped coherent detection schemes.
/// 0 is fully coherent, 1/2 fully incoherent.
class CoherenceParam {
public:
    explicit CoherenceParam(double gamma = 0.0);
    double value() const noexcept { return gamma_; }
    friend auto operator<=>(const CoherenceParam&, const CoherenceParam&) = default;

private:
    double gamma_;
};

struct CoherentModes {
    WaveformSamples symmetric;
    WaveformSamples antisymmetric;
};

/// psi_s = (psi_+ + psi_-)/sqrt(2), psi_a = (psi_+ - psi_-)/sqrt(2).
/// A nonzero centroid moves both pulses jointly.
CoherentModes coherent_modes(const PulseSpec& spec, double tau, const GridPtr& grid, double centroid = 0.0);
CoherentModes coherent_modes(const PulseSpec& spec, TimeOffset tau);

struct ChannelDistribution {
    Channel channel = Channel::symmetric;
    std::vector<double> probs;  // n = 0 .. mode_cutoff - 1
    double tail_mass = 0.0;     // probability carried by modes >= mode_cutoff

    double captured() const;
};

struct ChannelPair {
    ChannelDistribution symmetric;
    ChannelDistribution antisymmetric;

    const ChannelDistribution& operator[](Channel c) const {
        return c == Channel::symmetric ? symmetric : antisymmetric;
    }
};

/// p_n(tau) = (tau/sigma_t)^{2n} / (n! 16^n) exp(-tau^2 / (16 sigma_t^2)), any n >= 0.
double poisson_mode_weight(const PulseSpec& spec, double tau, int n);

/// ||psi_a||^2 = (1 - exp(-tau^2 / (8 sigma_t^2))) / 2, the share of intensity in the anti-phase channel.
double antisymmetric_norm(const PulseSpec& spec, double tau);

/// Ideal parity-pure HG detection probabilities from the closed form.
ChannelPair hg_projection_probs(const PulseSpec& spec, double tau);
ChannelPair hg_projection_probs(const PulseSpec& spec, TimeOffset tau);

/// Same quantities as |<HG_n|psi_alpha>|^2 by quadrature; handles a centroid offset.
/// tail_mass is the channel norm not captured by the retained modes.
ChannelPair hg_projection_probs_quadrature(const PulseSpec& spec, double tau, const GridPtr& grid,
                                           double centroid = 0.0);

/// Channel mixing: P_s = (1-g) p_s + g p_a, P_a = g p_s + (1-g) p_a.
ChannelPair mixed_projection_probs(const ChannelPair& ideal, CoherenceParam gamma);

struct IntensityProfile {
    Channel channel = Channel::symmetric;
    GridPtr grid;
    std::vector<double> density;
};

struct IntensityPair {
    IntensityProfile symmetric;
    IntensityProfile antisymmetric;
};

IntensityPair intensity_profiles(const PulseSpec& spec, double tau, const GridPtr& grid);
IntensityPair intensity_profiles(const PulseSpec& spec, TimeOffset tau);

/// The same convex channel mixing applied to intensity profiles.
IntensityPair mixed_intensity_profiles(const IntensityPair& pure, CoherenceParam gamma);

/// |psi_+|^2 + |psi_-|^2, the intensity of the incoherent mixture (unit integral).
std::vector<double> incoherent_intensity(const PulseSpec& spec, double tau, const GridPtr& grid);

/// Imperfect projector: nearest-neighbour crosstalk, detection efficiency, dark counts.
class DeviceModel {
public:
    static constexpr double kDefaultCrosstalk = 0.01;

    explicit DeviceModel(double crosstalk = kDefaultCrosstalk, double efficiency = 1.0, double dark_rate = 0.0);
    static DeviceModel ideal() { return DeviceModel(0.0, 1.0, 0.0); }

    double crosstalk() const noexcept { return crosstalk_; }
    double efficiency() const noexcept { return efficiency_; }
    /// Expected dark counts per projection per run.
    double dark_rate() const noexcept { return dark_rate_; }

    friend bool operator==(const DeviceModel&, const DeviceModel&) = default;

private:
    double crosstalk_;
    double efficiency_;
    double dark_rate_;
};

/// rate(n) = eta [(1-eps) P(n) + eps/2 (P(n-1) + P(n+1))] + dark_rate / mean_total_detections.
/// Leakage below n = 0 is reflected into n = 0; leakage past the cutoff is lost.
std::vector<double> apply_device(const ChannelDistribution& ideal, const DeviceModel& dev,
                                 double mean_total_detections = 1.0);

} // namespace tempres
