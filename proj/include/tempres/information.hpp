#pragma once

#include <functional>
#include <vector>

#include "tempres/channels.hpp"
#include "tempres/pulse_model.hpp"

namespace tempres {

/// Default differentiation step, in units of sigma_t.
inline constexpr double kDefaultFdStep = 1e-4;

/// Relative change under step halving above which a value is flagged as unconverged.
inline constexpr double kConvergenceWarning = 1e-4;

/// A finite-difference Fisher information together with its step-halving check.
struct FiEstimate {
    double value = 0.0;
    double halving_change = 0.0;  // |F(h/2) - F(h)| / max(|F(h)|, 1e-12)
    bool converged = true;
};

/// Outcome probabilities as a function of the (signed) separation.
using ProbabilityFn = std::function<std::vector<double>(double)>;
using WaveformFn = std::function<WaveformSamples(double)>;
using ProfileFn = std::function<IntensityProfile(double)>;

/// F = sum_n (d p_n / d tau)^2 / p_n with central differences.
/// Outcomes with p < 1e-14 and |dp| < 1e-12 contribute nothing.
/// Throws ModelError on negative probabilities.
FiEstimate classical_fi_discrete(const ProbabilityFn& prob_fn, TimeOffset tau, double step = kDefaultFdStep);

struct ChannelFi {
    double symmetric = 0.0;
    double antisymmetric = 0.0;
    double total() const { return symmetric + antisymmetric; }
};

/// Closed-form per-channel FI of the fully coherent in-phase / anti-phase channels.
ChannelFi coherent_channel_fi_analytic(const PulseSpec& spec, TimeOffset tau);

/// Q = 1 / (4 sigma_t^2).
double qfi_constant(const PulseSpec& spec);

/// 1 / Q = 4 sigma_t^2, the variance bound per detection event.
double quantum_crb_per_event(const PulseSpec& spec);

/// Norm-sensitive quantum FI
///   4 <d psi|d psi> + (1/N) [<psi|d psi> - <d psi|psi>]^2,  N = <psi|psi>.
/// The bracket is purely imaginary, so its square is <= 0 and vanishes for real waveforms.
/// The correction is taken as 0 when N <= 1e-14.
FiEstimate modified_qfi(const WaveformFn& state_fn, TimeOffset tau, double step = kDefaultFdStep);

/// Integral of (dP/dtau)^2 / P over the profile's grid, with 0^2/0 = 0.
FiEstimate intensity_fi(const ProfileFn& profile_fn, TimeOffset tau, double step = kDefaultFdStep);

struct PerDetectionFi {
    double value = 0.0;
    bool undefined = false;  // detected_fraction == 0; value is +inf
};

/// fi / detected_fraction.
PerDetectionFi per_detection_fi(double fi, double detected_fraction);

/// Smallest mode count (>= spec cutoff) whose neglected tail at |tau| <= tau_max is below 1e-17.
int information_cutoff(const PulseSpec& spec, double tau_max);

/// Per-channel FI of the gamma-mixed HG projections via finite differences.
/// Uses information_cutoff modes so the truncation does not bias the result.
ChannelFi mixed_channel_fi(const PulseSpec& spec, TimeOffset tau, CoherenceParam gamma,
                           double step = kDefaultFdStep);

struct FisherReport {
    double tau = 0.0;
    double gamma = 0.0;
    double fi_s = 0.0;
    double fi_a = 0.0;
    double fi_total = 0.0;
    double qfi = 0.0;
    double fi_intensity_s = 0.0;
    double fi_intensity_a = 0.0;
    double fi_intensity_incoherent = 0.0;
    double crb_per_event = 0.0;
    bool converged = true;  // every finite-difference value passed the halving check
};

struct FisherOptions {
    double step = kDefaultFdStep;
    double grid_tau_max = -1.0;  // grid half-width margin; negative means use tau itself
};

/// Every information quantity at (tau, gamma). Intensity FIs use the same channel mixing
/// as the mode projections; the incoherent intensity FI does not depend on gamma.
FisherReport fisher_report(const PulseSpec& spec, TimeOffset tau, CoherenceParam gamma,
                           const FisherOptions& options = {});

} // namespace tempres
