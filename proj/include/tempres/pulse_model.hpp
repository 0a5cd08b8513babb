#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace tempres {

/// Gaussian pulse family and the retained Hermite-Gauss mode cutoff.
///
/// Time is measured in units of sigma_t throughout the toolkit, so most callers
/// keep the default width of 1.
class PulseSpec {
public:
    static constexpr int kDefaultModeCutoff = 8;

    explicit PulseSpec(double sigma_t = 1.0, int mode_cutoff = kDefaultModeCutoff);

    double sigma_t() const noexcept { return sigma_t_; }
    int mode_cutoff() const noexcept { return mode_cutoff_; }

    PulseSpec with_mode_cutoff(int cutoff) const { return PulseSpec(sigma_t_, cutoff); }

    friend bool operator==(const PulseSpec&, const PulseSpec&) = default;

private:
    double sigma_t_;
    int mode_cutoff_;
};

/// Magnitude of the separation between the two pulses (the estimand).
class TimeOffset {
public:
    explicit TimeOffset(double tau);
    double value() const noexcept { return tau_; }
    friend auto operator<=>(const TimeOffset&, const TimeOffset&) = default;

private:
    double tau_;
};

/// Uniform time grid with trapezoidal quadrature weights.
class TimeGrid {
public:
    static constexpr std::size_t kStandardPoints = 4096;
    static constexpr double kHalfWidthInSigma = 12.0;

    TimeGrid(double lo, double hi, std::size_t points);

    /// Grid on [-12 sigma_t - tau_max, 12 sigma_t + tau_max].
    static std::shared_ptr<const TimeGrid> standard(const PulseSpec& spec, double tau_max,
                                                    std::size_t points = kStandardPoints);

    std::size_t size() const noexcept { return points_.size(); }
    double lo() const noexcept { return points_.front(); }
    double hi() const noexcept { return points_.back(); }
    double spacing() const noexcept { return spacing_; }
    const std::vector<double>& points() const noexcept { return points_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double operator[](std::size_t i) const { return points_[i]; }

    /// Same grid with every interval split in two (2n - 1 points).
    std::shared_ptr<const TimeGrid> refined() const;

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.points_ == b.points_; }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
    double spacing_;
};

using GridPtr = std::shared_ptr<const TimeGrid>;

/// Complex amplitudes sampled on a shared grid.
struct WaveformSamples {
    GridPtr grid;
    std::vector<std::complex<double>> values;

    WaveformSamples() = default;
    WaveformSamples(GridPtr g, std::vector<std::complex<double>> v);

    std::size_t size() const noexcept { return values.size(); }
};

enum class PulseSign { plus, minus };

/// (2 pi sigma_t^2)^{-1/4} exp(-t^2 / (4 sigma_t^2)); unit L2 norm.
double gaussian_amplitude(const PulseSpec& spec, double t);

/// Normalized Hermite-Gauss mode HG_n(t), 0 <= n < mode_cutoff.
double hg_amplitude(const PulseSpec& spec, int n, double t);

/// HG_0(t) .. HG_{count-1}(t) from a single pass of the normalized recurrence.
/// Not limited by the spec cutoff; used where more modes than the cutoff are needed.
std::vector<double> hg_amplitudes(const PulseSpec& spec, int count, double t);

WaveformSamples sample_hg(const PulseSpec& spec, int n, const GridPtr& grid);

/// psi(t - centroid +/- tau/2) / sqrt(2); the pair carries unit total intensity.
/// tau may be negative here, which simply swaps the two components.
WaveformSamples shifted_pulse(const PulseSpec& spec, double tau, PulseSign sign, const GridPtr& grid,
                              double centroid = 0.0);
WaveformSamples shifted_pulse(const PulseSpec& spec, TimeOffset tau, PulseSign sign);

/// Trapezoidal approximation of the integral of conj(f) g.
std::complex<double> quadrature_inner_product(const WaveformSamples& f, const WaveformSamples& g);

double norm_squared(const WaveformSamples& f);

/// Ensures two sample sets live on the same grid; throws GridError otherwise.
void require_same_grid(const GridPtr& a, const GridPtr& b);

} // namespace tempres
