#include "tempres/information.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "tempres/errors.hpp"

namespace tempres {

namespace {

constexpr double kProbFloor = 1e-14;
constexpr double kDerivFloor = 1e-12;

// Fourth-order central difference of a vector-valued function of tau.
template <class T, class Fn>
std::vector<T> stencil_derivative(const Fn& fn, double tau, double h) {
    const auto m2 = fn(tau - 2.0 * h);
    const auto m1 = fn(tau - h);
    const auto p1 = fn(tau + h);
    const auto p2 = fn(tau + 2.0 * h);
    if (m2.size() != m1.size() || m1.size() != p1.size() || p1.size() != p2.size()) {
        throw ModelError("outcome space changes size across the differentiation stencil");
    }
    std::vector<T> d(m1.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
    }
    return d;
}

void check_step(double step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ParameterError("differentiation step must be positive, got " + std::to_string(step));
    }
}

// sum_i w_i (dp_i)^2 / p_i with the 0^2/0 convention; w == nullptr means unit weights.
double fisher_sum(const std::vector<double>& p, const std::vector<double>& dp, const std::vector<double>* w) {
    if (p.size() != dp.size()) throw ModelError("probability and derivative sizes differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0) {
            throw ModelError("negative probability " + std::to_string(p[i]) + " at outcome " + std::to_string(i));
        }
        if (p[i] < kProbFloor && std::abs(dp[i]) < kDerivFloor) continue;
        if (p[i] == 0.0) {
            // Nonzero slope at an exact zero would make the information unbounded.
            acc = std::numeric_limits<double>::infinity();
            continue;
        }
        const double term = dp[i] * dp[i] / p[i];
        acc += w ? (*w)[i] * term : term;
    }
    return acc;
}

// Near tau = 0 the per-outcome ratio (dp)^2/p is 0/0 wherever p ~ tau^2. There the
// information is the one-sided limit tau -> 0+, evaluated as 4 sum_i w_i (d sqrt(p_i))^2
// with a forward fourth-order stencil that stays on tau >= 0.
template <class Fn>
double boundary_fisher_sum(const Fn& fn, double tau, double h, const std::vector<double>* w) {
    std::vector<std::vector<double>> roots;
    for (int k = 0; k < 5; ++k) {
        auto p = fn(tau + k * h);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] < 0.0) {
                throw ModelError("negative probability " + std::to_string(p[i]) + " at outcome " +
                                 std::to_string(i));
            }
            p[i] = std::sqrt(p[i]);
        }
        if (!roots.empty() && p.size() != roots.front().size()) {
            throw ModelError("outcome space changes size across the differentiation stencil");
        }
        roots.push_back(std::move(p));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < roots[0].size(); ++i) {
        const double d = (-25.0 * roots[0][i] + 48.0 * roots[1][i] - 36.0 * roots[2][i] + 16.0 * roots[3][i] -
                          3.0 * roots[4][i]) /
                         (12.0 * h);
        acc += 4.0 * d * d * (w ? (*w)[i] : 1.0);
    }
    return acc;
}

bool near_boundary(double tau, double h) { return tau < 2.0 * h; }

template <class Eval>
FiEstimate with_halving(const Eval& eval, double step) {
    check_step(step);
    const double coarse = eval(step);
    const double fine = eval(0.5 * step);
    FiEstimate out;
    out.value = coarse;
    out.halving_change = std::abs(fine - coarse) / std::max(std::abs(coarse), 1e-12);
    out.converged = out.halving_change <= kConvergenceWarning;
    return out;
}

} // namespace

FiEstimate classical_fi_discrete(const ProbabilityFn& prob_fn, TimeOffset tau, double step) {
    const double t = tau.value();
    const auto p = prob_fn(t);
    return with_halving(
        [&](double h) {
            if (near_boundary(t, h)) return boundary_fisher_sum(prob_fn, t, h, nullptr);
            return fisher_sum(p, stencil_derivative<double>(prob_fn, t, h), nullptr);
        },
        step);
}

ChannelFi coherent_channel_fi_analytic(const PulseSpec& spec, TimeOffset tau) {
    const double s2 = spec.sigma_t() * spec.sigma_t();
    const double t2 = tau.value() * tau.value();
    const double base = 1.0 / (8.0 * s2);
    const double swing = (1.0 / (8.0 * s2) - t2 / (32.0 * s2 * s2)) * std::exp(-t2 / (8.0 * s2));
    return {base - swing, base + swing};
}

double qfi_constant(const PulseSpec& spec) { return 1.0 / (4.0 * spec.sigma_t() * spec.sigma_t()); }

double quantum_crb_per_event(const PulseSpec& spec) { return 4.0 * spec.sigma_t() * spec.sigma_t(); }

FiEstimate modified_qfi(const WaveformFn& state_fn, TimeOffset tau, double step) {
    const double t = tau.value();
    const auto psi = state_fn(t);
    const double norm = norm_squared(psi);
    auto values_at = [&](double x) {
        auto w = state_fn(x);
        require_same_grid(w.grid, psi.grid);
        return std::move(w.values);
    };
    return with_halving(
        [&](double h) {
            const WaveformSamples dpsi(psi.grid, stencil_derivative<std::complex<double>>(values_at, t, h));
            double q = 4.0 * quadrature_inner_product(dpsi, dpsi).real();
            if (norm > 1e-14) {
                const auto bracket = quadrature_inner_product(psi, dpsi) - quadrature_inner_product(dpsi, psi);
                q += (bracket * bracket).real() / norm;
            }
            return q;
        },
        step);
}

FiEstimate intensity_fi(const ProfileFn& profile_fn, TimeOffset tau, double step) {
    const double t = tau.value();
    const auto profile = profile_fn(t);
    const auto& weights = profile.grid->weights();
    auto density_at = [&](double x) {
        auto pr = profile_fn(x);
        require_same_grid(pr.grid, profile.grid);
        return std::move(pr.density);
    };
    return with_halving(
        [&](double h) {
            if (near_boundary(t, h)) return boundary_fisher_sum(density_at, t, h, &weights);
            return fisher_sum(profile.density, stencil_derivative<double>(density_at, t, h), &weights);
        },
        step);
}

PerDetectionFi per_detection_fi(double fi, double detected_fraction) {
    if (detected_fraction < 0.0) throw ParameterError("detected fraction must be non-negative");
    if (detected_fraction == 0.0) return {std::numeric_limits<double>::infinity(), true};
    return {fi / detected_fraction, false};
}

int information_cutoff(const PulseSpec& spec, double tau_max) {
    const double tau = std::abs(tau_max);
    int n = spec.mode_cutoff();
    for (;; ++n) {
        const auto probs = hg_projection_probs(spec.with_mode_cutoff(n), tau);
        if (probs.symmetric.tail_mass + probs.antisymmetric.tail_mass < 1e-17) return n;
        if (n > 4096) throw ModelError("separation too large for a finite mode expansion");
    }
}

ChannelFi mixed_channel_fi(const PulseSpec& spec, TimeOffset tau, CoherenceParam gamma, double step) {
    const PulseSpec wide = spec.with_mode_cutoff(information_cutoff(spec, tau.value() + 4.0 * step));
    auto channel_probs = [&](Channel c) {
        return [&, c](double t) {
            const auto mixed = mixed_projection_probs(hg_projection_probs(wide, t), gamma);
            return mixed[c].probs;
        };
    };
    return {classical_fi_discrete(channel_probs(Channel::symmetric), tau, step).value,
            classical_fi_discrete(channel_probs(Channel::antisymmetric), tau, step).value};
}

FisherReport fisher_report(const PulseSpec& spec, TimeOffset tau, CoherenceParam gamma,
                           const FisherOptions& options) {
    const double t = tau.value();
    const double step = options.step;
    check_step(step);
    const PulseSpec wide = spec.with_mode_cutoff(information_cutoff(spec, t + 4.0 * step));
    const auto grid = TimeGrid::standard(spec, std::max(options.grid_tau_max, t) + 4.0 * step);

    FisherReport r;
    r.tau = t;
    r.gamma = gamma.value();

    auto mode_probs = [&](Channel c) {
        return [&, c](double x) { return mixed_projection_probs(hg_projection_probs(wide, x), gamma)[c].probs; };
    };
    const auto fs = classical_fi_discrete(mode_probs(Channel::symmetric), tau, step);
    const auto fa = classical_fi_discrete(mode_probs(Channel::antisymmetric), tau, step);

    auto profile = [&](Channel c) {
        return [&, c](double x) {
            const auto mixed = mixed_intensity_profiles(intensity_profiles(spec, x, grid), gamma);
            return c == Channel::symmetric ? mixed.symmetric : mixed.antisymmetric;
        };
    };
    const auto is = intensity_fi(profile(Channel::symmetric), tau, step);
    const auto ia = intensity_fi(profile(Channel::antisymmetric), tau, step);
    const auto inc = intensity_fi(
        [&](double x) { return IntensityProfile{Channel::symmetric, grid, incoherent_intensity(spec, x, grid)}; },
        tau, step);

    r.fi_s = fs.value;
    r.fi_a = fa.value;
    r.fi_total = r.fi_s + r.fi_a;
    r.qfi = qfi_constant(spec);
    r.fi_intensity_s = is.value;
    r.fi_intensity_a = ia.value;
    r.fi_intensity_incoherent = inc.value;
    r.crb_per_event = r.fi_total > 0.0 ? 1.0 / r.fi_total : std::numeric_limits<double>::infinity();
    r.converged = fs.converged && fa.converged && is.converged && ia.converged && inc.converged;
    return r;
}

} // namespace tempres
