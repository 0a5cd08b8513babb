#include "doctest.h"

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "tempres/channels.hpp"
#include "tempres/errors.hpp"

using namespace tempres;

TEST_CASE("coherent superpositions") {
    const PulseSpec spec;
    const auto grid = TimeGrid::standard(spec, 2.0);
    const auto zero = coherent_modes(spec, 0.0, grid);
    CHECK(norm_squared(zero.antisymmetric) == 0.0);
    CHECK(norm_squared(zero.symmetric) == doctest::Approx(1.0).epsilon(1e-12));
    for (double tau : {0.1, 0.5, 1.0, 2.0}) {
        const auto m = coherent_modes(spec, tau, grid);
        const double ref = oracle::integrate([&](double t) { return std::pow(oracle::psi_a(t, tau), 2); });
        CHECK(norm_squared(m.antisymmetric) == doctest::Approx(ref).epsilon(1e-10));
        CHECK(antisymmetric_norm(spec, tau) == doctest::Approx(ref).epsilon(1e-10));
        // parity on a grid symmetric about 0
        const std::size_t n = grid->size();
        for (std::size_t i = 0; i < n / 2; i += 101) {
            CHECK(m.symmetric.values[i].real() == doctest::Approx(m.symmetric.values[n - 1 - i].real()));
            CHECK(m.antisymmetric.values[i].real() == doctest::Approx(-m.antisymmetric.values[n - 1 - i].real()));
        }
    }
}

TEST_CASE("closed-form mode weights against overlap integrals") {
    const PulseSpec spec;
    const auto zero = hg_projection_probs(spec, 0.0);
    CHECK(zero.symmetric.probs[0] == doctest::Approx(1.0));
    for (int n = 1; n < spec.mode_cutoff(); ++n) {
        CHECK(zero.symmetric.probs[n] == 0.0);
        CHECK(zero.antisymmetric.probs[n] == 0.0);
    }
    const auto one = hg_projection_probs(spec, 1.0);
    CHECK(one.antisymmetric.probs[1] == doctest::Approx(std::exp(-1.0 / 16.0) / 16.0).epsilon(1e-12));
    CHECK(one.antisymmetric.probs[1] == doctest::Approx(0.058706).epsilon(1e-5));
    const double ov = oracle::integrate([](double t) { return oracle::hg(1, t) * oracle::psi_a(t, 1.0); });
    CHECK(one.antisymmetric.probs[1] == doctest::Approx(ov * ov).epsilon(1e-10));

    for (double tau : {0.05, 0.4, 1.3, 2.0}) {
        const auto p = hg_projection_probs(spec, tau);
        double total = p.symmetric.tail_mass + p.antisymmetric.tail_mass;
        for (int n = 0; n < spec.mode_cutoff(); ++n) {
            const bool even = n % 2 == 0;
            const auto& ch = even ? p.symmetric : p.antisymmetric;
            const auto& other = even ? p.antisymmetric : p.symmetric;
            CHECK(other.probs[n] == 0.0);
            const double ip = oracle::integrate([&](double t) {
                return oracle::hg(n, t) * (even ? oracle::psi_s(t, tau) : oracle::psi_a(t, tau));
            });
            CHECK(std::abs(ch.probs[n] - ip * ip) < 1e-12);
            total += ch.probs[n];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("quadrature projections agree with closed form") {
    const PulseSpec spec;
    const auto grid = TimeGrid::standard(spec, 2.0);
    for (double tau : {0.0, 0.3, 1.0, 2.0}) {
        const auto q = hg_projection_probs_quadrature(spec, tau, grid);
        const auto c = hg_projection_probs(spec, tau);
        for (int n = 0; n < spec.mode_cutoff(); ++n) {
            CHECK(std::abs(q.symmetric.probs[n] - c.symmetric.probs[n]) < 1e-10);
            CHECK(std::abs(q.antisymmetric.probs[n] - c.antisymmetric.probs[n]) < 1e-10);
        }
    }
}

TEST_CASE("channel mixing") {
    const PulseSpec spec;
    const auto ideal = hg_projection_probs(spec, 0.7);
    const auto same = mixed_projection_probs(ideal, CoherenceParam(0.0));
    CHECK(same.symmetric.probs == ideal.symmetric.probs);
    CHECK(same.antisymmetric.probs == ideal.antisymmetric.probs);
    const auto half = mixed_projection_probs(ideal, CoherenceParam(0.5));
    for (int n = 0; n < spec.mode_cutoff(); ++n) {
        const double pn = poisson_mode_weight(spec, 0.7, n);
        CHECK(half.symmetric.probs[n] == doctest::Approx(pn / 2));
        CHECK(half.antisymmetric.probs[n] == doctest::Approx(pn / 2));
    }
    const auto q = mixed_projection_probs(ideal, CoherenceParam(0.3));
    for (int n = 0; n < spec.mode_cutoff(); ++n) {
        CHECK(q.symmetric.probs[n] + q.antisymmetric.probs[n] == doctest::Approx(poisson_mode_weight(spec, 0.7, n)));
    }
    CHECK_THROWS_AS(CoherenceParam(0.6), ParameterError);
    CHECK_THROWS_AS(CoherenceParam(-0.1), ParameterError);
}

TEST_CASE("intensity profiles") {
    const PulseSpec spec;
    const auto grid = TimeGrid::standard(spec, 2.0);
    const auto zero = intensity_profiles(spec, 0.0, grid);
    for (double v : zero.antisymmetric.density) CHECK(v == 0.0);
    for (double tau : {0.1, 0.5, 1.0, 2.0}) {
        const auto p = intensity_profiles(spec, tau, grid);
        double total = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) {
            total += grid->weights()[i] * (p.symmetric.density[i] + p.antisymmetric.density[i]);
        }
        CHECK(std::abs(total - 1.0) < 1e-9);
        CHECK(p.antisymmetric.density[grid->size() / 2] == doctest::Approx(0.0));
    }
}

TEST_CASE("device map") {
    const PulseSpec spec;
    const auto ideal = hg_projection_probs(spec, 0.8);
    CHECK(apply_device(ideal.symmetric, DeviceModel::ideal()) == ideal.symmetric.probs);

    ChannelDistribution delta{Channel::symmetric, std::vector<double>(8, 0.0), 0.0};
    delta.probs[0] = 1.0;
    const auto r = apply_device(delta, DeviceModel(0.02, 0.9));
    CHECK(r[1] == doctest::Approx(0.01 * 0.9));
    CHECK(r[0] == doctest::Approx(0.99 * 0.9));  // reflected leakage stays in n = 0

    const DeviceModel noisy(0.05, 0.8, 3.0);
    const double N = 1e3;
    const auto rates = apply_device(ideal.antisymmetric, noisy, N);
    const double sum = std::accumulate(rates.begin(), rates.end(), 0.0);
    CHECK(sum <= 0.8 + rates.size() * 3.0 / N + 1e-15);
    CHECK_THROWS_AS(DeviceModel(1.0), ParameterError);
    CHECK_THROWS_AS(DeviceModel(0.0, 1.5), ParameterError);
}

TEST_CASE("channel labels") {
    CHECK(channel_label(Channel::symmetric) == "s");
    CHECK(parse_channel("anti-phase") == Channel::antisymmetric);
    CHECK_THROWS(parse_channel("x"));
}
