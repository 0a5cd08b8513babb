#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "tempres/errors.hpp"
#include "tempres/pulse_model.hpp"

using namespace tempres;

TEST_CASE("gaussian amplitude closed form") {
    const PulseSpec spec;
    CHECK(gaussian_amplitude(spec, 0.0) == doctest::Approx(0.63161878).epsilon(1e-8));
    CHECK(gaussian_amplitude(spec, 40.0) == doctest::Approx(0.0));
    for (double t : {0.3, 1.7, 4.2}) CHECK(gaussian_amplitude(spec, t) == gaussian_amplitude(spec, -t));
    const double norm = oracle::integrate([&](double t) { return std::pow(gaussian_amplitude(spec, t), 2); });
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hg modes match the Hermite-polynomial oracle and are orthonormal") {
    for (double sigma : {1.0, 0.7}) {
        const PulseSpec spec(sigma);
        for (int n = 0; n < 8; ++n) {
            for (double t : {-3.1, -0.4, 0.0, 0.9, 2.5}) {
                CHECK(hg_amplitude(spec, n, t) == doctest::Approx(oracle::hg(n, t, sigma)).epsilon(1e-12));
            }
        }
    }
    const PulseSpec spec;
    CHECK(hg_amplitude(spec, 1, 0.0) == 0.0);
    for (double t : {-2.0, 0.5, 3.0}) CHECK(hg_amplitude(spec, 0, t) == doctest::Approx(gaussian_amplitude(spec, t)));
    CHECK_THROWS_AS(hg_amplitude(spec, 8, 0.0), ModeIndexError);
    CHECK_THROWS_AS(hg_amplitude(spec, -1, 0.0), ModeIndexError);

    const auto grid = std::make_shared<const TimeGrid>(-12.0, 12.0, 2001);
    for (int m = 0; m < 8; ++m) {
        const auto fm = sample_hg(spec, m, grid);
        for (int n = 0; n < 8; ++n) {
            const auto ip = quadrature_inner_product(fm, sample_hg(spec, n, grid));
            CHECK(std::abs(ip - std::complex<double>(m == n ? 1.0 : 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("shifted pulses") {
    const PulseSpec spec;
    const auto grid = TimeGrid::standard(spec, 2.0);
    const auto p0 = shifted_pulse(spec, 0.0, PulseSign::plus, grid);
    const auto m0 = shifted_pulse(spec, 0.0, PulseSign::minus, grid);
    for (std::size_t i = 0; i < grid->size(); i += 97) {
        CHECK(p0.values[i].real() == doctest::Approx(gaussian_amplitude(spec, (*grid)[i]) / std::sqrt(2.0)));
        CHECK(p0.values[i] == m0.values[i]);
    }
    for (double tau : {0.1, 1.0, 2.0}) {
        const auto p = shifted_pulse(spec, tau, PulseSign::plus, grid);
        const auto m = shifted_pulse(spec, tau, PulseSign::minus, grid);
        CHECK(norm_squared(p) + norm_squared(m) == doctest::Approx(1.0).epsilon(1e-12));
        // Overlap oracle: Gauss-Kronrod integral of the two explicit pulses.
        const double ref = oracle::integrate(
            [&](double t) { return 0.5 * oracle::gauss(t - tau / 2) * oracle::gauss(t + tau / 2); });
        CHECK(quadrature_inner_product(m, p).real() == doctest::Approx(ref).epsilon(1e-10));
    }
    const auto p = shifted_pulse(spec, 1.0, PulseSign::plus, grid);
    const auto m = shifted_pulse(spec, 1.0, PulseSign::minus, grid);
    CHECK(quadrature_inner_product(m, p).real() == doctest::Approx(0.5 * std::exp(-1.0 / 8.0)).epsilon(1e-10));
    CHECK_THROWS_AS(TimeOffset(-0.1), ParameterError);
}

TEST_CASE("quadrature inner product") {
    const PulseSpec spec;
    const auto grid = std::make_shared<const TimeGrid>(-12.0, 12.0, 2001);
    const auto psi = sample_hg(spec, 0, grid);
    CHECK(std::abs(norm_squared(psi) - 1.0) < 1e-10);
    CHECK(std::abs(quadrature_inner_product(sample_hg(spec, 1, grid), psi)) < 1e-10);

    // <HG_0 | psi(t - tau/2)> at tau = 1 on two resolutions, and against e^{-1/32}.
    auto overlap = [&](const GridPtr& g) {
        std::vector<std::complex<double>> v;
        for (double t : g->points()) v.emplace_back(gaussian_amplitude(spec, t - 0.5));
        const WaveformSamples shifted(g, std::move(v));
        return quadrature_inner_product(sample_hg(spec, 0, g), shifted).real();
    };
    const double coarse = overlap(grid);
    const double fine = overlap(grid->refined());
    CHECK(std::abs(coarse - fine) < 1e-8);
    CHECK(fine == doctest::Approx(std::exp(-1.0 / 32.0)).epsilon(1e-10));

    const auto other = std::make_shared<const TimeGrid>(-10.0, 10.0, 2001);
    CHECK_THROWS_AS(quadrature_inner_product(psi, sample_hg(spec, 0, other)), GridError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PulseSpec(0.0), ParameterError);
    CHECK_THROWS_AS(PulseSpec(1.0, 1), ParameterError);
    CHECK_THROWS_AS(TimeGrid(1.0, 0.0, 10), GridError);
}
