#include <doctest.h>

#include "fdastap/rng.hpp"
#include "fdastap/waveform.hpp"

#include <cmath>
#include <random>

using namespace fdastap;
using namespace fdastap::waveform;

TEST_CASE("reference chirp has 40 samples and unit energy") {
    const auto u = lfm_baseband(1e-6, 20e6, 40e6);
    CHECK(u.samples.size() == 40);
    CHECK(u.energy() == doctest::Approx(1.0).epsilon(1e-9));
    // eval on the grid reproduces the samples
    for (std::size_t k = 0; k < u.samples.size(); ++k)
        CHECK(std::abs(u.eval(k / 40e6) - u.samples[k]) < 1e-15);
}

TEST_CASE("normalization holds across parameter choices") {
    const double params[][3] = {{1e-6, 20e6, 40e6},  {2e-6, 5e6, 11e6},
                                {0.5e-6, 0.0, 64e6}, {3.7e-6, 8e6, 16e6},
                                {1e-6, 20e6, 123e6}};
    for (const auto& p : params) {
        const auto u = lfm_baseband(p[0], p[1], p[2]);
        CHECK(u.energy() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("zero bandwidth gives a rectangular pulse") {
    const auto u = lfm_baseband(1e-6, 0.0, 40e6);
    for (const cd& s : u.samples) CHECK(std::abs(s - u.samples[0]) < 1e-15);
    CHECK(u.energy() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("waveform construction rejects bad parameters") {
    CHECK_THROWS_AS(lfm_baseband(1e-6, 20e6, 30e6), std::invalid_argument); // fs < 2B
    CHECK_THROWS_AS(lfm_baseband(1e-7, 0.0, 40e6), std::invalid_argument);  // < 8 samples
    CHECK_THROWS_AS(lfm_baseband(-1e-6, 20e6, 40e6), std::invalid_argument);
}

TEST_CASE("ambiguity function properties") {
    const auto u = lfm_baseband(1e-6, 20e6, 40e6);
    CHECK(std::abs(ambiguity(u, 0.0, 0.0) - cd(1.0, 0.0)) < 1e-9);
    CHECK(std::abs(ambiguity(u, u.duration_s, 0.0)) < 1e-12);
    CHECK(std::abs(ambiguity(u, 2.0 * u.duration_s, 0.0)) == 0.0);

    double peak = std::abs(ambiguity(u, 0.0, 0.0));
    for (double tau = -1e-6; tau <= 1e-6; tau += 0.13e-6)
        for (double fd = -25e6; fd <= 25e6; fd += 2.71e6)
            CHECK(std::abs(ambiguity(u, tau, fd)) <= peak + 1e-9);
}

TEST_CASE("zero-delay cut of the ambiguity equals the autocorrelation") {
    const auto u = lfm_baseband(1e-6, 20e6, 40e6);
    const CVec y = matched_filter(u.samples, u);
    for (int k = 0; k < 40; k += 3) {
        const cd g = ambiguity(u, static_cast<double>(k) / 40e6, 0.0);
        CHECK(std::abs(y[k] - g) < 1e-9);
    }
}

TEST_CASE("matched filter peak location and value") {
    const auto u = lfm_baseband(1e-6, 20e6, 40e6);
    CVec x(400, cd(0.0, 0.0));
    const int k0 = 127;
    for (std::size_t j = 0; j < u.samples.size(); ++j) x[k0 + j] = u.samples[j];
    const CVec y = matched_filter(x, u);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (std::abs(y[i]) > std::abs(y[arg])) arg = i;
    CHECK(arg == k0);
    CHECK(std::abs(y[k0] - cd(1.0, 0.0)) < 1e-9);
}

TEST_CASE("carrier-offset echo compresses to the cross-ambiguity value") {
    const auto u = lfm_baseband(1e-6, 20e6, 40e6);
    const double df = 1e6;
    CVec x(u.samples.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double t = static_cast<double>(k) / 40e6;
        x[k] = u.samples[k] * cd(std::cos(2 * kPi * df * t), std::sin(2 * kPi * df * t));
    }
    const CVec y = matched_filter(x, u);
    const cd expect = ambiguity(u, 0.0, df);
    CHECK(std::abs(std::abs(y[0]) - std::abs(expect)) < 1e-6);
    // df * T_p = 1, so the zero-delay cross gain vanishes
    CHECK(std::abs(expect) < 1e-9);
}

TEST_CASE("fft and direct matched filter agree") {
    const auto u = lfm_baseband(1e-6, 20e6, 40e6);
    auto gen = rng::stream(3, "waveform-test");
    std::normal_distribution<double> g(0.0, 1.0);
    CVec x(2048);
    for (auto& z : x) z = cd(g(gen), g(gen));
    const CVec a = matched_filter(x, u);
    const CVec b = matched_filter_direct(x, u);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-9);
    CHECK_THROWS_AS(matched_filter(CVec(4), u), std::invalid_argument);
}

TEST_CASE("white noise energy through the matched filter") {
    const auto u = lfm_baseband(1e-6, 20e6, 40e6);
    auto gen = rng::stream(11, "waveform-test");
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const std::size_t len = 1 << 15;
    CVec x(len);
    for (auto& z : x) z = cd(g(gen), g(gen));
    const CVec y = matched_filter(x, u);
    // per-sample output variance is waveform energy / fs for unit-power noise
    double e = 0.0;
    const std::size_t interior = len - u.samples.size();
    for (std::size_t i = 0; i < interior; ++i) e += std::norm(y[i]);
    const double expected = static_cast<double>(interior) / 40e6;
    CHECK(e / expected == doctest::Approx(1.0).epsilon(0.05));
}
