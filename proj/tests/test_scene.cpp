#include <doctest.h>

#include "fdastap/geometry.hpp"
#include "fdastap/linalg.hpp"
#include "fdastap/rng.hpp"
#include "fdastap/scene.hpp"

#include <cmath>
#include <random>

using namespace fdastap;
using namespace fdastap::scene;
using geometry::deg2rad;

namespace {

SystemConfig tiny_cfg() {
    SystemConfig cfg;
    cfg.n_tx = 2;
    cfg.n_rx = 2;
    cfg.pulses = 4;
    return cfg;
}

ClutterRing reference_ring() {
    ClutterRing ring;
    ring.range_m = 3006.0;
    ring.azimuth_start_rad = 0.0;
    ring.azimuth_stop_rad = deg2rad(180.0);
    ring.patches = 181;
    ring.depression_rad = deg2rad(45.0);
    ring.cnr_db = 20.0;
    return ring;
}

} // namespace

TEST_CASE("clutter patches trace the platform ridge") {
    SystemConfig cfg;
    const auto patches = clutter_patches(reference_ring(), cfg);
    REQUIRE(patches.size() == 181);
    // one-degree spacing, end points included
    CHECK(patches.front().conic_rad == doctest::Approx(deg2rad(45.0)).epsilon(1e-12));
    CHECK(patches[90].conic_rad == doctest::Approx(deg2rad(90.0)).epsilon(1e-12));

    double max_fd = 0.0;
    for (const auto& p : patches) {
        CHECK(p.doppler_hz ==
              doctest::Approx(800.0 * std::cos(p.conic_rad)).epsilon(1e-12));
        CHECK(std::abs(p.doppler_hz) <= 2.0 * cfg.platform_mps / cfg.wavelength_m);
        max_fd = std::max(max_fd, std::abs(p.doppler_hz));
        CHECK(p.cnr == doctest::Approx(100.0).epsilon(1e-12));
    }
    CHECK(max_fd == doctest::Approx(800.0 * std::cos(deg2rad(45.0))).epsilon(1e-12));
    CHECK(std::abs((patches[90].doppler_hz) - (0.0)) <= 1e-9);

    ClutterRing bad = reference_ring();
    bad.patches = 0;
    CHECK_THROWS_AS(clutter_patches(bad, cfg), std::invalid_argument);
    bad = reference_ring();
    bad.azimuth_stop_rad = -0.1;
    CHECK_THROWS_AS(clutter_patches(bad, cfg), std::invalid_argument);
}

TEST_CASE("total CNR mode splits the power across patches") {
    SystemConfig cfg;
    const auto per = clutter_patches(reference_ring(), cfg, CnrMode::per_patch);
    const auto tot = clutter_patches(reference_ring(), cfg, CnrMode::total);
    CHECK(tot[0].cnr == doctest::Approx(per[0].cnr / 181.0).epsilon(1e-12));
}

TEST_CASE("clutter covariance structure") {
    const auto cfg = tiny_cfg();
    const CVec w(cfg.n_tx, cd(1.0, 0.0));

    CHECK(norm2(covariance_clutter({}, w, cfg).a) == 0.0);

    ClutterPatch p;
    p.range_m = 2990.0;
    p.conic_rad = 1.1;
    p.doppler_hz = 340.0;
    p.cnr = 50.0;
    const CMat r1 = covariance_clutter({p}, w, cfg);
    const CVec q = model::composite_steering(p.range_m, p.conic_rad, p.doppler_hz, w, cfg);
    double trace = 0.0;
    for (std::size_t i = 0; i < r1.rows; ++i) {
        trace += r1(i, i).real();
        for (std::size_t j = 0; j < r1.cols; ++j)
            CHECK(std::abs(r1(i, j) - p.cnr * q[i] * std::conj(q[j])) < 1e-10);
    }
    CHECK(trace == doctest::Approx(p.cnr * cfg.snapshot_dim()).epsilon(1e-12));
}

TEST_CASE("clutter covariance is Hermitian on a random scene") {
    const auto cfg = tiny_cfg();
    auto gen = rng::stream(4, "scene-test");
    std::uniform_real_distribution<double> uaz(0.1, kPi - 0.1), ur(2500.0, 3500.0),
        ucnr(1.0, 30.0);
    std::vector<ClutterPatch> patches;
    for (int i = 0; i < 9; ++i) {
        ClutterPatch p;
        p.range_m = ur(gen);
        p.conic_rad = uaz(gen);
        p.doppler_hz = 800.0 * std::cos(p.conic_rad);
        p.cnr = ucnr(gen);
        patches.push_back(p);
    }
    const CMat r = covariance_clutter(patches, CVec(cfg.n_tx, cd(1.0, 0.0)), cfg);
    for (std::size_t i = 0; i < r.rows; ++i)
        for (std::size_t j = 0; j < r.cols; ++j)
            CHECK(std::abs(r(i, j) - std::conj(r(j, i))) < 1e-12 * r(0, 0).real());
}

TEST_CASE("Monte-Carlo clutter snapshots reproduce the covariance") {
    const auto cfg = tiny_cfg();
    const CVec w(cfg.n_tx, cd(1.0, 0.0));
    std::vector<ClutterPatch> patches;
    for (int i = 0; i < 5; ++i) {
        ClutterPatch p;
        p.range_m = 3006.0;
        p.conic_rad = 0.4 + 0.5 * i;
        p.doppler_hz = 800.0 * std::cos(p.conic_rad);
        p.cnr = 10.0;
        patches.push_back(p);
    }
    const CMat ref = covariance_clutter(patches, w, cfg);

    const std::size_t dim = cfg.snapshot_dim();
    CMat emp(dim, dim);
    auto gen = rng::stream(12, "scene-test");
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * kPi);
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
        CVec snap(dim, cd(0.0, 0.0));
        for (const auto& p : patches) {
            const cd amp = std::sqrt(p.cnr) * std::polar(1.0, uphase(gen));
            const CVec q = model::composite_steering(p.range_m, p.conic_rad, p.doppler_hz, w, cfg);
            for (std::size_t i = 0; i < dim; ++i) snap[i] += amp * q[i];
        }
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) emp(i, j) += snap[i] * std::conj(snap[j]);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < emp.a.size(); ++i) {
        emp.a[i] /= static_cast<double>(draws);
        num += std::norm(emp.a[i] - ref.a[i]);
        den += std::norm(ref.a[i]);
    }
    CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("jammer covariance spectrum and trace") {
    SystemConfig cfg;
    cfg.n_tx = 2;
    cfg.n_rx = 3;
    cfg.pulses = 2;
    Jammer jam;
    jam.azimuth_rad = deg2rad(120.0);
    jam.depression_rad = deg2rad(45.0);
    jam.jnr_db = 20.0;
    const CMat r = covariance_jamming({jam}, cfg);

    double trace = 0.0;
    for (std::size_t i = 0; i < r.rows; ++i) trace += r(i, i).real();
    CHECK(trace == doctest::Approx(100.0 * cfg.snapshot_dim()).epsilon(1e-12));

    // r^2 = (JNR N_R) r pins the spectrum to {JNR N_R, 0} with rank N_T L
    const double lambda = 100.0 * cfg.n_rx;
    for (std::size_t i = 0; i < r.rows; ++i)
        for (std::size_t j = 0; j < r.cols; ++j) {
            cd rr(0.0, 0.0);
            for (std::size_t k = 0; k < r.cols; ++k) rr += r(i, k) * r(k, j);
            CHECK(std::abs(rr - lambda * r(i, j)) < 1e-9 * lambda);
            CHECK(std::abs(r(i, j) - std::conj(r(j, i))) < 1e-12 * lambda);
        }
    CHECK(trace / lambda == doctest::Approx(cfg.n_tx * cfg.pulses).epsilon(1e-12));

    CHECK(norm2(covariance_jamming({}, cfg).a) == 0.0);
}

TEST_CASE("jammer covariance commutes with compatible Kronecker factors") {
    SystemConfig cfg;
    cfg.n_tx = 2;
    cfg.n_rx = 3;
    cfg.pulses = 2;
    Jammer jam{deg2rad(120.0), deg2rad(45.0), 20.0};
    const CMat r = covariance_jamming({jam}, cfg);

    // X = S^2 + 3 S + I commutes with the spatial core S by construction
    const double psi = geometry::conic_angle(jam.azimuth_rad, jam.depression_rad);
    const CVec ar = model::steering_receive(psi, cfg);
    CMat s(cfg.n_rx, cfg.n_rx), x(cfg.n_rx, cfg.n_rx);
    for (int a = 0; a < cfg.n_rx; ++a)
        for (int b = 0; b < cfg.n_rx; ++b) s(a, b) = 100.0 * ar[a] * std::conj(ar[b]);
    for (int a = 0; a < cfg.n_rx; ++a)
        for (int b = 0; b < cfg.n_rx; ++b) {
            cd s2(0.0, 0.0);
            for (int k = 0; k < cfg.n_rx; ++k) s2 += s(a, k) * s(k, b);
            x(a, b) = s2 + 3.0 * s(a, b) + (a == b ? cd(1.0, 0.0) : cd(0.0, 0.0));
        }
    const std::size_t dim = cfg.snapshot_dim();
    CMat k(dim, dim); // I_L kron X kron I_NT
    for (int l = 0; l < cfg.pulses; ++l)
        for (int a = 0; a < cfg.n_rx; ++a)
            for (int b = 0; b < cfg.n_rx; ++b)
                for (int m = 0; m < cfg.n_tx; ++m)
                    k(snapshot_index(cfg, m, a, l), snapshot_index(cfg, m, b, l)) = x(a, b);

    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            cd kr(0.0, 0.0), rk(0.0, 0.0);
            for (std::size_t t = 0; t < dim; ++t) {
                kr += k(i, t) * r(t, j);
                rk += r(i, t) * k(t, j);
            }
            CHECK(std::abs(kr - rk) < 1e-6);
        }
}

TEST_CASE("sampled jammer snapshots are reproducible and carry the right energy") {
    SystemConfig cfg = tiny_cfg();
    Jammer jam;
    jam.azimuth_rad = deg2rad(120.0);
    jam.depression_rad = deg2rad(45.0);
    jam.jnr_db = 20.0;
    const CVec a = sample_jamming_snapshot(jam, cfg, 42);
    const CVec b = sample_jamming_snapshot(jam, cfg, 42);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

    double energy = 0.0;
    const int draws = 4000;
    for (int d = 0; d < draws; ++d)
        energy += norm2(sample_jamming_snapshot(jam, cfg, 500 + d));
    energy /= draws;
    CHECK(energy == doctest::Approx(100.0 * cfg.snapshot_dim()).epsilon(0.05));
}

TEST_CASE("total covariance assembles clutter + jamming + identity") {
    SystemConfig cfg = tiny_cfg();
    Scene sc;
    sc.target.range_m = 3000.0;
    sc.target.azimuth_rad = deg2rad(45.0);
    sc.target.depression_rad = deg2rad(45.0);
    sc.target.velocity_mps = 50.0;
    ClutterRing ring = reference_ring();
    ring.patches = 13;
    sc.clutter_rings = {ring};
    sc.jammers = {{deg2rad(120.0), deg2rad(45.0), 20.0}};

    const CVec w(cfg.n_tx, cd(1.0, 0.0));
    const auto total = covariance_total(sc, w, cfg);
    const CMat clu = covariance_clutter(all_clutter_patches(sc, cfg), w, cfg);
    const CMat jam = covariance_jamming(sc.jammers, cfg);
    for (std::size_t i = 0; i < total.matrix.rows; ++i)
        for (std::size_t j = 0; j < total.matrix.cols; ++j) {
            const cd expect = clu(i, j) + jam(i, j) + (i == j ? cd(1.0, 0.0) : cd(0.0, 0.0));
            CHECK(std::abs(total.matrix(i, j) - expect) < 1e-10);
        }
    REQUIRE(total.terms.size() == 3);
    CHECK(total.terms[0].label == "clutter");
    CHECK(total.terms[2].trace == doctest::Approx(cfg.snapshot_dim()));

    // v^H R v >= ||v||^2 for any v: the noise identity floors the spectrum
    auto gen = rng::stream(9, "scene-test");
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 25; ++t) {
        CVec v(total.matrix.rows);
        for (auto& z : v) z = cd(g(gen), g(gen));
        const double quad = dot_conj(v, matvec(total.matrix, v)).real();
        CHECK(quad >= norm2(v) * (1.0 - 1e-10));
    }

    // empty scene reduces to the identity
    Scene empty;
    empty.target = sc.target;
    const auto eye = covariance_total(empty, w, cfg);
    for (std::size_t i = 0; i < eye.matrix.rows; ++i)
        for (std::size_t j = 0; j < eye.matrix.cols; ++j)
            CHECK(eye.matrix(i, j) == (i == j ? cd(1.0, 0.0) : cd(0.0, 0.0)));
}

TEST_CASE("mode covariance agrees with the reference build") {
    SystemConfig cfg = tiny_cfg();
    Scene sc;
    sc.target.range_m = 3000.0;
    sc.target.azimuth_rad = deg2rad(45.0);
    sc.target.depression_rad = deg2rad(45.0);
    sc.target.velocity_mps = 50.0;
    ClutterRing ring = reference_ring();
    ring.patches = 7;
    sc.clutter_rings = {ring};
    sc.jammers = {{deg2rad(120.0), deg2rad(45.0), 20.0}};

    const auto fda = model::make_mode_model(cfg, model::Mode::fda, target_conic(sc.target));
    const auto direct = covariance_total(sc, CVec(cfg.n_tx, cd(1.0, 0.0)), cfg);
    const auto via_mode = covariance_total_mode(sc, fda);
    for (std::size_t i = 0; i < direct.matrix.a.size(); ++i)
        CHECK(std::abs(direct.matrix.a[i] - via_mode.matrix.a[i]) < 1e-12);

    const auto pa = model::make_mode_model(cfg, model::Mode::pa, target_conic(sc.target));
    const auto pa_cov = covariance_total_mode(sc, pa);
    CHECK(pa_cov.matrix.rows == static_cast<std::size_t>(cfg.n_rx) * cfg.pulses);
    for (std::size_t i = 0; i < pa_cov.matrix.rows; ++i)
        for (std::size_t j = 0; j < pa_cov.matrix.cols; ++j)
            CHECK(std::abs(pa_cov.matrix(i, j) - std::conj(pa_cov.matrix(j, i))) < 1e-9);
}

TEST_CASE("target helpers") {
    SystemConfig cfg;
    TargetDesc t;
    t.range_m = 3000.0;
    t.azimuth_rad = deg2rad(45.0);
    t.depression_rad = deg2rad(45.0);
    t.velocity_mps = 50.0;
    CHECK(target_conic(t) == doctest::Approx(deg2rad(60.0)).epsilon(1e-12));
    CHECK(target_doppler(t, cfg) == doctest::Approx(400.0).epsilon(1e-12));
    const CVec q = target_steering(t, CVec(cfg.n_tx, cd(1.0, 0.0)), cfg);
    CHECK(q.size() == cfg.snapshot_dim());
}
