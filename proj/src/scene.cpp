#include "fdastap/scene.hpp"

#include "fdastap/geometry.hpp"
#include "fdastap/linalg.hpp"
#include "fdastap/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fdastap::scene {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace

std::vector<ClutterPatch> clutter_patches(const ClutterRing& ring, const SystemConfig& cfg,
                                          CnrMode mode) {
    if (ring.patches < 1) throw std::invalid_argument("clutter_patches: need at least one patch");
    if (ring.azimuth_stop_rad < ring.azimuth_start_rad)
        throw std::invalid_argument("clutter_patches: empty azimuth span");
    const double ridge = 2.0 * cfg.platform_mps / cfg.wavelength_m;
    const double cnr_total = db_to_linear(ring.cnr_db);
    const double cnr = mode == CnrMode::per_patch ? cnr_total
                                                  : cnr_total / static_cast<double>(ring.patches);
    std::vector<ClutterPatch> out(ring.patches);
    for (int i = 0; i < ring.patches; ++i) {
        const double az = ring.patches == 1
                              ? 0.5 * (ring.azimuth_start_rad + ring.azimuth_stop_rad)
                              : ring.azimuth_start_rad +
                                    (ring.azimuth_stop_rad - ring.azimuth_start_rad) *
                                        static_cast<double>(i) /
                                        static_cast<double>(ring.patches - 1);
        ClutterPatch p;
        p.range_m = ring.range_m;
        p.conic_rad = geometry::conic_angle(az, ring.depression_rad);
        p.doppler_hz = ridge * std::cos(p.conic_rad);
        p.cnr = cnr;
        out[i] = p;
    }
    return out;
}

std::vector<ClutterPatch> all_clutter_patches(const Scene& sc, const SystemConfig& cfg,
                                              CnrMode mode) {
    std::vector<ClutterPatch> all;
    for (const ClutterRing& ring : sc.clutter_rings) {
        auto p = clutter_patches(ring, cfg, mode);
        all.insert(all.end(), p.begin(), p.end());
    }
    return all;
}

CMat covariance_clutter(const std::vector<ClutterPatch>& patches, const CVec& weights,
                        const SystemConfig& cfg) {
    const std::size_t dim = cfg.snapshot_dim();
    CMat acc(dim, dim);
    if (patches.empty()) return acc;
    CMat vecs(patches.size(), dim);
    std::vector<double> cnr(patches.size());
    for (std::size_t i = 0; i < patches.size(); ++i) {
        const CVec q = model::composite_steering(patches[i].range_m, patches[i].conic_rad,
                                                 patches[i].doppler_hz, weights, cfg);
        std::copy(q.begin(), q.end(), vecs.a.begin() + i * dim);
        cnr[i] = patches[i].cnr;
    }
    linalg::accumulate_outer(acc, vecs, cnr);
    return acc;
}

CMat covariance_jamming(const std::vector<Jammer>& jammers, const SystemConfig& cfg) {
    const std::size_t dim = cfg.snapshot_dim();
    CMat r(dim, dim);
    CMat s(cfg.n_rx, cfg.n_rx); // spatial core across receive elements
    for (const Jammer& j : jammers) {
        const double psi = geometry::conic_angle(j.azimuth_rad, j.depression_rad);
        const CVec ar = model::steering_receive(psi, cfg);
        const double jnr = db_to_linear(j.jnr_db);
        for (int a = 0; a < cfg.n_rx; ++a)
            for (int b = 0; b < cfg.n_rx; ++b) s(a, b) += jnr * ar[a] * std::conj(ar[b]);
    }
    for (int l = 0; l < cfg.pulses; ++l)
        for (int a = 0; a < cfg.n_rx; ++a)
            for (int b = 0; b < cfg.n_rx; ++b) {
                const cd v = s(a, b);
                if (v == cd(0.0, 0.0)) continue;
                for (int m = 0; m < cfg.n_tx; ++m)
                    r(snapshot_index(cfg, m, a, l), snapshot_index(cfg, m, b, l)) += v;
            }
    return r;
}

CVec sample_jamming_snapshot(const Jammer& jam, const SystemConfig& cfg, std::uint64_t seed) {
    auto gen = rng::stream(seed, "jamming-snapshot");
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5)); // unit-power complex entries
    const double psi = geometry::conic_angle(jam.azimuth_rad, jam.depression_rad);
    const CVec ar = model::steering_receive(psi, cfg);
    CVec u_slow(cfg.pulses), u_tx(cfg.n_tx);
    for (cd& v : u_slow) v = cd(gauss(gen), gauss(gen));
    for (cd& v : u_tx) v = cd(gauss(gen), gauss(gen));
    const double amp = std::sqrt(db_to_linear(jam.jnr_db));
    CVec q(cfg.snapshot_dim());
    for (int l = 0; l < cfg.pulses; ++l)
        for (int n = 0; n < cfg.n_rx; ++n)
            for (int m = 0; m < cfg.n_tx; ++m)
                q[snapshot_index(cfg, m, n, l)] = amp * u_slow[l] * ar[n] * u_tx[m];
    return q;
}

namespace {

double trace_of(const CMat& m) {
    double t = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) t += m(i, i).real();
    return t;
}

} // namespace

CovarianceModel covariance_total(const Scene& sc, const CVec& weights, const SystemConfig& cfg,
                                 CnrMode mode) {
    CovarianceModel cm;
    const std::size_t dim = cfg.snapshot_dim();
    cm.matrix = covariance_clutter(all_clutter_patches(sc, cfg, mode), weights, cfg);
    cm.terms.push_back({"clutter", trace_of(cm.matrix)});
    const CMat jam = covariance_jamming(sc.jammers, cfg);
    cm.terms.push_back({"jamming", trace_of(jam)});
    for (std::size_t i = 0; i < cm.matrix.a.size(); ++i) cm.matrix.a[i] += jam.a[i];
    for (std::size_t i = 0; i < dim; ++i) cm.matrix(i, i) += cd(1.0, 0.0);
    cm.terms.push_back({"noise", static_cast<double>(dim)});
    return cm;
}

CovarianceModel covariance_total_mode(const Scene& sc, const model::ModeModel& mm, CnrMode mode) {
    const SystemConfig& cfg = mm.cfg;
    if (mm.mode != model::Mode::pa) {
        const CVec ones(cfg.n_tx, cd(1.0, 0.0));
        return covariance_total(sc, ones, cfg, mode);
    }

    // phased array: snapshot dim N_R * L, transmit gain folded into the
    // clutter steering, jammers unaffected by the transmit pattern
    CovarianceModel cm;
    const std::size_t dim = mm.dim();
    cm.matrix = CMat(dim, dim);
    const auto patches = all_clutter_patches(sc, cfg, mode);
    if (!patches.empty()) {
        CMat vecs(patches.size(), dim);
        std::vector<double> cnr(patches.size());
        for (std::size_t i = 0; i < patches.size(); ++i) {
            const CVec q = mm.steering(patches[i].range_m, patches[i].conic_rad,
                                       patches[i].doppler_hz);
            std::copy(q.begin(), q.end(), vecs.a.begin() + i * dim);
            cnr[i] = patches[i].cnr;
        }
        linalg::accumulate_outer(cm.matrix, vecs, cnr);
    }
    cm.terms.push_back({"clutter", trace_of(cm.matrix)});

    CMat s(cfg.n_rx, cfg.n_rx);
    for (const Jammer& j : sc.jammers) {
        const double psi = geometry::conic_angle(j.azimuth_rad, j.depression_rad);
        const CVec ar = model::steering_receive(psi, cfg);
        const double jnr = db_to_linear(j.jnr_db);
        for (int a = 0; a < cfg.n_rx; ++a)
            for (int b = 0; b < cfg.n_rx; ++b) s(a, b) += jnr * ar[a] * std::conj(ar[b]);
    }
    double jam_trace = 0.0;
    for (int l = 0; l < cfg.pulses; ++l)
        for (int a = 0; a < cfg.n_rx; ++a)
            for (int b = 0; b < cfg.n_rx; ++b) {
                cm.matrix(static_cast<std::size_t>(l) * cfg.n_rx + a,
                          static_cast<std::size_t>(l) * cfg.n_rx + b) += s(a, b);
                if (a == b) jam_trace += s(a, b).real();
            }
    cm.terms.push_back({"jamming", jam_trace});
    for (std::size_t i = 0; i < dim; ++i) cm.matrix(i, i) += cd(1.0, 0.0);
    cm.terms.push_back({"noise", static_cast<double>(dim)});
    return cm;
}

double target_conic(const TargetDesc& t) {
    return geometry::conic_angle(t.azimuth_rad, t.depression_rad);
}

double target_doppler(const TargetDesc& t, const SystemConfig& cfg) {
    return geometry::doppler_from_velocity(t.velocity_mps, cfg.wavelength_m);
}

CVec target_steering(const TargetDesc& t, const CVec& weights, const SystemConfig& cfg) {
    return model::composite_steering(t.range_m, target_conic(t), target_doppler(t, cfg), weights,
                                     cfg);
}

} // namespace fdastap::scene
