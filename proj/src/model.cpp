#include "fdastap/model.hpp"

#include "fdastap/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace fdastap::model {

namespace {

cd unit_phase(double phase_rad) { return cd(std::cos(phase_rad), std::sin(phase_rad)); }

} // namespace

CVec steering_transmit(double range_m, double conic_rad, const SystemConfig& cfg) {
    const auto d = geometry::delays(range_m, conic_rad, cfg);
    CVec a(cfg.n_tx);
    const double phase0 = -2.0 * kPi * cfg.carrier_hz * d.round_trip_s;
    for (int m = 0; m < cfg.n_tx; ++m) {
        const double fm = cfg.carrier_m(m);
        const double phase =
            2.0 * kPi * fm * (static_cast<double>(m) * d.tx_step_s - d.round_trip_s);
        a[m] = unit_phase(phase - phase0); // reference to entry 0
    }
    return a;
}

CVec steering_receive(double conic_rad, const SystemConfig& cfg) {
    const double step = -cfg.d_rx_m * std::cos(conic_rad) / kSpeedOfLight;
    CVec a(cfg.n_rx);
    for (int n = 0; n < cfg.n_rx; ++n)
        a[n] = unit_phase(2.0 * kPi * cfg.carrier_hz * static_cast<double>(n) * step);
    return a;
}

CVec steering_doppler(double doppler_hz, int pulses, double prf_hz) {
    CVec b(pulses);
    const double tr = 1.0 / prf_hz;
    for (int l = 0; l < pulses; ++l)
        b[l] = unit_phase(2.0 * kPi * doppler_hz * static_cast<double>(l) * tr);
    return b;
}

CVec composite_steering(double range_m, double conic_rad, double doppler_hz, const CVec& weights,
                        const SystemConfig& cfg) {
    if (static_cast<int>(weights.size()) != cfg.n_tx)
        throw std::invalid_argument("composite_steering: weights length must equal n_tx");
    const CVec at = steering_transmit(range_m, conic_rad, cfg);
    const CVec ar = steering_receive(conic_rad, cfg);
    const CVec b = steering_doppler(doppler_hz, cfg.pulses, cfg.prf_hz);
    CVec q(cfg.snapshot_dim());
    for (int l = 0; l < cfg.pulses; ++l)
        for (int n = 0; n < cfg.n_rx; ++n) {
            const cd bl_arn = b[l] * ar[n];
            for (int m = 0; m < cfg.n_tx; ++m)
                q[snapshot_index(cfg, m, n, l)] = bl_arn * weights[m] * at[m];
        }
    return q;
}

CMat steering_matrix(double range_m, double conic_rad, double doppler_hz,
                     const SystemConfig& cfg) {
    const CVec at = steering_transmit(range_m, conic_rad, cfg);
    const CVec ar = steering_receive(conic_rad, cfg);
    const CVec b = steering_doppler(doppler_hz, cfg.pulses, cfg.prf_hz);
    CMat c(cfg.snapshot_dim(), cfg.n_tx);
    for (int l = 0; l < cfg.pulses; ++l)
        for (int n = 0; n < cfg.n_rx; ++n)
            for (int m = 0; m < cfg.n_tx; ++m)
                c(snapshot_index(cfg, m, n, l), m) = b[l] * ar[n] * at[m];
    return c;
}

CMat spatial_exact(double conic_rad, const SystemConfig& cfg) {
    const double xi_t = -cfg.d_tx_m * std::cos(conic_rad) / kSpeedOfLight;
    const double xi_r = -cfg.d_rx_m * std::cos(conic_rad) / kSpeedOfLight;
    CMat a(cfg.n_tx, cfg.n_rx);
    for (int m = 0; m < cfg.n_tx; ++m)
        for (int n = 0; n < cfg.n_rx; ++n) {
            const double fm = cfg.carrier_m(m);
            a(m, n) = unit_phase(2.0 * kPi * fm *
                                 (static_cast<double>(m) * xi_t + static_cast<double>(n) * xi_r));
        }
    return a;
}

CMat spatial_separable(double conic_rad, const SystemConfig& cfg) {
    const double xi_t = -cfg.d_tx_m * std::cos(conic_rad) / kSpeedOfLight;
    const double xi_r = -cfg.d_rx_m * std::cos(conic_rad) / kSpeedOfLight;
    CMat a(cfg.n_tx, cfg.n_rx);
    for (int m = 0; m < cfg.n_tx; ++m)
        for (int n = 0; n < cfg.n_rx; ++n) {
            const double fm = cfg.carrier_m(m);
            const double ph = 2.0 * kPi * fm * static_cast<double>(m) * xi_t +
                              2.0 * kPi * cfg.carrier_hz * static_cast<double>(n) * xi_r;
            a(m, n) = unit_phase(ph);
        }
    return a;
}

cd pa_gain(double conic_rad, double look_conic_rad, const SystemConfig& cfg) {
    const double xi = -cfg.d_tx_m * std::cos(conic_rad) / kSpeedOfLight;
    const double xi0 = -cfg.d_tx_m * std::cos(look_conic_rad) / kSpeedOfLight;
    cd g(0.0, 0.0);
    for (int m = 0; m < cfg.n_tx; ++m)
        g += unit_phase(2.0 * kPi * cfg.carrier_hz * static_cast<double>(m) * (xi - xi0));
    return g;
}

CVec composite_steering_pa(double conic_rad, double doppler_hz, double look_conic_rad,
                           const SystemConfig& cfg) {
    const cd g = pa_gain(conic_rad, look_conic_rad, cfg);
    const CVec ar = steering_receive(conic_rad, cfg);
    const CVec b = steering_doppler(doppler_hz, cfg.pulses, cfg.prf_hz);
    CVec q(static_cast<std::size_t>(cfg.n_rx) * cfg.pulses);
    for (int l = 0; l < cfg.pulses; ++l)
        for (int n = 0; n < cfg.n_rx; ++n)
            q[static_cast<std::size_t>(l) * cfg.n_rx + n] = g * b[l] * ar[n];
    return q;
}

CVec ModeModel::steering(double range_m, double conic_rad, double doppler_hz) const {
    if (mode == Mode::pa) return composite_steering_pa(conic_rad, doppler_hz, look_conic_rad, cfg);
    const CVec ones(cfg.n_tx, cd(1.0, 0.0));
    return composite_steering(range_m, conic_rad, doppler_hz, ones, cfg);
}

ModeModel make_mode_model(const SystemConfig& cfg, Mode mode, double look_conic_rad) {
    ModeModel m;
    m.mode = mode;
    m.cfg = cfg;
    m.look_conic_rad = look_conic_rad;
    if (mode == Mode::mimo) m.cfg.freq_offset_hz = 0.0;
    return m;
}

} // namespace fdastap::model
