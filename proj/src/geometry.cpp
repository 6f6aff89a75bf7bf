#include "fdastap/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fdastap::geometry {

double conic_angle(double azimuth_rad, double depression_rad) {
    if (azimuth_rad < 0.0 || azimuth_rad > kPi)
        throw std::domain_error("conic_angle: azimuth must lie in [0, pi]");
    if (depression_rad < 0.0 || depression_rad > kPi / 2.0)
        throw std::domain_error("conic_angle: depression must lie in [0, pi/2]");
    const double c = std::cos(azimuth_rad) * std::cos(depression_rad);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

Angles make_angles(double azimuth_rad, double depression_rad) {
    Angles a;
    a.azimuth_rad = azimuth_rad;
    a.depression_rad = depression_rad;
    a.conic_rad = conic_angle(azimuth_rad, depression_rad);
    return a;
}

DelaySet delays(double range_m, double conic_rad, const SystemConfig& cfg, double velocity_mps) {
    if (range_m <= 0.0) throw std::domain_error("delays: range must be positive");
    DelaySet d;
    d.round_trip_s = 2.0 * range_m / kSpeedOfLight;
    d.tx_step_s = -cfg.d_tx_m * std::cos(conic_rad) / kSpeedOfLight;
    d.rx_step_s = -cfg.d_rx_m * std::cos(conic_rad) / kSpeedOfLight;
    d.doppler_rate = doppler_from_velocity(velocity_mps, cfg.wavelength_m) / cfg.carrier_hz;
    return d;
}

double doppler_from_velocity(double velocity_mps, double wavelength_m) {
    if (wavelength_m <= 0.0) throw std::domain_error("doppler_from_velocity: wavelength must be positive");
    return 2.0 * velocity_mps / wavelength_m;
}

DecorrelationCheck check_decorrelation(double freq_offset_hz, int n_tx, double target_extent_m) {
    if (n_tx < 2) throw std::domain_error("check_decorrelation: needs at least two transmit elements");
    if (target_extent_m <= 0.0) throw std::domain_error("check_decorrelation: extent must be positive");
    DecorrelationCheck r;
    r.bound_hz = kSpeedOfLight / (4.0 * static_cast<double>(n_tx - 1) * target_extent_m);
    r.margin_hz = r.bound_hz - freq_offset_hz;
    r.pass = freq_offset_hz <= r.bound_hz;
    return r;
}

} // namespace fdastap::geometry
