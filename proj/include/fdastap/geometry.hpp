#pragma once

#include "fdastap/config.hpp"
#include "fdastap/types.hpp"

namespace fdastap::geometry {

// Side-looking geometry. Azimuth theta in [0, pi], depression phi in
// [0, pi/2]; the conic angle psi between the array axis and the line of
// sight satisfies cos(psi) = cos(theta) cos(phi).
struct Angles {
    double azimuth_rad = 0.0;
    double depression_rad = 0.0;
    double conic_rad = 0.0;
};

double conic_angle(double azimuth_rad, double depression_rad);
Angles make_angles(double azimuth_rad, double depression_rad);

// Delay decomposition for one scatterer: round trip, signed per-element
// steps along the transmit and receive arrays, and the dimensionless
// Doppler delay rate f_d / f_c.
struct DelaySet {
    double round_trip_s = 0.0;
    double tx_step_s = 0.0;
    double rx_step_s = 0.0;
    double doppler_rate = 0.0;
};

DelaySet delays(double range_m, double conic_rad, const SystemConfig& cfg, double velocity_mps = 0.0);

double doppler_from_velocity(double velocity_mps, double wavelength_m);

// Frequency-decorrelation bound for a target of the given boresight
// extent: the offset must not exceed c / (4 (N_T - 1) extent).
struct DecorrelationCheck {
    bool pass = false;
    double bound_hz = 0.0;
    double margin_hz = 0.0; // bound - offset
};

DecorrelationCheck check_decorrelation(double freq_offset_hz, int n_tx, double target_extent_m);

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

} // namespace fdastap::geometry
