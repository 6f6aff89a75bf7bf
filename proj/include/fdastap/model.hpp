#pragma once

#include "fdastap/config.hpp"
#include "fdastap/types.hpp"

namespace fdastap::model {

// Closed-form steering vectors for the separable snapshot model.
// Convention: all vectors are normalized so the first entry is real
// positive (1 for unit-modulus steering); constant phases are absorbed
// into the scatterer amplitude.

// Transmit range-angle steering, entry m (zero-based):
//   exp(j 2 pi f_m m xi_T(psi)) * exp(-j 2 pi f_m xi(r)),  f_m = f_c + m df,
// then referenced to entry 0. The frequency offset couples the round-trip
// delay into a per-element phase, which is the range-controllable degree
// of freedom of the array.
CVec steering_transmit(double range_m, double conic_rad, const SystemConfig& cfg);

// Receive steering, entry n: exp(j 2 pi f_c n xi_R(psi)).
CVec steering_receive(double conic_rad, const SystemConfig& cfg);

// Slow-time Doppler steering, entry l: exp(j 2 pi f_d l / prf).
CVec steering_doppler(double doppler_hz, int pulses, double prf_hz);

// b_dop kron (a_R kron (w had a_T)), laid out transmit-fastest.
CVec composite_steering(double range_m, double conic_rad, double doppler_hz, const CVec& weights,
                        const SystemConfig& cfg);

// C(r, psi, f_d): the (N_T N_R L) x N_T matrix with C w = composite_steering(w).
CMat steering_matrix(double range_m, double conic_rad, double doppler_hz, const SystemConfig& cfg);

// Joint transmit-receive spatial phases without the separable split:
// entry (m, n) = exp(j 2 pi f_m [m xi_T + n xi_R]). Kept only so tests can
// audit the size of the separable approximation.
CMat spatial_exact(double conic_rad, const SystemConfig& cfg);
CMat spatial_separable(double conic_rad, const SystemConfig& cfg);

// Phased-array baseline: one transmit channel steered at look_conic_rad,
// scalar gain a_T0(look)^H a_T0(psi) with df = 0, snapshot dim N_R * L.
cd pa_gain(double conic_rad, double look_conic_rad, const SystemConfig& cfg);
CVec composite_steering_pa(double conic_rad, double doppler_hz, double look_conic_rad,
                           const SystemConfig& cfg);

// Steering-model selector for the three system variants compared in the
// experiments. MIMO is the identical pipeline with zero frequency offset;
// PA reduces to a single steered transmit channel.
enum class Mode { fda, mimo, pa };

struct ModeModel {
    Mode mode = Mode::fda;
    SystemConfig cfg;           // already has df = 0 for MIMO
    double look_conic_rad = 0.0; // PA only

    std::size_t dim() const {
        return mode == Mode::pa
                   ? static_cast<std::size_t>(cfg.n_rx) * static_cast<std::size_t>(cfg.pulses)
                   : cfg.snapshot_dim();
    }
    // unit transmit weights
    CVec steering(double range_m, double conic_rad, double doppler_hz) const;
};

ModeModel make_mode_model(const SystemConfig& cfg, Mode mode, double look_conic_rad);

} // namespace fdastap::model
