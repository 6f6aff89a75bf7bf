#pragma once

#include "fdastap/types.hpp"

namespace fdastap::waveform {

// Causal unit-energy baseband pulse on [0, T_p). The samples are the
// closed form evaluated on the fast-time grid, so eval() at a grid point
// reproduces samples[k] exactly; the chain uses eval() for off-grid
// echo delays.
struct BasebandWaveform {
    CVec samples;
    double sample_rate_hz = 0.0;
    double duration_s = 0.0;
    double bandwidth_hz = 0.0;
    double amplitude = 0.0; // normalization so that sum |u|^2 / fs = 1

    cd eval(double t) const;
    double energy() const; // Riemann sum, equals 1 by construction
};

// Linear FM chirp sweeping bandwidth_hz across the pulse, centered so the
// instantaneous frequency runs from -B/2 to +B/2. bandwidth_hz = 0 gives a
// rectangular pulse.
BasebandWaveform lfm_baseband(double duration_s, double bandwidth_hz, double sample_rate_hz);

// Delay-Doppler correlation of u with itself, Riemann quadrature at the
// waveform's own sample rate. Zero outside |delay| <= T_p.
cd ambiguity(const BasebandWaveform& u, double delay_s, double doppler_hz);

// Correlation of x with the pulse: y[k] = (1/fs) sum_j conj(u[j]) x[k+j],
// same length as x, so the peak index equals the echo delay index.
CVec matched_filter(const CVec& x, const BasebandWaveform& u);
CVec matched_filter_direct(const CVec& x, const BasebandWaveform& u);

} // namespace fdastap::waveform
