#pragma once

#include <cstddef>
#include <stdexcept>

namespace fdastap {

// Radar system parameters. Defaults are the uniform side-looking airborne
// FDA used throughout the test scenarios: five transmit and five receive
// elements at half-wavelength spacing, 1 MHz carrier step, 7 kHz PRF.
struct SystemConfig {
    int n_tx = 5;
    int n_rx = 5;
    double d_tx_m = 0.125;
    double d_rx_m = 0.125;
    double carrier_hz = 1.2e9;
    double freq_offset_hz = 1.0e6;
    double prf_hz = 7000.0;
    int pulses = 180;
    double pulse_duration_s = 1.0e-6;
    double bandwidth_hz = 20.0e6;
    double sample_rate_hz = 40.0e6;
    double wavelength_m = 0.25; // used for Doppler conversion, f_d = 2 v / lambda
    double platform_mps = 100.0;

    bool operator==(const SystemConfig&) const = default;

    double pri_s() const { return 1.0 / prf_hz; }

    // carrier of transmit element m, zero-based
    double carrier_m(int m) const { return carrier_hz + static_cast<double>(m) * freq_offset_hz; }

    std::size_t snapshot_dim() const {
        return static_cast<std::size_t>(n_tx) * static_cast<std::size_t>(n_rx) *
               static_cast<std::size_t>(pulses);
    }

    void validate() const {
        if (n_tx < 1 || n_rx < 1 || pulses < 1)
            throw std::invalid_argument("SystemConfig: element and pulse counts must be positive");
        if (prf_hz <= 0.0 || carrier_hz <= 0.0 || wavelength_m <= 0.0)
            throw std::invalid_argument("SystemConfig: prf, carrier and wavelength must be positive");
        if (pulse_duration_s <= 0.0 || sample_rate_hz <= 0.0)
            throw std::invalid_argument("SystemConfig: pulse duration and sample rate must be positive");
        if (pulse_duration_s >= pri_s())
            throw std::invalid_argument("SystemConfig: pulse duration must be shorter than the PRI");
    }
};

// Snapshot index convention used everywhere: transmit channel fastest,
// then receive element, then pulse.
inline std::size_t snapshot_index(const SystemConfig& cfg, int m, int n, int l) {
    return (static_cast<std::size_t>(l) * cfg.n_rx + n) * cfg.n_tx + m;
}

} // namespace fdastap
