#pragma once

#include "fdastap/config.hpp"
#include "fdastap/phasecode.hpp"
#include "fdastap/types.hpp"
#include "fdastap/waveform.hpp"

#include <vector>

namespace fdastap::chain {

// Time-domain simulation of the full transmit-receive path: phase-coded
// pulse train, point echoes, multi-carrier mixing, fast-time matched
// filtering, slow-time Doppler demodulation, low-pass filtering, and
// snapshot stacking. Everything is baseband-equivalent relative to the
// central carrier; carrier phases are applied analytically since the RF
// rate cannot be sampled directly.

struct PulseTrain {
    int n_tx = 0;
    int pulses = 0;
    double sample_rate_hz = 0.0;
    double pri_s = 0.0;
    waveform::BasebandWaveform u;
    CVec weights;                // per transmit element
    std::vector<double> phi_hz;  // slow-time phase code
    CVec pulse_phase;            // [m * pulses + l] = w_m exp(j 2 pi phi_m t_l)

    // envelope of element m, pulse l on the fast-time grid
    CVec pulse_samples(int m, int l) const;
};

PulseTrain synthesize_transmit(const SystemConfig& cfg, const phasecode::PhaseCode& code,
                               const CVec& weights);

struct Scatterer {
    double range_m = 0.0;
    double azimuth_rad = 0.0;
    double depression_rad = 0.0;
    double velocity_mps = 0.0;
    cd reflectivity = cd(1.0, 0.0);
};

// Fast-time record of one receive element across a CPI.
struct ReceiveStream {
    int pulses = 0;
    int fast_len = 0;
    double sample_rate_hz = 0.0;
    CVec data; // [l * fast_len + k]

    cd& at(int l, int k) { return data[static_cast<std::size_t>(l) * fast_len + k]; }
    const cd& at(int l, int k) const { return data[static_cast<std::size_t>(l) * fast_len + k]; }
};

// One mixed (or compressed) channel set of a single receive element.
struct ChannelSet {
    int channels = 0;
    int pulses = 0;
    int fast_len = 0;
    double sample_rate_hz = 0.0;
    CVec data; // [(mp * pulses + l) * fast_len + k]

    cd& at(int mp, int l, int k) {
        return data[(static_cast<std::size_t>(mp) * pulses + l) * fast_len + k];
    }
    const cd& at(int mp, int l, int k) const {
        return data[(static_cast<std::size_t>(mp) * pulses + l) * fast_len + k];
    }
};

// Sum of all transmit carriers reflected by one scatterer, at every
// receive element. Envelope is delayed by the round trip only; element
// and Doppler delays enter as carrier phases (the standard narrowband
// assumptions). fast_len fixes the sampled fast-time window.
std::vector<ReceiveStream> simulate_point_echo(const PulseTrain& tx, const Scatterer& sc,
                                               const SystemConfig& cfg, int fast_len);

// Multi-carrier mixing of one receive stream into N_T channels; channel
// mp is the input rotated by exp(-j 2 pi mp df (t_l + tau)).
ChannelSet mix_channels(const ReceiveStream& rx, const SystemConfig& cfg);

// Per-pulse fast-time matched filter on every channel.
ChannelSet pulse_compress(const ChannelSet& chan, const waveform::BasebandWaveform& u);

// Slow-time series of each channel at one range gate.
std::vector<CVec> gate_slow_time(const ChannelSet& compressed, int gate_index);

// Shift channel mp to Doppler baseband: x[l] * exp(-j 2 pi phi_mp t_l).
CVec doppler_demodulate(const CVec& slow_time, int mp, const phasecode::PhaseCode& code,
                        const SystemConfig& cfg);

// Ideal DFT-domain brick wall keeping centered frequencies strictly
// inside (-cutoff, +cutoff). Orthogonal projection on C^L.
CVec slow_time_lowpass(const CVec& x, double cutoff_hz, double prf_hz);

// Stack the per-element, per-channel filtered series into the canonical
// snapshot ordering (transmit fastest, pulse slowest).
CVec assemble_snapshot(const std::vector<std::vector<CVec>>& filtered, const SystemConfig& cfg);

struct ChainResult {
    CVec snapshot;
    int gate_index = 0;
    double gate_delay_s = 0.0;
};

// Full pipeline for a set of scatterers observed at one range gate.
ChainResult run_chain(const SystemConfig& cfg, const phasecode::PhaseCode& code, const CVec& weights,
                      const std::vector<Scatterer>& scatterers, double gate_range_m);

// Energy of each channel's filtered output when only element tx_element
// transmits; used to measure cross-channel leakage.
std::vector<double> channel_energies(const SystemConfig& cfg, const phasecode::PhaseCode& code,
                                     int tx_element, const Scatterer& sc, double gate_range_m);

} // namespace fdastap::chain
