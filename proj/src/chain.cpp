#include "fdastap/chain.hpp"

#include "fdastap/geometry.hpp"
#include "fdastap/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace fdastap::chain {

namespace {

cd unit_phase(double phase_rad) { return cd(std::cos(phase_rad), std::sin(phase_rad)); }

} // namespace

CVec PulseTrain::pulse_samples(int m, int l) const {
    CVec s(u.samples);
    const cd scale = pulse_phase[static_cast<std::size_t>(m) * pulses + l];
    for (cd& v : s) v *= scale;
    return s;
}

PulseTrain synthesize_transmit(const SystemConfig& cfg, const phasecode::PhaseCode& code,
                               const CVec& weights) {
    if (code.size() != cfg.n_tx || static_cast<int>(weights.size()) != cfg.n_tx)
        throw std::invalid_argument("synthesize_transmit: code and weights must have n_tx entries");
    PulseTrain tx;
    tx.n_tx = cfg.n_tx;
    tx.pulses = cfg.pulses;
    tx.sample_rate_hz = cfg.sample_rate_hz;
    tx.pri_s = cfg.pri_s();
    tx.u = waveform::lfm_baseband(cfg.pulse_duration_s, cfg.bandwidth_hz, cfg.sample_rate_hz);
    tx.weights = weights;
    tx.phi_hz = code.phi_hz;
    tx.pulse_phase.resize(static_cast<std::size_t>(cfg.n_tx) * cfg.pulses);
    for (int m = 0; m < cfg.n_tx; ++m)
        for (int l = 0; l < cfg.pulses; ++l) {
            const double tl = static_cast<double>(l) * tx.pri_s;
            tx.pulse_phase[static_cast<std::size_t>(m) * cfg.pulses + l] =
                weights[m] * unit_phase(2.0 * kPi * code.phi_hz[m] * tl);
        }
    return tx;
}

std::vector<ReceiveStream> simulate_point_echo(const PulseTrain& tx, const Scatterer& sc,
                                               const SystemConfig& cfg, int fast_len) {
    if (sc.range_m <= 0.0) throw std::domain_error("simulate_point_echo: range must be positive");
    if (std::abs(sc.velocity_mps) >= kSpeedOfLight)
        throw std::domain_error("simulate_point_echo: velocity must be below c");

    const double psi = geometry::conic_angle(sc.azimuth_rad, sc.depression_rad);
    const auto d = geometry::delays(sc.range_m, psi, cfg);
    if (d.round_trip_s + cfg.pulse_duration_s > cfg.pri_s())
        throw std::domain_error("simulate_point_echo: echo delay beyond one PRI is unsupported");
    const double f_td = geometry::doppler_from_velocity(sc.velocity_mps, cfg.wavelength_m);
    const double fs = cfg.sample_rate_hz;
    const double tr = cfg.pri_s();

    // envelope of carrier m in the fast-time window, including the
    // residual carrier-offset tone relative to f_c
    const int k_lo = std::max(0, static_cast<int>(std::floor(d.round_trip_s * fs)));
    const int k_hi = std::min(fast_len, static_cast<int>(
                                            std::ceil((d.round_trip_s + cfg.pulse_duration_s) * fs)) +
                                            1);
    CMat env(cfg.n_tx, std::max(0, k_hi - k_lo));
    for (int m = 0; m < cfg.n_tx; ++m)
        for (int k = k_lo; k < k_hi; ++k) {
            const double tau = static_cast<double>(k) / fs;
            const cd e = tx.u.eval(tau - d.round_trip_s);
            env(m, k - k_lo) =
                e * unit_phase(2.0 * kPi * static_cast<double>(m) * cfg.freq_offset_hz * tau);
        }

    std::vector<ReceiveStream> out(cfg.n_rx);
    for (int n = 0; n < cfg.n_rx; ++n) {
        ReceiveStream& rs = out[n];
        rs.pulses = cfg.pulses;
        rs.fast_len = fast_len;
        rs.sample_rate_hz = fs;
        rs.data.assign(static_cast<std::size_t>(cfg.pulses) * fast_len, cd(0.0, 0.0));
        for (int m = 0; m < cfg.n_tx; ++m) {
            const double fm = cfg.carrier_m(m);
            // spatial and range carrier phases of carrier m at element n
            const double spatial = 2.0 * kPi * fm *
                                   (static_cast<double>(m) * d.tx_step_s +
                                    static_cast<double>(n) * d.rx_step_s);
            const cd base = sc.reflectivity * unit_phase(spatial - 2.0 * kPi * fm * d.round_trip_s);
            for (int l = 0; l < cfg.pulses; ++l) {
                const double tl = static_cast<double>(l) * tr;
                // slow-time Doppler of carrier m plus the carrier-offset tone at t_l
                const double slow = 2.0 * kPi * (fm / cfg.carrier_hz) * f_td * tl +
                                    2.0 * kPi * static_cast<double>(m) * cfg.freq_offset_hz * tl;
                const cd scale = base * unit_phase(slow) *
                                 tx.pulse_phase[static_cast<std::size_t>(m) * cfg.pulses + l];
                cd* row = &rs.data[static_cast<std::size_t>(l) * fast_len];
                for (int k = k_lo; k < k_hi; ++k) row[k] += scale * env(m, k - k_lo);
            }
        }
    }
    return out;
}

ChannelSet mix_channels(const ReceiveStream& rx, const SystemConfig& cfg) {
    ChannelSet cs;
    cs.channels = cfg.n_tx;
    cs.pulses = rx.pulses;
    cs.fast_len = rx.fast_len;
    cs.sample_rate_hz = rx.sample_rate_hz;
    cs.data.resize(static_cast<std::size_t>(cfg.n_tx) * rx.pulses * rx.fast_len);
    const double fs = rx.sample_rate_hz;
    const double tr = cfg.pri_s();
    for (int mp = 0; mp < cfg.n_tx; ++mp) {
        CVec tone(rx.fast_len);
        for (int k = 0; k < rx.fast_len; ++k)
            tone[k] = unit_phase(-2.0 * kPi * static_cast<double>(mp) * cfg.freq_offset_hz *
                                 static_cast<double>(k) / fs);
        for (int l = 0; l < rx.pulses; ++l) {
            const double tl = static_cast<double>(l) * tr;
            const cd slow =
                unit_phase(-2.0 * kPi * static_cast<double>(mp) * cfg.freq_offset_hz * tl);
            const cd* src = &rx.data[static_cast<std::size_t>(l) * rx.fast_len];
            cd* dst = &cs.data[(static_cast<std::size_t>(mp) * rx.pulses + l) * rx.fast_len];
            for (int k = 0; k < rx.fast_len; ++k) dst[k] = src[k] * slow * tone[k];
        }
    }
    return cs;
}

ChannelSet pulse_compress(const ChannelSet& chan, const waveform::BasebandWaveform& u) {
    ChannelSet out = chan;
    for (int mp = 0; mp < chan.channels; ++mp)
        for (int l = 0; l < chan.pulses; ++l) {
            CVec x(chan.fast_len);
            const cd* src = &chan.data[(static_cast<std::size_t>(mp) * chan.pulses + l) *
                                       chan.fast_len];
            std::copy(src, src + chan.fast_len, x.begin());
            const CVec y = waveform::matched_filter(x, u);
            cd* dst =
                &out.data[(static_cast<std::size_t>(mp) * chan.pulses + l) * chan.fast_len];
            std::copy(y.begin(), y.end(), dst);
        }
    return out;
}

std::vector<CVec> gate_slow_time(const ChannelSet& compressed, int gate_index) {
    if (gate_index < 0 || gate_index >= compressed.fast_len)
        throw std::out_of_range("gate_slow_time: gate outside the sampled window");
    std::vector<CVec> out(compressed.channels);
    for (int mp = 0; mp < compressed.channels; ++mp) {
        out[mp].resize(compressed.pulses);
        for (int l = 0; l < compressed.pulses; ++l) out[mp][l] = compressed.at(mp, l, gate_index);
    }
    return out;
}

CVec doppler_demodulate(const CVec& slow_time, int mp, const phasecode::PhaseCode& code,
                        const SystemConfig& cfg) {
    CVec y(slow_time.size());
    const double tr = cfg.pri_s();
    for (std::size_t l = 0; l < slow_time.size(); ++l) {
        const double tl = static_cast<double>(l) * tr;
        y[l] = slow_time[l] * unit_phase(-2.0 * kPi * code.phi_hz[mp] * tl);
    }
    return y;
}

CVec slow_time_lowpass(const CVec& x, double cutoff_hz, double prf_hz) {
    const int len = static_cast<int>(x.size());
    if (len < 2) throw std::invalid_argument("slow_time_lowpass: need at least two pulses");
    CVec spec = linalg::dft(x, false);
    for (int k = 0; k < len; ++k) {
        const double f = (k <= len / 2) ? static_cast<double>(k) * prf_hz / len
                                        : static_cast<double>(k - len) * prf_hz / len;
        if (!(std::abs(f) < cutoff_hz)) spec[k] = cd(0.0, 0.0);
    }
    return linalg::dft(spec, true);
}

CVec assemble_snapshot(const std::vector<std::vector<CVec>>& filtered, const SystemConfig& cfg) {
    if (static_cast<int>(filtered.size()) != cfg.n_rx)
        throw std::invalid_argument("assemble_snapshot: expected one channel group per receive element");
    CVec snap(cfg.snapshot_dim());
    for (int n = 0; n < cfg.n_rx; ++n) {
        if (static_cast<int>(filtered[n].size()) != cfg.n_tx)
            throw std::invalid_argument("assemble_snapshot: expected n_tx channels per element");
        for (int mp = 0; mp < cfg.n_tx; ++mp)
            for (int l = 0; l < cfg.pulses; ++l)
                snap[snapshot_index(cfg, mp, n, l)] = filtered[n][mp][l];
    }
    return snap;
}

namespace {

int fast_window(const SystemConfig& cfg, double max_delay_s) {
    return static_cast<int>(std::ceil((max_delay_s + cfg.pulse_duration_s) * cfg.sample_rate_hz)) + 4;
}

std::vector<std::vector<CVec>> process_elements(const std::vector<ReceiveStream>& rx,
                                                const SystemConfig& cfg,
                                                const phasecode::PhaseCode& code,
                                                const waveform::BasebandWaveform& u,
                                                int gate_index) {
    const double cutoff = cfg.prf_hz / (2.0 * static_cast<double>(cfg.n_tx));
    std::vector<std::vector<CVec>> filtered(rx.size());
#pragma omp parallel for schedule(dynamic)
    for (long long ns = 0; ns < static_cast<long long>(rx.size()); ++ns) {
        const std::size_t n = static_cast<std::size_t>(ns);
        const ChannelSet mixed = mix_channels(rx[n], cfg);
        const ChannelSet compressed = pulse_compress(mixed, u);
        const std::vector<CVec> gated = gate_slow_time(compressed, gate_index);
        std::vector<CVec> per_channel(cfg.n_tx);
        for (int mp = 0; mp < cfg.n_tx; ++mp) {
            const CVec demod = doppler_demodulate(gated[mp], mp, code, cfg);
            per_channel[mp] = slow_time_lowpass(demod, cutoff, cfg.prf_hz);
        }
        filtered[n] = std::move(per_channel);
    }
    return filtered;
}

} // namespace

ChainResult run_chain(const SystemConfig& cfg, const phasecode::PhaseCode& code, const CVec& weights,
                      const std::vector<Scatterer>& scatterers, double gate_range_m) {
    const PulseTrain tx = synthesize_transmit(cfg, code, weights);
    const double gate_delay = 2.0 * gate_range_m / kSpeedOfLight;
    double max_delay = gate_delay;
    for (const Scatterer& sc : scatterers)
        max_delay = std::max(max_delay, 2.0 * sc.range_m / kSpeedOfLight);
    const int fast_len = fast_window(cfg, max_delay);

    std::vector<ReceiveStream> rx(cfg.n_rx);
    for (int n = 0; n < cfg.n_rx; ++n) {
        rx[n].pulses = cfg.pulses;
        rx[n].fast_len = fast_len;
        rx[n].sample_rate_hz = cfg.sample_rate_hz;
        rx[n].data.assign(static_cast<std::size_t>(cfg.pulses) * fast_len, cd(0.0, 0.0));
    }
    for (const Scatterer& sc : scatterers) {
        const auto echo = simulate_point_echo(tx, sc, cfg, fast_len);
        for (int n = 0; n < cfg.n_rx; ++n)
            for (std::size_t i = 0; i < echo[n].data.size(); ++i) rx[n].data[i] += echo[n].data[i];
    }

    ChainResult res;
    res.gate_index = static_cast<int>(std::llround(gate_delay * cfg.sample_rate_hz));
    res.gate_delay_s = gate_delay;
    const auto filtered = process_elements(rx, cfg, code, tx.u, res.gate_index);
    res.snapshot = assemble_snapshot(filtered, cfg);
    return res;
}

std::vector<double> channel_energies(const SystemConfig& cfg, const phasecode::PhaseCode& code,
                                     int tx_element, const Scatterer& sc, double gate_range_m) {
    CVec w(cfg.n_tx, cd(0.0, 0.0));
    w[tx_element] = cd(1.0, 0.0);
    const ChainResult res = run_chain(cfg, code, w, {sc}, gate_range_m);
    std::vector<double> energy(cfg.n_tx, 0.0);
    for (int mp = 0; mp < cfg.n_tx; ++mp)
        for (int n = 0; n < cfg.n_rx; ++n)
            for (int l = 0; l < cfg.pulses; ++l)
                energy[mp] += std::norm(res.snapshot[snapshot_index(cfg, mp, n, l)]);
    return energy;
}

} // namespace fdastap::chain
