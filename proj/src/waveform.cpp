#include "fdastap/waveform.hpp"

#include "fdastap/linalg.hpp"

#include <cmath>

namespace fdastap::waveform {

cd BasebandWaveform::eval(double t) const {
    // sub-femtosecond guard so grid-aligned arguments rounded one ulp
    // past a support edge do not drop the boundary sample
    constexpr double eps = 1e-15;
    if (t < -eps || t >= duration_s - eps) return cd(0.0, 0.0);
    const double rate = bandwidth_hz / duration_s;
    const double u = t - duration_s / 2.0;
    const double phase = kPi * rate * u * u;
    return amplitude * cd(std::cos(phase), std::sin(phase));
}

double BasebandWaveform::energy() const {
    double e = 0.0;
    for (const cd& s : samples) e += std::norm(s);
    return e / sample_rate_hz;
}

BasebandWaveform lfm_baseband(double duration_s, double bandwidth_hz, double sample_rate_hz) {
    if (duration_s <= 0.0 || sample_rate_hz <= 0.0 || bandwidth_hz < 0.0)
        throw std::invalid_argument("lfm_baseband: nonpositive parameter");
    if (sample_rate_hz < 2.0 * bandwidth_hz)
        throw std::invalid_argument("lfm_baseband: undersampled, need fs >= 2B");
    const std::size_t count = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (count < 8) throw std::invalid_argument("lfm_baseband: pulse must span at least 8 samples");

    BasebandWaveform w;
    w.sample_rate_hz = sample_rate_hz;
    w.duration_s = duration_s;
    w.bandwidth_hz = bandwidth_hz;
    // constant modulus chirp: unit energy needs |u|^2 * count / fs = 1
    w.amplitude = std::sqrt(sample_rate_hz / static_cast<double>(count));
    w.samples.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        w.samples[k] = w.eval(static_cast<double>(k) / sample_rate_hz);
    return w;
}

cd ambiguity(const BasebandWaveform& u, double delay_s, double doppler_hz) {
    if (std::abs(delay_s) > u.duration_s) return cd(0.0, 0.0);
    const double dt = 1.0 / u.sample_rate_hz;
    cd acc(0.0, 0.0);
    for (std::size_t k = 0; k < u.samples.size(); ++k) {
        const double t = static_cast<double>(k) * dt;
        const cd shifted = u.eval(t - delay_s);
        if (shifted == cd(0.0, 0.0)) continue;
        const double ph = 2.0 * kPi * t * doppler_hz;
        acc += u.samples[k] * cd(std::cos(ph), std::sin(ph)) * std::conj(shifted);
    }
    return acc * dt;
}

CVec matched_filter(const CVec& x, const BasebandWaveform& u) {
    if (x.size() < u.samples.size())
        throw std::invalid_argument("matched_filter: input shorter than the pulse");
    return linalg::correlate_fft(x, u.samples, 1.0 / u.sample_rate_hz);
}

CVec matched_filter_direct(const CVec& x, const BasebandWaveform& u) {
    if (x.size() < u.samples.size())
        throw std::invalid_argument("matched_filter: input shorter than the pulse");
    return linalg::correlate_direct(x, u.samples, 1.0 / u.sample_rate_hz);
}

} // namespace fdastap::waveform
