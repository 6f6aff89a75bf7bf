#include "fdastap/phasecode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdastap::phasecode {

namespace {

double mod_prf(double f, double prf) {
    double r = std::fmod(f, prf);
    if (r < 0.0) r += prf;
    return r;
}

} // namespace

std::vector<double> doppler_centers(const PhaseCode& code, double f_td_hz, const SystemConfig& cfg) {
    if (code.size() != cfg.n_tx)
        throw std::invalid_argument("doppler_centers: code length must equal n_tx");
    std::vector<double> centers(code.phi_hz.size());
    for (int m = 0; m < code.size(); ++m) {
        const double scale = cfg.carrier_m(m) / cfg.carrier_hz;
        const double d = scale * f_td_hz + static_cast<double>(m + 1) * cfg.freq_offset_hz +
                         code.phi_hz[m];
        centers[m] = mod_prf(d, cfg.prf_hz);
    }
    return centers;
}

PhaseCode design_phase_codes(const SystemConfig& cfg) {
    if (cfg.n_tx < 1 || cfg.prf_hz <= 0.0)
        throw std::invalid_argument("design_phase_codes: need n_tx >= 1 and positive PRF");
    PhaseCode code;
    code.design_f_td_hz = 0.0;
    code.phi_hz.resize(cfg.n_tx);
    const double band = cfg.prf_hz / static_cast<double>(cfg.n_tx);
    for (int m = 0; m < cfg.n_tx; ++m)
        code.phi_hz[m] = static_cast<double>(m) * band -
                         static_cast<double>(m + 1) * cfg.freq_offset_hz;
    return code;
}

std::pair<double, GapConstraint> min_circular_gap(const std::vector<double>& centers_hz,
                                                  double prf_hz) {
    if (centers_hz.size() < 2) return {prf_hz, GapConstraint::none};
    std::vector<double> s(centers_hz);
    std::sort(s.begin(), s.end());
    double best = s.back() - s.front(); // placeholder, overwritten below
    GapConstraint kind = GapConstraint::adjacent;
    best = prf_hz;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double g = s[i + 1] - s[i];
        if (g < best) {
            best = g;
            kind = GapConstraint::adjacent;
        }
    }
    const double wrap = s.front() + prf_hz - s.back();
    if (wrap < best) {
        best = wrap;
        kind = GapConstraint::wraparound;
    }
    return {best, kind};
}

FeasibilityReport validate_phase_codes(const PhaseCode& code, double f_td_max_hz,
                                       const SystemConfig& cfg) {
    if (f_td_max_hz < 0.0)
        throw std::invalid_argument("validate_phase_codes: f_td_max must be nonnegative");
    FeasibilityReport rep;
    rep.required_gap_hz = cfg.prf_hz / static_cast<double>(cfg.n_tx);
    rep.precondition_ok = f_td_max_hz < rep.required_gap_hz;

    rep.min_gap_hz = cfg.prf_hz;
    const double endpoints[3] = {-f_td_max_hz, 0.0, f_td_max_hz};
    for (double f : endpoints) {
        const auto centers = doppler_centers(code, f, cfg);
        const auto [gap, kind] = min_circular_gap(centers, cfg.prf_hz);
        if (gap < rep.min_gap_hz) {
            rep.min_gap_hz = gap;
            rep.violated = kind;
        }
    }
    rep.feasible = rep.precondition_ok && rep.min_gap_hz >= rep.required_gap_hz - rep.tolerance_hz;
    if (rep.feasible) rep.violated = GapConstraint::none;
    return rep;
}

} // namespace fdastap::phasecode
