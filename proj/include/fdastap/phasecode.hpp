#pragma once

#include "fdastap/config.hpp"
#include "fdastap/types.hpp"

#include <vector>

namespace fdastap::phasecode {

// Per-element slow-time phase slopes, in Hz. Element m picks up the
// extra pulse-to-pulse phase exp(j 2 pi phi[m] t_l), which shifts its
// echo into its own slow-time Doppler band.
struct PhaseCode {
    std::vector<double> phi_hz;
    double design_f_td_hz = 0.0;

    int size() const { return static_cast<int>(phi_hz.size()); }
};

// Band center of channel m for a target Doppler f_td:
// D_m = ((f_c + (m-1) df) / f_c) f_td + m df + phi_m, reduced mod PRF
// into [0, PRF). Only the mod-PRF value is observable in slow time.
std::vector<double> doppler_centers(const PhaseCode& code, double f_td_hz, const SystemConfig& cfg);

// Canonical design: phi_m = (m-1) PRF / N_T - m df. At f_td = 0 the band
// centers land on (m-1) PRF / N_T exactly, with equal circular gaps.
PhaseCode design_phase_codes(const SystemConfig& cfg);

enum class GapConstraint { none, adjacent, wraparound };

struct FeasibilityReport {
    bool feasible = false;
    bool precondition_ok = true; // false when f_td_max >= PRF / N_T
    double min_gap_hz = 0.0;     // minimum circular gap over the checked endpoints
    double required_gap_hz = 0.0;
    double tolerance_hz = 1.0;
    GapConstraint violated = GapConstraint::none;
};

// Checks the band-separation constraints at f_td in {-max, 0, +max}.
// Gaps are affine in f_td, so the endpoints bound the whole interval.
// Adjacent gaps correspond to the in-band constraint set, the wrap gap
// to the fold-over set; both are evaluated as circular (mod PRF) gaps.
FeasibilityReport validate_phase_codes(const PhaseCode& code, double f_td_max_hz,
                                       const SystemConfig& cfg);

// Smallest circular distance between the sorted centers, plus which kind
// of gap attains it. Exposed for tests that scan f_td densely.
std::pair<double, GapConstraint> min_circular_gap(const std::vector<double>& centers_hz,
                                                  double prf_hz);

} // namespace fdastap::phasecode
