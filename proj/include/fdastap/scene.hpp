#pragma once

#include "fdastap/config.hpp"
#include "fdastap/model.hpp"
#include "fdastap/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fdastap::scene {

struct TargetDesc {
    double range_m = 3000.0;
    double azimuth_rad = 0.0;
    double depression_rad = 0.0;
    double velocity_mps = 0.0;
    double snr_db = 0.0;

    bool operator==(const TargetDesc&) const = default;
};

// Iso-range ring of ground patches at uniform azimuth spacing, endpoints
// included. CNR is quoted per patch unless cnr-mode says total.
struct ClutterRing {
    double range_m = 3006.0;
    double azimuth_start_rad = 0.0;
    double azimuth_stop_rad = 0.0;
    int patches = 181;
    double depression_rad = 0.0;
    double cnr_db = 20.0;

    bool operator==(const ClutterRing&) const = default;
};

// Barrage jammer: one spatial direction, white across pulses and channels.
struct Jammer {
    double azimuth_rad = 0.0;
    double depression_rad = 0.0;
    double jnr_db = 20.0;

    bool operator==(const Jammer&) const = default;
};

struct Scene {
    TargetDesc target;
    std::vector<ClutterRing> clutter_rings;
    std::vector<Jammer> jammers;

    bool operator==(const Scene&) const = default;
};

enum class CnrMode { per_patch, total };

struct ClutterPatch {
    double range_m = 0.0;
    double conic_rad = 0.0;
    double doppler_hz = 0.0;
    double cnr = 0.0; // linear
};

// Ground patches of one ring; Doppler follows the platform-motion ridge
// f_d = (2 v_a / lambda) cos(psi).
std::vector<ClutterPatch> clutter_patches(const ClutterRing& ring, const SystemConfig& cfg,
                                          CnrMode mode = CnrMode::per_patch);

std::vector<ClutterPatch> all_clutter_patches(const Scene& sc, const SystemConfig& cfg,
                                              CnrMode mode = CnrMode::per_patch);

// Sum of CNR-weighted steering outer products over the patches.
CMat covariance_clutter(const std::vector<ClutterPatch>& patches, const CVec& weights,
                        const SystemConfig& cfg);

// I_L kron (sum_j JNR_j a_R a_R^H) kron I_NT.
CMat covariance_jamming(const std::vector<Jammer>& jammers, const SystemConfig& cfg);

// One random draw of a barrage-jammer snapshot: sqrt(JNR) u_slow kron a_R
// kron u_tx with standard circular Gaussian factors. Monte-Carlo oracle
// for the closed-form jammer covariance.
CVec sample_jamming_snapshot(const Jammer& jam, const SystemConfig& cfg, std::uint64_t seed);

struct CovarianceTerm {
    std::string label;
    double trace = 0.0;
};

// Noise-normalized interference-plus-noise covariance: clutter + jamming
// + identity. Hermitian and positive definite by construction.
struct CovarianceModel {
    CMat matrix;
    std::vector<CovarianceTerm> terms;
    double loading = 0.0;
};

CovarianceModel covariance_total(const Scene& sc, const CVec& weights, const SystemConfig& cfg,
                                 CnrMode mode = CnrMode::per_patch);

// Same construction against an alternative steering model (unit transmit
// weights); the FDA mode must reproduce covariance_total with w = 1.
CovarianceModel covariance_total_mode(const Scene& sc, const model::ModeModel& mm,
                                      CnrMode mode = CnrMode::per_patch);

// Target helpers shared by the processing layer.
double target_conic(const TargetDesc& t);
double target_doppler(const TargetDesc& t, const SystemConfig& cfg);
CVec target_steering(const TargetDesc& t, const CVec& weights, const SystemConfig& cfg);

} // namespace fdastap::scene
