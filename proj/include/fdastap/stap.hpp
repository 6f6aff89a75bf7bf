#pragma once

#include "fdastap/config.hpp"
#include "fdastap/model.hpp"
#include "fdastap/scene.hpp"
#include "fdastap/types.hpp"

#include <string>
#include <vector>

namespace fdastap::stap {

// Cached Cholesky factor of a covariance model (plus optional diagonal
// loading). All solves go through the factor; the matrix inverse is never
// formed explicitly.
struct HermFactor {
    CMat chol;
};

HermFactor factor(const scene::CovarianceModel& cov, double loading = 0.0);
CVec solve(const HermFactor& f, const CVec& b);

// MVDR weights v = R^-1 q / (q^H R^-1 q); distortionless by construction.
CVec mvdr_weights(const HermFactor& f, const CVec& q_target);
CVec mvdr_weights(const scene::CovarianceModel& cov, const CVec& q_target);

// Output SINR of an arbitrary beamformer v against the scene with
// transmit weights w, in dB.
double output_sinr_db(const CVec& v, const CVec& w, const scene::Scene& sc,
                      const SystemConfig& cfg,
                      scene::CnrMode cnr_mode = scene::CnrMode::per_patch);

// SINR rewritten as a ratio of quadratic forms in the transmit weights:
// SNR * (w^H Ct w) / (w^H Cc w + eta). Ct is rank one through v.
struct QuadraticForms {
    CMat ct;
    CMat cc;
    double eta = 0.0;
    double snr = 0.0; // linear
};

QuadraticForms sinr_quadratic_forms(const CVec& v, const scene::Scene& sc, const SystemConfig& cfg,
                                    scene::CnrMode cnr_mode = scene::CnrMode::per_patch);
double sinr_from_forms_db(const QuadraticForms& fm, const CVec& w);

// Azimuth-Doppler evaluation grid (degrees and Hz, both ends included).
struct GridSpec {
    double azimuth_start_deg = 0.0;
    double azimuth_stop_deg = 180.0;
    double azimuth_step_deg = 1.0;
    double doppler_start_hz = -800.0;
    double doppler_stop_hz = 800.0;
    double doppler_step_hz = 10.0;

    bool operator==(const GridSpec&) const = default;

    std::vector<double> azimuth_axis() const;
    std::vector<double> doppler_axis() const;
    void validate() const;
};

struct PatternGrid {
    std::vector<double> azimuth_deg;
    std::vector<double> doppler_hz;
    std::vector<double> value_db; // [i_az * doppler_hz.size() + i_dop]
    double range_m = 0.0;
    model::Mode mode = model::Mode::fda;

    double at(std::size_t i_az, std::size_t i_dop) const {
        return value_db[i_az * doppler_hz.size() + i_dop];
    }
};

// Capon-type interference energy map 1 / (q^H R^-1 q) at unit transmit
// weights. Azimuth converts to conic angle at the target depression.
PatternGrid interference_spectrum(const scene::Scene& sc, const SystemConfig& cfg,
                                  const GridSpec& grid, model::Mode mode = model::Mode::fda,
                                  scene::CnrMode cnr_mode = scene::CnrMode::per_patch,
                                  double loading = 0.0);
PatternGrid interference_spectrum_serial(const scene::Scene& sc, const SystemConfig& cfg,
                                         const GridSpec& grid, model::Mode mode = model::Mode::fda,
                                         scene::CnrMode cnr_mode = scene::CnrMode::per_patch,
                                         double loading = 0.0);

// |v^H q(cell)|^2 with v adapted once for the scene target.
PatternGrid adapted_pattern(const scene::Scene& sc, const SystemConfig& cfg, const GridSpec& grid,
                            model::Mode mode = model::Mode::fda,
                            scene::CnrMode cnr_mode = scene::CnrMode::per_patch,
                            double loading = 0.0);
PatternGrid adapted_pattern_serial(const scene::Scene& sc, const SystemConfig& cfg,
                                   const GridSpec& grid, model::Mode mode = model::Mode::fda,
                                   scene::CnrMode cnr_mode = scene::CnrMode::per_patch,
                                   double loading = 0.0);

enum class CutAxis { azimuth, doppler };

struct PatternCut {
    CutAxis axis = CutAxis::azimuth; // the axis that varies in the output
    double fixed_value = 0.0;        // grid line actually used
    std::vector<double> axis_values;
    std::vector<double> value_db;
};

// Extract the row or column nearest to `at`. axis names the coordinate
// being held fixed: cutting at doppler 400 Hz yields a series over azimuth.
PatternCut pattern_cut(const PatternGrid& grid, CutAxis fixed_axis, double at);

enum class LossRef { eq64, matched };

// SINR loss against the interference-free coherent bound, evaluated at a
// fixed azimuth for a sweep of presumed target Dopplers. eq64 keeps the
// published 20 log10 convention; matched reports the plain power ratio.
std::vector<double> sinr_loss_curve(const scene::Scene& sc, const SystemConfig& cfg,
                                    const std::vector<double>& dopplers_hz, double azimuth_rad,
                                    model::Mode mode = model::Mode::fda,
                                    scene::CnrMode cnr_mode = scene::CnrMode::per_patch,
                                    double loading = 0.0, LossRef ref = LossRef::eq64);

const char* mode_name(model::Mode m);

} // namespace fdastap::stap
