#include "fdastap/stap.hpp"

#include "fdastap/geometry.hpp"
#include "fdastap/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace fdastap::stap {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

model::ModeModel scene_mode_model(const scene::Scene& sc, const SystemConfig& cfg,
                                  model::Mode mode) {
    return model::make_mode_model(cfg, mode, scene::target_conic(sc.target));
}

// (C(r, psi, f_d))^H v without materializing C: entry m sums the snapshot
// components that carry transmit channel m.
CVec steering_adjoint_apply(double range_m, double conic_rad, double doppler_hz,
                            const SystemConfig& cfg, const CVec& v) {
    const CVec at = model::steering_transmit(range_m, conic_rad, cfg);
    const CVec ar = model::steering_receive(conic_rad, cfg);
    const CVec b = model::steering_doppler(doppler_hz, cfg.pulses, cfg.prf_hz);
    CVec out(cfg.n_tx, cd(0.0, 0.0));
    for (int l = 0; l < cfg.pulses; ++l)
        for (int n = 0; n < cfg.n_rx; ++n) {
            const cd f = std::conj(b[l] * ar[n]);
            for (int m = 0; m < cfg.n_tx; ++m)
                out[m] += std::conj(at[m]) * f * v[snapshot_index(cfg, m, n, l)];
        }
    return out;
}

} // namespace

HermFactor factor(const scene::CovarianceModel& cov, double loading) {
    if (loading < 0.0) throw std::invalid_argument("factor: loading must be nonnegative");
    HermFactor f;
    f.chol = cov.matrix;
    for (std::size_t i = 0; i < f.chol.rows; ++i) f.chol(i, i) += cd(loading, 0.0);
    if (!linalg::cholesky(f.chol))
        throw std::runtime_error("factor: covariance is not positive definite");
    return f;
}

CVec solve(const HermFactor& f, const CVec& b) { return linalg::cholesky_solve(f.chol, b); }

CVec mvdr_weights(const HermFactor& f, const CVec& q_target) {
    CVec z = solve(f, q_target);
    const cd denom = dot_conj(q_target, z);
    if (!(denom.real() > 0.0))
        throw std::runtime_error("mvdr_weights: degenerate steering vector");
    for (cd& v : z) v /= denom;
    return z;
}

CVec mvdr_weights(const scene::CovarianceModel& cov, const CVec& q_target) {
    return mvdr_weights(factor(cov), q_target);
}

double output_sinr_db(const CVec& v, const CVec& w, const scene::Scene& sc,
                      const SystemConfig& cfg, scene::CnrMode cnr_mode) {
    const CVec qt = scene::target_steering(sc.target, w, cfg);
    if (v.size() != qt.size()) throw std::invalid_argument("output_sinr_db: dimension mismatch");
    const scene::CovarianceModel cov = scene::covariance_total(sc, w, cfg, cnr_mode);
    const CVec rv = matvec(cov.matrix, v);
    const double denom = dot_conj(v, rv).real();
    const double num = std::norm(dot_conj(v, qt));
    const double snr = db_to_linear(sc.target.snr_db);
    return 10.0 * std::log10(snr * num / denom);
}

QuadraticForms sinr_quadratic_forms(const CVec& v, const scene::Scene& sc, const SystemConfig& cfg,
                                    scene::CnrMode cnr_mode) {
    if (v.size() != cfg.snapshot_dim())
        throw std::invalid_argument("sinr_quadratic_forms: dimension mismatch");
    QuadraticForms fm;
    fm.snr = db_to_linear(sc.target.snr_db);
    fm.ct = CMat(cfg.n_tx, cfg.n_tx);
    fm.cc = CMat(cfg.n_tx, cfg.n_tx);

    const CVec ut = steering_adjoint_apply(sc.target.range_m, scene::target_conic(sc.target),
                                           scene::target_doppler(sc.target, cfg), cfg, v);
    for (int i = 0; i < cfg.n_tx; ++i)
        for (int j = 0; j < cfg.n_tx; ++j) fm.ct(i, j) = ut[i] * std::conj(ut[j]);

    for (const auto& p : scene::all_clutter_patches(sc, cfg, cnr_mode)) {
        const CVec uc = steering_adjoint_apply(p.range_m, p.conic_rad, p.doppler_hz, cfg, v);
        for (int i = 0; i < cfg.n_tx; ++i)
            for (int j = 0; j < cfg.n_tx; ++j) fm.cc(i, j) += p.cnr * uc[i] * std::conj(uc[j]);
    }

    const CMat rj = scene::covariance_jamming(sc.jammers, cfg);
    const CVec rjv = matvec(rj, v);
    fm.eta = dot_conj(v, rjv).real() + norm2(v);
    return fm;
}

double sinr_from_forms_db(const QuadraticForms& fm, const CVec& w) {
    const double num = dot_conj(w, matvec(fm.ct, w)).real();
    const double den = dot_conj(w, matvec(fm.cc, w)).real() + fm.eta;
    return 10.0 * std::log10(fm.snr * num / den);
}

std::vector<double> GridSpec::azimuth_axis() const {
    std::vector<double> v;
    const long long n =
        static_cast<long long>(std::llround((azimuth_stop_deg - azimuth_start_deg) / azimuth_step_deg));
    for (long long i = 0; i <= n; ++i) v.push_back(azimuth_start_deg + azimuth_step_deg * i);
    return v;
}

std::vector<double> GridSpec::doppler_axis() const {
    std::vector<double> v;
    const long long n =
        static_cast<long long>(std::llround((doppler_stop_hz - doppler_start_hz) / doppler_step_hz));
    for (long long i = 0; i <= n; ++i) v.push_back(doppler_start_hz + doppler_step_hz * i);
    return v;
}

void GridSpec::validate() const {
    if (azimuth_step_deg <= 0.0 || doppler_step_hz <= 0.0)
        throw std::invalid_argument("grid: steps must be positive");
    if (azimuth_stop_deg < azimuth_start_deg || doppler_stop_hz < doppler_start_hz)
        throw std::invalid_argument("grid: stop must not precede start");
    if (azimuth_start_deg < 0.0 || azimuth_stop_deg > 180.0)
        throw std::invalid_argument("grid: azimuth must lie in [0, 180] degrees");
}

namespace {

template <typename CellFn>
PatternGrid scan_grid(const scene::Scene& sc, const GridSpec& grid, double range_m,
                      model::Mode mode, const CellFn& fn, bool parallel) {
    grid.validate();
    PatternGrid out;
    out.azimuth_deg = grid.azimuth_axis();
    out.doppler_hz = grid.doppler_axis();
    out.range_m = range_m;
    out.mode = mode;
    const std::size_t n_az = out.azimuth_deg.size();
    const std::size_t n_dop = out.doppler_hz.size();
    out.value_db.assign(n_az * n_dop, 0.0);
    const double depression = sc.target.depression_rad;

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n_az); ++i) {
            const double psi =
                geometry::conic_angle(geometry::deg2rad(out.azimuth_deg[i]), depression);
            for (std::size_t j = 0; j < n_dop; ++j)
                out.value_db[i * n_dop + j] = fn(psi, out.doppler_hz[j]);
        }
    } else {
        for (std::size_t i = 0; i < n_az; ++i) {
            const double psi =
                geometry::conic_angle(geometry::deg2rad(out.azimuth_deg[i]), depression);
            for (std::size_t j = 0; j < n_dop; ++j)
                out.value_db[i * n_dop + j] = fn(psi, out.doppler_hz[j]);
        }
    }
    return out;
}

// Dense route: one pair of triangular solves per grid cell.
PatternGrid spectrum_dense(const scene::Scene& sc, const SystemConfig& cfg, const GridSpec& grid,
                           model::Mode mode, scene::CnrMode cnr_mode, double loading,
                           bool parallel) {
    const model::ModeModel mm = scene_mode_model(sc, cfg, mode);
    const scene::CovarianceModel cov = scene::covariance_total_mode(sc, mm, cnr_mode);
    const HermFactor f = factor(cov, loading);
    const double r_t = sc.target.range_m;
    return scan_grid(
        sc, grid, r_t, mode,
        [&](double psi, double fd) {
            const CVec q = mm.steering(r_t, psi, fd);
            const double qrq = dot_conj(q, solve(f, q)).real();
            return -10.0 * std::log10(qrq); // P = 1 / (q^H R^-1 q)
        },
        parallel);
}

CMat hermitian_inverse(const HermFactor& f) {
    const std::size_t n = f.chol.rows;
    CMat inv(n, n);
#pragma omp parallel for schedule(static)
    for (long long js = 0; js < static_cast<long long>(n); ++js) {
        const std::size_t j = static_cast<std::size_t>(js);
        CVec e(n, cd(0.0, 0.0));
        e[j] = cd(1.0, 0.0);
        const CVec col = linalg::cholesky_solve(f.chol, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

// Structured route: the steering vector factors as b(f) kron s(psi), so
// q^H R^-1 q = b^H G(psi) b with the L x L reduction
// G(l, l') = s^H Rinv[l, l'] s computed once per azimuth. One matrix
// inverse replaces a solve per grid cell.
PatternGrid spectrum_structured(const scene::Scene& sc, const SystemConfig& cfg,
                                const GridSpec& grid, model::Mode mode,
                                scene::CnrMode cnr_mode, double loading) {
    grid.validate();
    const model::ModeModel mm = scene_mode_model(sc, cfg, mode);
    const scene::CovarianceModel cov = scene::covariance_total_mode(sc, mm, cnr_mode);
    const CMat rinv = hermitian_inverse(factor(cov, loading));
    const SystemConfig& mcfg = mm.cfg;
    const int pulses = mcfg.pulses;
    const std::size_t spatial = mm.dim() / pulses; // N_T N_R, or N_R for the PA model

    PatternGrid out;
    out.azimuth_deg = grid.azimuth_axis();
    out.doppler_hz = grid.doppler_axis();
    out.range_m = sc.target.range_m;
    out.mode = mode;
    const std::size_t n_az = out.azimuth_deg.size();
    const std::size_t n_dop = out.doppler_hz.size();
    out.value_db.assign(n_az * n_dop, 0.0);
    const double depression = sc.target.depression_rad;
    const double r_t = sc.target.range_m;

    std::vector<CVec> bs(n_dop);
    for (std::size_t j = 0; j < n_dop; ++j)
        bs[j] = model::steering_doppler(out.doppler_hz[j], pulses, mcfg.prf_hz);

#pragma omp parallel for schedule(dynamic)
    for (long long is = 0; is < static_cast<long long>(n_az); ++is) {
        const std::size_t i = static_cast<std::size_t>(is);
        const double psi = geometry::conic_angle(geometry::deg2rad(out.azimuth_deg[i]), depression);
        // spatial factor: the steering at any reference Doppler has
        // b(l = 0) = 1, so the leading block is s itself
        const CVec q0 = mm.steering(r_t, psi, 0.0);
        const CVec s(q0.begin(), q0.begin() + spatial);

        CMat w(mm.dim(), pulses); // w(:, l) = Rinv (e_l kron s)
        for (int l = 0; l < pulses; ++l)
            for (std::size_t r = 0; r < mm.dim(); ++r) {
                cd acc(0.0, 0.0);
                const cd* row = &rinv.a[r * mm.dim() + static_cast<std::size_t>(l) * spatial];
                for (std::size_t k = 0; k < spatial; ++k) acc += row[k] * s[k];
                w(r, l) = acc;
            }
        CMat g(pulses, pulses);
        for (int l = 0; l < pulses; ++l)
            for (int lp = 0; lp < pulses; ++lp) {
                cd acc(0.0, 0.0);
                for (std::size_t k = 0; k < spatial; ++k)
                    acc += std::conj(s[k]) * w(static_cast<std::size_t>(l) * spatial + k, lp);
                g(l, lp) = acc;
            }
        for (std::size_t j = 0; j < n_dop; ++j) {
            const CVec& b = bs[j];
            cd quad(0.0, 0.0);
            for (int l = 0; l < pulses; ++l) {
                cd inner(0.0, 0.0);
                for (int lp = 0; lp < pulses; ++lp) inner += g(l, lp) * b[lp];
                quad += std::conj(b[l]) * inner;
            }
            out.value_db[i * n_dop + j] = -10.0 * std::log10(quad.real());
        }
    }
    return out;
}

// Dense route: build the full steering vector per cell.
PatternGrid pattern_dense(const scene::Scene& sc, const SystemConfig& cfg, const GridSpec& grid,
                          model::Mode mode, scene::CnrMode cnr_mode, double loading,
                          bool parallel) {
    const model::ModeModel mm = scene_mode_model(sc, cfg, mode);
    const scene::CovarianceModel cov = scene::covariance_total_mode(sc, mm, cnr_mode);
    const HermFactor f = factor(cov, loading);
    const CVec qt = mm.steering(sc.target.range_m, scene::target_conic(sc.target),
                                scene::target_doppler(sc.target, cfg));
    const CVec v = mvdr_weights(f, qt);
    const double r_t = sc.target.range_m;
    return scan_grid(
        sc, grid, r_t, mode,
        [&](double psi, double fd) {
            const CVec q = mm.steering(r_t, psi, fd);
            return 10.0 * std::log10(std::norm(dot_conj(v, q)));
        },
        parallel);
}

// Structured route: v^H (b kron s) = sum_l b_l u_l with u_l reduced once
// per azimuth, leaving O(L) work per Doppler cell.
PatternGrid pattern_structured(const scene::Scene& sc, const SystemConfig& cfg,
                               const GridSpec& grid, model::Mode mode, scene::CnrMode cnr_mode,
                               double loading) {
    grid.validate();
    const model::ModeModel mm = scene_mode_model(sc, cfg, mode);
    const scene::CovarianceModel cov = scene::covariance_total_mode(sc, mm, cnr_mode);
    const HermFactor f = factor(cov, loading);
    const CVec qt = mm.steering(sc.target.range_m, scene::target_conic(sc.target),
                                scene::target_doppler(sc.target, cfg));
    const CVec v = mvdr_weights(f, qt);
    const SystemConfig& mcfg = mm.cfg;
    const int pulses = mcfg.pulses;
    const std::size_t spatial = mm.dim() / pulses;

    PatternGrid out;
    out.azimuth_deg = grid.azimuth_axis();
    out.doppler_hz = grid.doppler_axis();
    out.range_m = sc.target.range_m;
    out.mode = mode;
    const std::size_t n_az = out.azimuth_deg.size();
    const std::size_t n_dop = out.doppler_hz.size();
    out.value_db.assign(n_az * n_dop, 0.0);
    const double depression = sc.target.depression_rad;
    const double r_t = sc.target.range_m;

    std::vector<CVec> bs(n_dop);
    for (std::size_t j = 0; j < n_dop; ++j)
        bs[j] = model::steering_doppler(out.doppler_hz[j], pulses, mcfg.prf_hz);

#pragma omp parallel for schedule(dynamic)
    for (long long is = 0; is < static_cast<long long>(n_az); ++is) {
        const std::size_t i = static_cast<std::size_t>(is);
        const double psi = geometry::conic_angle(geometry::deg2rad(out.azimuth_deg[i]), depression);
        const CVec q0 = mm.steering(r_t, psi, 0.0);
        CVec u(pulses);
        for (int l = 0; l < pulses; ++l) {
            cd acc(0.0, 0.0);
            for (std::size_t k = 0; k < spatial; ++k)
                acc += std::conj(v[static_cast<std::size_t>(l) * spatial + k]) * q0[k];
            u[l] = acc;
        }
        for (std::size_t j = 0; j < n_dop; ++j) {
            const CVec& b = bs[j];
            cd resp(0.0, 0.0);
            for (int l = 0; l < pulses; ++l) resp += b[l] * u[l];
            out.value_db[i * n_dop + j] = 10.0 * std::log10(std::norm(resp));
        }
    }
    return out;
}

} // namespace

PatternGrid interference_spectrum(const scene::Scene& sc, const SystemConfig& cfg,
                                  const GridSpec& grid, model::Mode mode,
                                  scene::CnrMode cnr_mode, double loading) {
    return spectrum_structured(sc, cfg, grid, mode, cnr_mode, loading);
}

PatternGrid interference_spectrum_serial(const scene::Scene& sc, const SystemConfig& cfg,
                                         const GridSpec& grid, model::Mode mode,
                                         scene::CnrMode cnr_mode, double loading) {
    return spectrum_dense(sc, cfg, grid, mode, cnr_mode, loading, false);
}

PatternGrid adapted_pattern(const scene::Scene& sc, const SystemConfig& cfg, const GridSpec& grid,
                            model::Mode mode, scene::CnrMode cnr_mode, double loading) {
    return pattern_structured(sc, cfg, grid, mode, cnr_mode, loading);
}

PatternGrid adapted_pattern_serial(const scene::Scene& sc, const SystemConfig& cfg,
                                   const GridSpec& grid, model::Mode mode,
                                   scene::CnrMode cnr_mode, double loading) {
    return pattern_dense(sc, cfg, grid, mode, cnr_mode, loading, false);
}

PatternCut pattern_cut(const PatternGrid& grid, CutAxis fixed_axis, double at) {
    const std::vector<double>& fixed_vals =
        fixed_axis == CutAxis::azimuth ? grid.azimuth_deg : grid.doppler_hz;
    if (fixed_vals.empty()) throw std::out_of_range("pattern_cut: empty grid");
    if (at < fixed_vals.front() || at > fixed_vals.back())
        throw std::out_of_range("pattern_cut: cut position outside the grid");
    std::size_t best = 0;
    for (std::size_t i = 1; i < fixed_vals.size(); ++i)
        if (std::abs(fixed_vals[i] - at) < std::abs(fixed_vals[best] - at)) best = i;

    PatternCut cut;
    cut.axis = fixed_axis == CutAxis::azimuth ? CutAxis::doppler : CutAxis::azimuth;
    cut.fixed_value = fixed_vals[best];
    if (fixed_axis == CutAxis::azimuth) {
        cut.axis_values = grid.doppler_hz;
        cut.value_db.resize(grid.doppler_hz.size());
        for (std::size_t j = 0; j < grid.doppler_hz.size(); ++j) cut.value_db[j] = grid.at(best, j);
    } else {
        cut.axis_values = grid.azimuth_deg;
        cut.value_db.resize(grid.azimuth_deg.size());
        for (std::size_t i = 0; i < grid.azimuth_deg.size(); ++i) cut.value_db[i] = grid.at(i, best);
    }
    return cut;
}

std::vector<double> sinr_loss_curve(const scene::Scene& sc, const SystemConfig& cfg,
                                    const std::vector<double>& dopplers_hz, double azimuth_rad,
                                    model::Mode mode, scene::CnrMode cnr_mode, double loading,
                                    LossRef ref) {
    if (dopplers_hz.empty()) throw std::invalid_argument("sinr_loss_curve: empty Doppler list");
    const double psi = geometry::conic_angle(azimuth_rad, sc.target.depression_rad);
    // the presumed look direction follows the fixed azimuth, not the scene target
    const model::ModeModel mm = model::make_mode_model(cfg, mode, psi);
    const scene::CovarianceModel cov = scene::covariance_total_mode(sc, mm, cnr_mode);
    const HermFactor f = factor(cov, loading);
    const double r_t = sc.target.range_m;

    std::vector<double> loss(dopplers_hz.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(dopplers_hz.size()); ++i) {
        const CVec q = mm.steering(r_t, psi, dopplers_hz[i]);
        const double qrq = dot_conj(q, solve(f, q)).real();
        const double ratio = qrq / norm2(q); // 1 in an interference-free scene
        loss[i] = (ref == LossRef::eq64 ? 20.0 : 10.0) * std::log10(ratio);
    }
    return loss;
}

const char* mode_name(model::Mode m) {
    switch (m) {
    case model::Mode::fda: return "fda";
    case model::Mode::mimo: return "mimo";
    case model::Mode::pa: return "pa";
    }
    return "fda";
}

} // namespace fdastap::stap
