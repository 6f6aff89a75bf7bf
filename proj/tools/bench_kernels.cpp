// Timing comparison of the OpenMP kernels against their serial reference
// implementations: clutter covariance assembly, Cholesky factorization,
// and the adapted-pattern grid scan.

#include "fdastap/linalg.hpp"
#include "fdastap/scenario_io.hpp"
#include "fdastap/scene.hpp"
#include "fdastap/stap.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fdastap;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double max_abs_diff(const CVec& a, const CVec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

int main(int argc, char** argv) {
    int pulses = 32;
    if (argc > 1) pulses = std::atoi(argv[1]);

    io::RunConfig rc = io::default_config();
    rc.system.pulses = pulses;
    const SystemConfig& cfg = rc.system;
    const std::size_t dim = cfg.snapshot_dim();
#ifdef _OPENMP
    std::printf("threads: %d, snapshot dim: %zu\n", omp_get_max_threads(), dim);
#else
    std::printf("threads: 1 (no OpenMP), snapshot dim: %zu\n", dim);
#endif

    const auto patches = scene::all_clutter_patches(rc.scenario, cfg);
    CMat vecs(patches.size(), dim);
    std::vector<double> cnr(patches.size());
    const CVec ones(cfg.n_tx, cd(1.0, 0.0));
    for (std::size_t i = 0; i < patches.size(); ++i) {
        const CVec q = model::composite_steering(patches[i].range_m, patches[i].conic_rad,
                                                 patches[i].doppler_hz, ones, cfg);
        std::copy(q.begin(), q.end(), vecs.a.begin() + i * dim);
        cnr[i] = patches[i].cnr;
    }

    double t0 = now();
    CMat acc_s(dim, dim);
    linalg::accumulate_outer_serial(acc_s, vecs, cnr);
    const double t_acc_s = now() - t0;

    t0 = now();
    CMat acc_p(dim, dim);
    linalg::accumulate_outer(acc_p, vecs, cnr);
    const double t_acc_p = now() - t0;
    std::printf("covariance accumulate: serial %.3f s, parallel %.3f s, speedup %.2fx, "
                "max |diff| %.3g\n",
                t_acc_s, t_acc_p, t_acc_s / t_acc_p, max_abs_diff(acc_s.a, acc_p.a));

    for (std::size_t i = 0; i < dim; ++i) acc_s(i, i) += cd(1.0, 0.0);
    CMat chol_s = acc_s;
    t0 = now();
    linalg::cholesky_serial(chol_s);
    const double t_chol_s = now() - t0;
    CMat chol_p = acc_s;
    t0 = now();
    linalg::cholesky(chol_p);
    const double t_chol_p = now() - t0;
    std::printf("cholesky:              serial %.3f s, parallel %.3f s, speedup %.2fx, "
                "max |diff| %.3g\n",
                t_chol_s, t_chol_p, t_chol_s / t_chol_p, max_abs_diff(chol_s.a, chol_p.a));

    stap::GridSpec grid = rc.grid;
    grid.azimuth_step_deg = 2.0;
    grid.doppler_step_hz = 20.0;
    t0 = now();
    const auto pat_s = stap::adapted_pattern_serial(rc.scenario, cfg, grid);
    const double t_pat_s = now() - t0;
    t0 = now();
    const auto pat_p = stap::adapted_pattern(rc.scenario, cfg, grid);
    const double t_pat_p = now() - t0;
    double dmax = 0.0;
    for (std::size_t i = 0; i < pat_s.value_db.size(); ++i)
        dmax = std::max(dmax, std::abs(pat_s.value_db[i] - pat_p.value_db[i]));
    std::printf("pattern (dense vs structured):  %.3f s vs %.3f s, speedup %.2fx, "
                "max |diff| %.3g dB\n",
                t_pat_s, t_pat_p, t_pat_s / t_pat_p, dmax);

    t0 = now();
    const auto spec_s = stap::interference_spectrum_serial(rc.scenario, cfg, grid);
    const double t_spec_s = now() - t0;
    t0 = now();
    const auto spec_p = stap::interference_spectrum(rc.scenario, cfg, grid);
    const double t_spec_p = now() - t0;
    dmax = 0.0;
    for (std::size_t i = 0; i < spec_s.value_db.size(); ++i)
        dmax = std::max(dmax, std::abs(spec_s.value_db[i] - spec_p.value_db[i]));
    std::printf("spectrum (dense vs structured): %.3f s vs %.3f s, speedup %.2fx, "
                "max |diff| %.3g dB\n",
                t_spec_s, t_spec_p, t_spec_s / t_spec_p, dmax);
    return 0;
}
