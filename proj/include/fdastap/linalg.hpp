#pragma once

#include "fdastap/types.hpp"

namespace fdastap::linalg {

// ---- transforms ----------------------------------------------------------

// In-place radix-2 FFT, n must be a power of two.
void fft_pow2(CVec& x, bool inverse);

// Direct DFT for arbitrary length (slow-time axes are short).
CVec dft(const CVec& x, bool inverse);

std::size_t next_pow2(std::size_t n);

// Correlation of x with u: y[k] = scale * sum_j conj(u[j]) x[k+j],
// output length equals len(x). FFT path and the direct reference must
// agree to high precision; tests pin 1e-9 relative.
CVec correlate_fft(const CVec& x, const CVec& u, double scale);
CVec correlate_direct(const CVec& x, const CVec& u, double scale);

// ---- Hermitian positive definite solves ----------------------------------

// In-place lower Cholesky A = L L^H. Returns false if a pivot is not
// strictly positive. The parallel version distributes the trailing update
// across rows; every entry sees the same update order, so serial and
// parallel factors are bitwise identical.
bool cholesky(CMat& a);
bool cholesky_serial(CMat& a);

// Solve L L^H x = b given the factor from cholesky().
CVec cholesky_solve(const CMat& l, const CVec& b);

// ---- rank-1 accumulation kernels ------------------------------------------

// acc += sum_k weight[k] * v_k v_k^H, vectors stored as rows of vecs.
// Parallel over output rows, patch order fixed, so the result is bitwise
// independent of the thread count.
void accumulate_outer(CMat& acc, const CMat& vecs, const std::vector<double>& weights);
void accumulate_outer_serial(CMat& acc, const CMat& vecs, const std::vector<double>& weights);

} // namespace fdastap::linalg
