#include "fdastap/linalg.hpp"

#include <cmath>

namespace fdastap::linalg {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_pow2(CVec& x, bool inverse) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_pow2: length must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const cd wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cd u = x[i + k];
                const cd t = x[i + k + len / 2] * w;
                x[i + k] = u + t;
                x[i + k + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (cd& v : x) v *= inv;
    }
}

CVec dft(const CVec& x, bool inverse) {
    const std::size_t n = x.size();
    CVec y(n, cd(0.0, 0.0));
    const double sgn = inverse ? 2.0 : -2.0;
    for (std::size_t k = 0; k < n; ++k) {
        cd s(0.0, 0.0);
        for (std::size_t l = 0; l < n; ++l) {
            const double ang = sgn * kPi * static_cast<double>(k) * static_cast<double>(l) /
                               static_cast<double>(n);
            s += x[l] * cd(std::cos(ang), std::sin(ang));
        }
        y[k] = inverse ? s / static_cast<double>(n) : s;
    }
    return y;
}

CVec correlate_direct(const CVec& x, const CVec& u, double scale) {
    if (x.empty() || u.empty()) throw std::invalid_argument("correlate: empty input");
    CVec y(x.size(), cd(0.0, 0.0));
    for (std::size_t k = 0; k < x.size(); ++k) {
        cd s(0.0, 0.0);
        const std::size_t jmax = std::min(u.size(), x.size() - k);
        for (std::size_t j = 0; j < jmax; ++j) s += std::conj(u[j]) * x[k + j];
        y[k] = s * scale;
    }
    return y;
}

CVec correlate_fft(const CVec& x, const CVec& u, double scale) {
    if (x.empty() || u.empty()) throw std::invalid_argument("correlate: empty input");
    const std::size_t n = next_pow2(x.size() + u.size());
    CVec fx(n, cd(0.0, 0.0)), fu(n, cd(0.0, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) fx[i] = x[i];
    for (std::size_t i = 0; i < u.size(); ++i) fu[i] = u[i];
    fft_pow2(fx, false);
    fft_pow2(fu, false);
    for (std::size_t i = 0; i < n; ++i) fx[i] *= std::conj(fu[i]); // correlation, not convolution
    fft_pow2(fx, true);
    CVec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = fx[i] * scale;
    return y;
}

namespace {

// One step of the right-looking factorization: finish column k, then
// subtract its outer product from the trailing block.
bool cholesky_column(CMat& a, std::size_t k) {
    const double pivot = a(k, k).real();
    if (!(pivot > 0.0)) return false;
    const double lkk = std::sqrt(pivot);
    a(k, k) = cd(lkk, 0.0);
    for (std::size_t i = k + 1; i < a.rows; ++i) a(i, k) /= lkk;
    return true;
}

} // namespace

bool cholesky_serial(CMat& a) {
    if (a.rows != a.cols) throw std::invalid_argument("cholesky: matrix must be square");
    const std::size_t n = a.rows;
    for (std::size_t k = 0; k < n; ++k) {
        if (!cholesky_column(a, k)) return false;
        // trailing update walks each row contiguously
        for (std::size_t i = k + 1; i < n; ++i) {
            const cd aik = a(i, k);
            cd* row = &a.a[i * n];
            for (std::size_t j = k + 1; j <= i; ++j) row[j] -= aik * std::conj(a(j, k));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = cd(0.0, 0.0);
    return true;
}

bool cholesky(CMat& a) {
    if (a.rows != a.cols) throw std::invalid_argument("cholesky: matrix must be square");
    const std::size_t n = a.rows;
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
        if (!cholesky_column(a, k)) {
            ok = false;
            break;
        }
        // rows are independent within one k step; the guard skips the
        // barrier once the trailing block is small
#pragma omp parallel for schedule(dynamic, 16) if (n - k > 96)
        for (long long is = static_cast<long long>(k) + 1; is < static_cast<long long>(n); ++is) {
            const std::size_t i = static_cast<std::size_t>(is);
            const cd aik = a(i, k);
            cd* row = &a.a[i * n];
            for (std::size_t j = k + 1; j <= i; ++j) row[j] -= aik * std::conj(a(j, k));
        }
    }
    if (!ok) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = cd(0.0, 0.0);
    return true;
}

CVec cholesky_solve(const CMat& l, const CVec& b) {
    const std::size_t n = l.rows;
    if (b.size() != n) throw std::invalid_argument("cholesky_solve: size mismatch");
    CVec y(b);
    for (std::size_t i = 0; i < n; ++i) {
        cd s = y[i];
        for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * y[j];
        y[i] = s / l(i, i);
    }
    // back substitution against L^H
    for (std::size_t ii = n; ii-- > 0;) {
        cd s = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= std::conj(l(j, ii)) * y[j];
        y[ii] = s / std::conj(l(ii, ii));
    }
    return y;
}

void accumulate_outer_serial(CMat& acc, const CMat& vecs, const std::vector<double>& weights) {
    if (acc.rows != acc.cols || acc.rows != vecs.cols || vecs.rows != weights.size())
        throw std::invalid_argument("accumulate_outer: size mismatch");
    const std::size_t n = acc.rows;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < vecs.rows; ++k) {
            const cd vi = weights[k] * vecs(k, i);
            const cd* row = &vecs.a[k * n];
            cd* out = &acc.a[i * n];
            for (std::size_t j = 0; j < n; ++j) out[j] += vi * std::conj(row[j]);
        }
    }
}

void accumulate_outer(CMat& acc, const CMat& vecs, const std::vector<double>& weights) {
    if (acc.rows != acc.cols || acc.rows != vecs.cols || vecs.rows != weights.size())
        throw std::invalid_argument("accumulate_outer: size mismatch");
    const std::size_t n = acc.rows;
#pragma omp parallel for schedule(static)
    for (long long is = 0; is < static_cast<long long>(n); ++is) {
        const std::size_t i = static_cast<std::size_t>(is);
        for (std::size_t k = 0; k < vecs.rows; ++k) {
            const cd vi = weights[k] * vecs(k, i);
            const cd* row = &vecs.a[k * n];
            cd* out = &acc.a[i * n];
            for (std::size_t j = 0; j < n; ++j) out[j] += vi * std::conj(row[j]);
        }
    }
}

} // namespace fdastap::linalg
