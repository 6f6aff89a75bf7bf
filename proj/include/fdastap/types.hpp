#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fdastap {

using cd = std::complex<double>;
using CVec = std::vector<cd>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

// Dense row-major complex matrix. Sized for desk-scale STAP problems
// (a few thousand rows at most), so no blocking or sparsity.
struct CMat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    CVec a;

    CMat() = default;
    CMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, cd(0.0, 0.0)) {}

    cd& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = cd(1.0, 0.0);
        return m;
    }
};

inline cd dot_conj(const CVec& x, const CVec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot_conj: size mismatch");
    cd s(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

inline double norm2(const CVec& x) {
    double s = 0.0;
    for (const cd& v : x) s += std::norm(v);
    return s;
}

// y = M x
inline CVec matvec(const CMat& m, const CVec& x) {
    if (m.cols != x.size()) throw std::invalid_argument("matvec: size mismatch");
    CVec y(m.rows, cd(0.0, 0.0));
    for (std::size_t i = 0; i < m.rows; ++i) {
        cd s(0.0, 0.0);
        const cd* row = &m.a[i * m.cols];
        for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

} // namespace fdastap
