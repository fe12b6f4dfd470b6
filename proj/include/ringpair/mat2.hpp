#pragma once

#include <array>
#include <complex>

namespace ringpair {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

// Dense 2x2 complex matrix, row-major. Index 0 is the signal (a) channel and
// index 1 the idler (b^dagger) channel.
struct Mat2 {
    std::array<cplx, 4> m{};

    constexpr Mat2() = default;
    constexpr Mat2(cplx aa, cplx ab, cplx ba, cplx bb) : m{aa, ab, ba, bb} {}

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 diag(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }

    constexpr cplx& operator()(int i, int j) { return m[2 * i + j]; }
    constexpr const cplx& operator()(int i, int j) const { return m[2 * i + j]; }

    cplx aa() const { return m[0]; }
    cplx ab() const { return m[1]; }
    cplx ba() const { return m[2]; }
    cplx bb() const { return m[3]; }

    cplx det() const { return m[0] * m[3] - m[1] * m[2]; }

    // Adjugate over determinant; the caller checks det() != 0.
    Mat2 inverse() const {
        const cplx d = det();
        return {m[3] / d, -m[1] / d, -m[2] / d, m[0] / d};
    }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.m[0] * y.m[0] + x.m[1] * y.m[2], x.m[0] * y.m[1] + x.m[1] * y.m[3],
                x.m[2] * y.m[0] + x.m[3] * y.m[2], x.m[2] * y.m[1] + x.m[3] * y.m[3]};
    }
    friend Mat2 operator+(const Mat2& x, const Mat2& y) {
        return {x.m[0] + y.m[0], x.m[1] + y.m[1], x.m[2] + y.m[2], x.m[3] + y.m[3]};
    }
    friend Mat2 operator-(const Mat2& x, const Mat2& y) {
        return {x.m[0] - y.m[0], x.m[1] - y.m[1], x.m[2] - y.m[2], x.m[3] - y.m[3]};
    }
    friend Mat2 operator*(cplx s, const Mat2& x) {
        return {s * x.m[0], s * x.m[1], s * x.m[2], s * x.m[3]};
    }
};

// max_ij |x_ij - y_ij| / max(|x_ij|, |y_ij|); entries that are zero in both
// (off-diagonals at r = 0) contribute 0.
double max_relative_difference(const Mat2& x, const Mat2& y);

// Same, but each entry is normalised by max(|x_ij|, |y_ij|, scale_ij). Use it
// when an entry is a difference of larger terms (G_kk near critical coupling).
double max_scaled_difference(const Mat2& x, const Mat2& y, const std::array<double, 4>& scale);

}  // namespace ringpair
