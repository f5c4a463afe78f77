#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mflab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

bool is_power_of_two(std::size_t n);

// In-place radix-2 FFT, length must be a power of two.
// Forward: X[k] = sum_j x[j] e^{-2pi i jk/n}.  Inverse applies 1/n.
void fft_inplace(cplx* data, std::size_t n, bool inverse);

inline void fft(std::vector<cplx>& v, bool inverse = false) {
    fft_inplace(v.data(), v.size(), inverse);
}

// Transform along one axis of a row-major tensor with `rank` axes of
// length `axis_len` each (total = axis_len^rank).  Axis 0 is slowest.
void fft_axis(cplx* data, std::size_t total, std::size_t axis_len, int rank, int axis,
              bool inverse);

// Signed frequency index for FFT bin n of an M-point transform:
// 0,1,...,M/2-1,-M/2,...,-1.
inline long signed_freq(std::size_t n, std::size_t m) {
    return (n < m / 2) ? static_cast<long>(n) : static_cast<long>(n) - static_cast<long>(m);
}

}  // namespace mflab
