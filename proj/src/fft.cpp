#include "mflab/fft.hpp"

#include <stdexcept>

namespace mflab {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_inplace(cplx* data, std::size_t n, bool inverse) {
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: length must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = data[i + k];
                const cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) data[i] *= s;
    }
}

void fft_axis(cplx* data, std::size_t total, std::size_t axis_len, int rank, int axis,
              bool inverse) {
    if (rank <= 0 || axis < 0 || axis >= rank) throw std::invalid_argument("fft_axis: bad axis");
    std::size_t stride = 1;
    for (int a = rank - 1; a > axis; --a) stride *= axis_len;
    const std::size_t block = stride * axis_len;
    if (stride == 1) {
        for (std::size_t base = 0; base < total; base += axis_len)
            fft_inplace(data + base, axis_len, inverse);
        return;
    }
    std::vector<cplx> line(axis_len);
    for (std::size_t outer = 0; outer < total; outer += block) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
            cplx* p = data + outer + inner;
            for (std::size_t k = 0; k < axis_len; ++k) line[k] = p[k * stride];
            fft_inplace(line.data(), axis_len, inverse);
            for (std::size_t k = 0; k < axis_len; ++k) p[k * stride] = line[k];
        }
    }
}

}  // namespace mflab
