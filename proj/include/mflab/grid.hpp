#pragma once

#include <stdexcept>

#include "mflab/fft.hpp"

namespace mflab {

// Uniform periodic grid on [-L/2, L/2), d = 1, M a power of two.
struct SpatialGrid {
    int points = 0;
    double length = 0.0;

    double spacing() const { return length / points; }
    double x(int i) const { return -0.5 * length + i * spacing(); }
    // Signed wave number of FFT bin n.
    double k(int n) const { return kTwoPi * signed_freq(n, points) / length; }

    void validate() const {
        if (points < 2 || !is_power_of_two(static_cast<std::size_t>(points)))
            throw std::invalid_argument("spatial grid: points must be a power of two");
        if (length <= 0.0) throw std::invalid_argument("spatial grid: length must be positive");
    }

    bool operator==(const SpatialGrid&) const = default;
};

}  // namespace mflab
