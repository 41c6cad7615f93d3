#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace epr {

inline bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

// In-place iterative radix-2 FFT. Length must be a power of two.
// The inverse transform includes the 1/n scaling.
void fft(std::vector<std::complex<double>>& data, bool inverse = false);

}  // namespace epr
