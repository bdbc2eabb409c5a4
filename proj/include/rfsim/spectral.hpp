#pragma once

#include <bit>
#include <cstddef>
#include <span>
#include <vector>

#include "rfsim/geometry.hpp"

namespace rfsim {

/**
 * Unnormalized discrete Fourier transform,
 * X_k = sum_n x_n exp(sign * i 2 pi k n / N), sign = -1 forward, +1 inverse.
 *
 * Power-of-two lengths use an iterative radix-2 FFT; other lengths fall back
 * to the direct O(N^2) sum with exact integer reduction of the twiddle index.
 */
inline std::vector<Phasor> dft(std::span<const Phasor> x, int sign) {
  const std::size_t n = x.size();
  std::vector<Phasor> out(x.begin(), x.end());
  if (n <= 1) return out;
  const double dir = sign < 0 ? -1.0 : 1.0;

  if (!std::has_single_bit(n)) {
    for (std::size_t k = 0; k < n; ++k) {
      Phasor acc{0.0, 0.0};
      for (std::size_t m = 0; m < n; ++m) {
        const auto idx = static_cast<double>((k * m) % n);
        acc += x[m] * std::polar(1.0, dir * kTwoPi * idx / static_cast<double>(n));
      }
      out[k] = acc;
    }
    return out;
  }

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(out[i], out[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        // Twiddles evaluated directly rather than by recurrence to avoid drift.
        const Phasor w =
            std::polar(1.0, dir * kTwoPi * static_cast<double>(k) / static_cast<double>(len));
        const Phasor u = out[start + k];
        const Phasor v = out[start + k + half] * w;
        out[start + k] = u + v;
        out[start + k + half] = u - v;
      }
    }
  }
  return out;
}

}  // namespace rfsim
