#pragma once

#include <complex>
#include <span>

namespace fisherlab::fft {

// Unnormalized DFT: out_j = sum_m in_m * exp(sign * 2*pi*i * j*m / n),
// sign = -1 forward, +1 backward. Thread-safe; deterministic output for a
// given size (plans use fixed flags on aligned scratch buffers).
void dft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign);

}  // namespace fisherlab::fft
