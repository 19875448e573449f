#pragma once

#include <span>
#include <vector>

namespace fisherlab {

// d^order f / dx^order of a real periodic-decaying sequence via the FFT.
// order 1 zeroes the Nyquist bin (odd derivative of a real signal has no
// consistent Nyquist component); order 2 keeps it. order in {1, 2}.
std::vector<double> spectral_derivative(std::span<const double> f, double dx, int order);

// 4th-order central differences with zero extension beyond the ends
// (appropriate for decayed tails).
std::vector<double> fd_derivative4(std::span<const double> f, double dx);
std::vector<double> fd_second_derivative4(std::span<const double> f, double dx);

}  // namespace fisherlab
