#include "fisherlab/spectral.hpp"

#include <complex>
#include <numbers>

#include "fisherlab/errors.hpp"
#include "fisherlab/fft.hpp"

namespace fisherlab {

std::vector<double> spectral_derivative(std::span<const double> f, double dx, int order) {
    if (order != 1 && order != 2) fail_usage("spectral_derivative supports orders 1 and 2");
    const int n = static_cast<int>(f.size());
    std::vector<std::complex<double>> buf(n), spec(n);
    for (int m = 0; m < n; ++m) buf[m] = f[m];
    fft::dft(buf, spec, -1);

    const double dk = 2.0 * std::numbers::pi / (n * dx);
    for (int b = 0; b < n; ++b) {
        const int j = (b < (n + 1) / 2) ? b : b - n;  // wrapped frequency index
        const double k = j * dk;
        if (order == 1) {
            const bool nyquist = (n % 2 == 0) && (b == n / 2);
            spec[b] *= nyquist ? 0.0 : std::complex<double>(0.0, k);
        } else {
            spec[b] *= -k * k;
        }
    }
    fft::dft(spec, buf, +1);
    std::vector<double> out(n);
    for (int m = 0; m < n; ++m) out[m] = buf[m].real() / n;
    return out;
}

namespace {
inline double at(std::span<const double> f, int i) {
    return (i < 0 || i >= static_cast<int>(f.size())) ? 0.0 : f[i];
}
}  // namespace

std::vector<double> fd_derivative4(std::span<const double> f, double dx) {
    const int n = static_cast<int>(f.size());
    std::vector<double> out(n);
    const double inv = 1.0 / (12.0 * dx);
    for (int i = 0; i < n; ++i)
        out[i] = (-at(f, i + 2) + 8.0 * at(f, i + 1) - 8.0 * at(f, i - 1) + at(f, i - 2)) * inv;
    return out;
}

std::vector<double> fd_second_derivative4(std::span<const double> f, double dx) {
    const int n = static_cast<int>(f.size());
    std::vector<double> out(n);
    const double inv = 1.0 / (12.0 * dx * dx);
    for (int i = 0; i < n; ++i)
        out[i] = (-at(f, i + 2) + 16.0 * at(f, i + 1) - 30.0 * at(f, i) + 16.0 * at(f, i - 1) -
                  at(f, i - 2)) *
                 inv;
    return out;
}

}  // namespace fisherlab
