#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "fisherlab/grid.hpp"

namespace testutil {

inline constexpr double pi = std::numbers::pi;

// Midpoint rule on [a, b]; the evaluation points never hit the endpoints, so
// integrands with removable singularities there (or at interior lattice
// points, for the default even n) are safe.
template <typename F>
double integrate(F&& f, double a, double b, int n = 1 << 20) {
    const double h = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f(a + (i + 0.5) * h);
    return acc * h;
}

// Brute-force translational Fisher information from a closed-form density and
// its score (rho'/rho): integral of score^2 * rho.
template <typename Rho, typename Score>
double fisher_quadrature(Rho&& rho, Score&& score, double a, double b, int n = 1 << 20) {
    return integrate(
        [&](double x) {
            const double s = score(x);
            return s * s * rho(x);
        },
        a, b, n);
}

inline fisherlab::WaveFunction unit_gaussian(const fisherlab::Grid& g) {
    return fisherlab::sample(
        [](double x) { return std::pow(pi, -0.25) * std::exp(-0.5 * x * x); }, g);
}

inline double max_abs_diff(const fisherlab::WaveFunction& a, const fisherlab::WaveFunction& b) {
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.amp[i] - b.amp[i]));
    return m;
}

}  // namespace testutil
