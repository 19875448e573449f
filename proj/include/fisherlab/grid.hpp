#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace fisherlab {

using complexd = std::complex<double>;

// Uniform position lattice x_m = x_min + m*dx, m = 0..n-1, with the induced
// FFT momentum lattice p_j = 2*pi*j/(n*dx), j = -floor(n/2) .. ceil(n/2)-1.
// The duality dx*dp*n = 2*pi holds exactly by construction.
struct Grid {
    double x_min = 0.0;
    double dx = 1.0;
    int n = 0;

    double x(int m) const { return x_min + m * dx; }
    double x_max() const { return x_min + n * dx; }
    double extent() const { return n * dx; }
    double dp() const { return 2.0 * std::numbers::pi / (n * dx); }
    double p(int m) const { return (m - n / 2) * dp(); }  // ascending-order index
    double p_min() const { return p(0); }
    double p_max() const { return p(n - 1); }

    bool operator==(const Grid&) const = default;
};

Grid make_grid(double x_min, double x_max, int n);

enum class Space { position, momentum };

// Complex amplitudes on a grid. `grid` is always the underlying position
// lattice; when space == momentum the amplitudes live on the induced momentum
// lattice, ordered ascending in p, and the grid still remembers where the
// position samples sit (needed to invert the transform).
struct WaveFunction {
    Grid grid;
    std::vector<complexd> amp;
    Space space = Space::position;
    bool grid_too_small = false;  // set by normalize() when boundary mass is excessive

    int size() const { return grid.n; }
    double spacing() const { return space == Space::position ? grid.dx : grid.dp(); }
    double coordinate(int m) const { return space == Space::position ? grid.x(m) : grid.p(m); }
};

// Pointwise evaluation of f on the grid; not normalized.
WaveFunction sample(const std::function<complexd(double)>& f, const Grid& grid);

double norm_sq(const WaveFunction& wf);

// Probability mass in the outermost samples (max(1, n/40) points per edge).
double boundary_mass(const WaveFunction& wf);

// Rescale to unit norm; flags grid_too_small when the boundary mass of the
// normalized state exceeds boundary_tol.
WaveFunction normalize(const WaveFunction& wf, double boundary_tol = 1e-10);

// Unitary Fourier transform pair,
//   psi~(p_j) = dx/sqrt(2 pi) * sum_m exp(-i x_m p_j) psi(x_m),
// FFT-accelerated with the phase correction for x_min != 0. Parseval holds to
// machine precision; round trips are identity up to rounding.
WaveFunction to_momentum(const WaveFunction& wf);
WaveFunction to_position(const WaveFunction& wf);

// <coordinate^order> in the wave function's own space; requires unit norm
// (within 1e-9) and order in 0..4.
double moment(const WaveFunction& wf, int order);

}  // namespace fisherlab
