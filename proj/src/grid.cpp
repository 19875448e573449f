#include "fisherlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fisherlab/errors.hpp"
#include "fisherlab/fft.hpp"

namespace fisherlab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
const double inv_sqrt_2pi = 1.0 / std::sqrt(two_pi);
}  // namespace

Grid make_grid(double x_min, double x_max, int n) {
    if (!(x_max > x_min)) fail_usage("grid extent must be positive (x_max > x_min)");
    if (n < 8) fail_usage("grid needs at least 8 samples, got " + std::to_string(n));
    return Grid{x_min, (x_max - x_min) / n, n};
}

WaveFunction sample(const std::function<complexd(double)>& f, const Grid& grid) {
    WaveFunction wf;
    wf.grid = grid;
    wf.space = Space::position;
    wf.amp.resize(grid.n);
    for (int m = 0; m < grid.n; ++m) {
        const complexd v = f(grid.x(m));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            fail_bad_state("non-finite sample at x = " + std::to_string(grid.x(m)));
        wf.amp[m] = v;
    }
    return wf;
}

double norm_sq(const WaveFunction& wf) {
    double s = 0.0;
    for (const complexd& a : wf.amp) s += std::norm(a);
    return s * wf.spacing();
}

double boundary_mass(const WaveFunction& wf) {
    const int n = wf.size();
    const int edge = std::max(1, n / 40);
    double s = 0.0;
    for (int m = 0; m < edge; ++m) s += std::norm(wf.amp[m]) + std::norm(wf.amp[n - 1 - m]);
    return s * wf.spacing();
}

WaveFunction normalize(const WaveFunction& wf, double boundary_tol) {
    const double n2 = norm_sq(wf);
    if (!(n2 > 0.0)) fail_bad_state("cannot normalize a zero-norm state");
    WaveFunction out = wf;
    const double inv = 1.0 / std::sqrt(n2);
    for (complexd& a : out.amp) a *= inv;
    out.grid_too_small = boundary_mass(out) > boundary_tol;
    return out;
}

// Index bookkeeping for the centered momentum lattice: ascending-order index a
// corresponds to frequency j = a - n/2, stored by the DFT in bin (j + n) % n.
WaveFunction to_momentum(const WaveFunction& wf) {
    if (wf.space != Space::position) fail_usage("to_momentum expects a position-space state");
    const int n = wf.size();
    const Grid& g = wf.grid;
    std::vector<complexd> bins(n);
    fft::dft(wf.amp, bins, -1);

    WaveFunction out;
    out.grid = g;
    out.space = Space::momentum;
    out.grid_too_small = wf.grid_too_small;
    out.amp.resize(n);
    const double scale = g.dx * inv_sqrt_2pi;
    for (int a = 0; a < n; ++a) {
        const int b = (a + n - n / 2) % n;
        const double phase = -g.x_min * g.p(a);
        out.amp[a] = scale * std::polar(1.0, phase) * bins[b];
    }
    return out;
}

WaveFunction to_position(const WaveFunction& wf) {
    if (wf.space != Space::momentum) fail_usage("to_position expects a momentum-space state");
    const int n = wf.size();
    const Grid& g = wf.grid;

    // psi(x_m) = dp/sqrt(2 pi) * sum_j exp(+i x_min p_j) psi~(p_j) exp(2 pi i j m / n)
    std::vector<complexd> bins(n);
    for (int a = 0; a < n; ++a) {
        const int b = (a + n - n / 2) % n;
        bins[b] = std::polar(1.0, g.x_min * g.p(a)) * wf.amp[a];
    }
    std::vector<complexd> vals(n);
    fft::dft(bins, vals, +1);

    WaveFunction out;
    out.grid = g;
    out.space = Space::position;
    out.grid_too_small = wf.grid_too_small;
    out.amp.resize(n);
    const double scale = g.dp() * inv_sqrt_2pi;
    for (int m = 0; m < n; ++m) out.amp[m] = scale * vals[m];
    return out;
}

double moment(const WaveFunction& wf, int order) {
    if (order < 0 || order > 4) fail_usage("moment order must be in 0..4");
    const double n2 = norm_sq(wf);
    if (std::abs(n2 - 1.0) > 1e-9)
        fail_bad_state("moment requires a normalized state (norm^2 = " + std::to_string(n2) + ")");
    double s = 0.0;
    for (int m = 0; m < wf.size(); ++m)
        s += std::pow(wf.coordinate(m), order) * std::norm(wf.amp[m]);
    return s * wf.spacing();
}

}  // namespace fisherlab
