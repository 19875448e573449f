#include "fisherlab/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fisherlab/errors.hpp"
#include "fisherlab/spectral.hpp"

namespace fisherlab {

double fisher_density(std::span<const double> density, double spacing, const FisherOptions& opts,
                      FisherDiagnostics* diag) {
    const int n = static_cast<int>(density.size());
    std::vector<double> rho(density.begin(), density.end());
    double mass = 0.0, max_rho = 0.0;
    for (double& r : rho) {
        if (r < -1e-14) fail_bad_state("density has negative values");
        if (r < 0.0) r = 0.0;
        mass += r;
        max_rho = std::max(max_rho, r);
    }
    mass *= spacing;
    if (std::abs(mass - 1.0) > opts.mass_tol)
        fail_bad_state("density does not integrate to 1 (mass = " + std::to_string(mass) + ")");

    const bool spectral = opts.scheme == DerivScheme::spectral;
    const std::vector<double> d1 =
        spectral ? spectral_derivative(rho, spacing, 1) : fd_derivative4(rho, spacing);

    const double floor = opts.floor_rel * max_rho;
    FisherDiagnostics d;
    double value = 0.0;
    std::vector<double> d2;  // computed only if an isolated node shows up
    for (int i = 0; i < n; ++i) {
        if (rho[i] >= floor) {
            value += d1[i] * d1[i] / rho[i];
            continue;
        }
        d.regularized_mass += rho[i] * spacing;
        const bool isolated = i > 0 && i < n - 1 && rho[i - 1] >= floor && rho[i + 1] >= floor;
        if (!isolated) continue;
        // Isolated node: rho ~ rho''/2 (x-x0)^2 nearby, so (rho')^2/rho -> 2 rho''.
        if (d2.empty())
            d2 = spectral ? spectral_derivative(rho, spacing, 2)
                          : fd_second_derivative4(rho, spacing);
        value += 2.0 * std::max(d2[i], 0.0);  // integrand limit; times spacing below
        ++d.node_count;
    }
    value *= spacing;
    if (diag) *diag = d;
    return value;
}

double fisher_amplitude(const WaveFunction& wf) {
    const double n2 = norm_sq(wf);
    if (std::abs(n2 - 1.0) > 1e-6)
        fail_bad_state("fisher_amplitude requires a normalized state");
    const int n = wf.size();
    std::vector<double> mag(n);
    for (int i = 0; i < n; ++i) mag[i] = std::abs(wf.amp[i]);
    const std::vector<double> d = fd_derivative4(mag, wf.spacing());
    double s = 0.0;
    for (double v : d) s += v * v;
    return 4.0 * s * wf.spacing();
}

FisherResult fisher_product(const WaveFunction& wf, Estimator est, const FisherOptions& opts) {
    if (wf.space != Space::position) fail_usage("fisher_product expects a position-space state");
    const WaveFunction wfp = to_momentum(wf);

    FisherResult r;
    r.estimator = est;
    if (est == Estimator::density_form) {
        const int n = wf.size();
        std::vector<double> rx(n), rp(n);
        for (int i = 0; i < n; ++i) {
            rx[i] = std::norm(wf.amp[i]);
            rp[i] = std::norm(wfp.amp[i]);
        }
        FisherDiagnostics dx_diag, dp_diag;
        r.i_x = fisher_density(rx, wf.grid.dx, opts, &dx_diag);
        r.i_p = fisher_density(rp, wf.grid.dp(), opts, &dp_diag);
        r.diagnostics.node_count = dx_diag.node_count + dp_diag.node_count;
        r.diagnostics.regularized_mass = dx_diag.regularized_mass + dp_diag.regularized_mass;
    } else {
        r.i_x = fisher_amplitude(wf);
        r.i_p = fisher_amplitude(wfp);
    }
    r.product = r.i_x * r.i_p;
    return r;
}

}  // namespace fisherlab
