#pragma once

#include <span>

#include "fisherlab/grid.hpp"

namespace fisherlab {

enum class Estimator { density_form, amplitude_form };
enum class DerivScheme { spectral, finite_difference };

struct FisherOptions {
    double floor_rel = 1e-12;                     // density floor, relative to max
    DerivScheme scheme = DerivScheme::spectral;   // derivative scheme for densities
    double mass_tol = 1e-6;                       // how close to 1 the density must integrate
};

struct FisherDiagnostics {
    long long node_count = 0;      // isolated sub-floor points handled by the node limit
    double regularized_mass = 0.0; // total probability mass below the floor
};

struct FisherResult {
    double i_x = 0.0;
    double i_p = 0.0;
    double product = 0.0;
    Estimator estimator = Estimator::density_form;
    FisherDiagnostics diagnostics;
};

// Translational Fisher information of a normalized density sampled on a
// uniform lattice: sum (rho'_m)^2 / rho_m * spacing over points at or above
// floor_rel*max(rho). An isolated sub-floor point whose neighbors are both
// kept is an isolated node of the density; there the integrand has the finite
// limit 2*rho'' (quadratic zero), which is added as 2*max(rho'',0)*spacing.
// Longer sub-floor runs contribute nothing. All sub-floor mass is reported in
// diagnostics.
double fisher_density(std::span<const double> density, double spacing,
                      const FisherOptions& opts = {}, FisherDiagnostics* diag = nullptr);

// Amplitude form 4 * sum (d|psi|/dx)^2 * spacing, derivative by 4th-order
// central differences (|psi| has kinks at nodes, so no spectral derivative).
double fisher_amplitude(const WaveFunction& wf);

// i_x from |psi|^2, i_p from |to_momentum(psi)|^2, same estimator for both.
FisherResult fisher_product(const WaveFunction& wf, Estimator est = Estimator::density_form,
                            const FisherOptions& opts = {});

}  // namespace fisherlab
