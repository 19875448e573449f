#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fisherlab/fisher.hpp"
#include "fisherlab/grid.hpp"
#include "fisherlab/series.hpp"

namespace fisherlab {

enum class RegridPolicy { fixed, auto_expand };

struct EvolutionPlan {
    Grid base_grid;
    std::vector<double> t_values;  // ascending, >= 0, finite
    RegridPolicy regrid_policy = RegridPolicy::auto_expand;
};

// Grid cap: FISHERLAB_MAX_N environment value if set, else 2^22.
long default_max_n();

struct AutoGridOptions {
    double coverage = 12.0;        // half-extent in units of sigma_x(t)
    double mass_eps = 1e-12;       // momentum mass allowed outside p_cut
    double momentum_safety = 2.5;  // Nyquist margin over p_cut (densities carry 2x the
                                   // amplitude bandwidth, so this must stay > 2)
    long max_n = default_max_n();
};

// Exact free evolution: multiply exp(-i p^2 t / 2) in momentum space. Unitary;
// |psi~| pointwise invariant; t may be negative. Throws the grid-resource
// error when the evolved state's boundary mass exceeds boundary_tol (the grid
// was too small for this t).
WaveFunction evolve_free(const WaveFunction& wf0, double t, double boundary_tol = 1e-10);

// Pick a grid that holds the state up to t_max: extent covers
// coverage * sigma_x(t) around the drifting center for all t in [0, t_max]
// (ballistic spreading sigma_x(t)^2 = sigma_x(0)^2 + sigma_p^2 t^2), and
// dx = pi / (momentum_safety * p_cut) with p_cut the smallest cutoff holding
// all but mass_eps of the momentum mass. n is rounded up to a power of two.
Grid auto_grid(const WaveFunction& wf0, double t_max, const AutoGridOptions& opts = {});

// Band-limited embedding of a sampled state into a grid covering at least
// `extent` with spacing at most `dx_max`: zero-pad extension in x (same dx,
// integer extent multiple), then spectral refinement (integer factor). Exact
// for states that have decayed at the boundary.
WaveFunction regrid_to_cover(const WaveFunction& wf, double extent, double dx_max, long max_n);

// Initial state plus an optional closed-form evaluator at t = 0. When
// eval_t0 is set, regridding re-evaluates analytically instead of resampling.
struct StateSource {
    WaveFunction wf0;
    std::function<complexd(double)> eval_t0;
    std::string label;
};

struct SeriesOptions {
    Estimator estimator = Estimator::density_form;
    FisherOptions fisher;
    AutoGridOptions grid;
    int threads = 0;  // 0 = hardware concurrency
    double boundary_tol = 1e-10;
};

// Evolve the source to every t in the plan (each time point independently,
// one phase multiplication from t = 0), compute the Fisher product, and
// assemble the curve ordered by t. The i_p column is checked for constancy
// within 1e-8 relative (free evolution cannot change it) and the run fails
// loudly if that does not hold. Time points run on a bounded worker pool;
// assembly order is deterministic.
CurveSeries evolve_series(const StateSource& source, const EvolutionPlan& plan,
                          const SeriesOptions& opts = {});

}  // namespace fisherlab
