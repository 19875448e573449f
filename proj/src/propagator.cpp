#include "fisherlab/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "fisherlab/errors.hpp"
#include "fisherlab/fft.hpp"

namespace fisherlab {

long default_max_n() {
    static const long cap = [] {
        if (const char* env = std::getenv("FISHERLAB_MAX_N")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end && *end == '\0' && v >= 8) return v;
        }
        return 1L << 22;
    }();
    return cap;
}

WaveFunction evolve_free(const WaveFunction& wf0, double t, double boundary_tol) {
    if (wf0.space != Space::position) fail_usage("evolve_free expects a position-space state");
    if (std::abs(norm_sq(wf0) - 1.0) > 1e-9) fail_bad_state("evolve_free expects a normalized state");

    WaveFunction wfp = to_momentum(wf0);
    for (int m = 0; m < wfp.size(); ++m) {
        const double p = wfp.grid.p(m);
        wfp.amp[m] *= std::polar(1.0, -0.5 * p * p * t);
    }
    WaveFunction out = to_position(wfp);
    if (boundary_mass(out) > boundary_tol) {
        out.grid_too_small = true;
        fail_resource("evolved state reached the grid boundary (t = " + std::to_string(t) +
                      "); a larger grid is needed");
    }
    return out;
}

namespace {
int next_pow2(double x) {
    int n = 8;
    while (n < x) {
        if (n > (1 << 29)) fail_resource("grid size overflow");
        n <<= 1;
    }
    return n;
}
}  // namespace

Grid auto_grid(const WaveFunction& wf0, double t_max, const AutoGridOptions& opts) {
    if (std::abs(norm_sq(wf0) - 1.0) > 1e-9) fail_bad_state("auto_grid expects a normalized state");
    const double mean_x = moment(wf0, 1);
    const double var_x = std::max(0.0, moment(wf0, 2) - mean_x * mean_x);

    const WaveFunction wfp = to_momentum(wf0);
    const double mean_p = moment(wfp, 1);
    const double var_p = std::max(0.0, moment(wfp, 2) - mean_p * mean_p);

    // Smallest |p| cutoff holding all but mass_eps of the momentum mass.
    const int n0 = wfp.size();
    std::vector<int> order(n0);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(wfp.grid.p(a)) < std::abs(wfp.grid.p(b));
    });
    const double dp0 = wfp.grid.dp();
    double cum = 0.0;
    double p_cut = std::abs(wfp.grid.p(order.back()));
    for (int idx : order) {
        cum += std::norm(wfp.amp[idx]) * dp0;
        if (cum >= 1.0 - opts.mass_eps) {
            p_cut = std::abs(wfp.grid.p(idx));
            break;
        }
    }
    p_cut = std::max(p_cut, dp0);  // degenerate nearly-flat spectra
    const double dx = std::numbers::pi / (p_cut * opts.momentum_safety);

    const double sigma0 = std::sqrt(var_x);
    const double sigma_t = std::sqrt(var_x + var_p * t_max * t_max);
    const double c0 = mean_x;
    const double ct = mean_x + mean_p * t_max;
    const double lo = std::min(c0 - opts.coverage * sigma0, ct - opts.coverage * sigma_t);
    const double hi = std::max(c0 + opts.coverage * sigma0, ct + opts.coverage * sigma_t);

    const double n_req = (hi - lo) / dx;
    if (n_req > static_cast<double>(opts.max_n))
        fail_resource("auto grid would need n = " + std::to_string(static_cast<long>(n_req)) +
                      " > max_n = " + std::to_string(opts.max_n));
    const int n = next_pow2(n_req);
    if (n > opts.max_n)
        fail_resource("auto grid would need n = " + std::to_string(n) +
                      " > max_n = " + std::to_string(opts.max_n));
    const double mid = 0.5 * (lo + hi);
    return Grid{mid - 0.5 * n * dx, dx, n};
}

WaveFunction regrid_to_cover(const WaveFunction& wf, double extent, double dx_max, long max_n) {
    if (wf.space != Space::position) fail_usage("regrid_to_cover expects a position-space state");
    const Grid& g = wf.grid;
    const int extend = std::max(1, static_cast<int>(std::ceil(extent / g.extent() - 1e-12)));
    const int refine = std::max(1, static_cast<int>(std::ceil(g.dx / dx_max - 1e-12)));
    const long n_final = static_cast<long>(g.n) * extend * refine;
    if (n_final > max_n)
        fail_resource("regrid would need n = " + std::to_string(n_final) +
                      " > max_n = " + std::to_string(max_n));

    // Zero-pad in x: same lattice, wider extent.
    const int n1 = g.n * extend;
    const int left = (n1 - g.n) / 2;
    std::vector<complexd> padded(n1, complexd(0.0, 0.0));
    std::copy(wf.amp.begin(), wf.amp.end(), padded.begin() + left);
    Grid g1{g.x_min - left * g.dx, g.dx, n1};

    if (refine > 1) {
        // Zero-pad the spectrum: band-limited interpolation onto dx/refine.
        const int n2 = n1 * refine;
        std::vector<complexd> spec(n1), spec2(n2, complexd(0.0, 0.0));
        fft::dft(padded, spec, -1);
        for (int b = 0; b < n1; ++b) {
            const int j = (b < (n1 + 1) / 2) ? b : b - n1;
            if (n1 % 2 == 0 && (j == n1 / 2 || j == -n1 / 2)) continue;  // handled below
            spec2[(j + n2) % n2] = spec[b];
        }
        if (n1 % 2 == 0) {
            // Split the Nyquist coefficient symmetrically.
            const complexd ny = 0.5 * spec[n1 / 2];
            spec2[(n1 / 2 + n2) % n2] = ny;
            spec2[(-n1 / 2 + n2) % n2] = ny;
        }
        std::vector<complexd> vals(n2);
        fft::dft(spec2, vals, +1);
        for (complexd& v : vals) v /= static_cast<double>(n1);
        WaveFunction out;
        out.grid = Grid{g1.x_min, g1.dx / refine, n2};
        out.space = Space::position;
        out.amp = std::move(vals);
        return normalize(out);
    }

    WaveFunction out;
    out.grid = g1;
    out.space = Space::position;
    out.amp = std::move(padded);
    return normalize(out);
}

CurveSeries evolve_series(const StateSource& source, const EvolutionPlan& plan,
                          const SeriesOptions& opts) {
    const auto& ts = plan.t_values;
    if (ts.empty()) fail_usage("evolution plan has no time values");
    for (size_t i = 0; i < ts.size(); ++i) {
        if (!std::isfinite(ts[i]) || ts[i] < 0.0) fail_usage("plan times must be finite and >= 0");
        if (i > 0 && ts[i] <= ts[i - 1]) fail_usage("plan times must be strictly ascending");
    }

    // One working grid serves the whole series: requirements grow monotonically
    // with t, so the grid chosen for the last time covers every earlier one, and
    // a fixed lattice keeps the i_p column exactly comparable across t.
    WaveFunction base = source.wf0;
    if (plan.regrid_policy == RegridPolicy::auto_expand) {
        AutoGridOptions gopts = opts.grid;
        const Grid g = auto_grid(source.wf0, ts.back(), gopts);
        if (source.eval_t0) {
            base = normalize(sample(source.eval_t0, g), opts.boundary_tol);
            if (base.grid_too_small)
                fail_resource("auto grid cannot hold the initial state (boundary mass too high)");
        } else {
            base = regrid_to_cover(source.wf0, g.extent(), g.dx, gopts.max_n);
        }
    }

    CurveSeries series;
    series.entries.resize(ts.size());
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= ts.size()) return;
            try {
                const WaveFunction wft = evolve_free(base, ts[i], opts.boundary_tol);
                const FisherResult r = fisher_product(wft, opts.estimator, opts.fisher);
                series.entries[i] = CurveEntry{ts[i], r.i_x, r.i_p, r.product, std::nullopt};
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(ts.size());
                return;
            }
        }
    };

    int n_threads = opts.threads > 0 ? opts.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp<int>(n_threads, 1, static_cast<int>(ts.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Free evolution is a pure momentum-space phase: i_p cannot move. Verify.
    double ip_lo = series.entries.front().i_p, ip_hi = ip_lo;
    for (const CurveEntry& e : series.entries) {
        ip_lo = std::min(ip_lo, e.i_p);
        ip_hi = std::max(ip_hi, e.i_p);
    }
    if (ip_hi - ip_lo > 1e-8 * std::abs(ip_hi))
        fail_tolerance("i_p drifted across the series (" + std::to_string(ip_lo) + " .. " +
                       std::to_string(ip_hi) + "); free evolution must keep it constant");

    std::ostringstream gs;
    gs << "[" << base.grid.x_min << ", " << base.grid.x_max() << ") n=" << base.grid.n;
    series.meta["grid"] = gs.str();
    series.meta["n"] = std::to_string(base.grid.n);
    series.meta["estimator"] =
        opts.estimator == Estimator::density_form ? "density_form" : "amplitude_form";
    if (!source.label.empty()) series.meta["state"] = source.label;
    return series;
}

}  // namespace fisherlab
