#include "fisherlab/check.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fisherlab/analytic.hpp"
#include "fisherlab/errors.hpp"
#include "fisherlab/fisher.hpp"
#include "fisherlab/grid.hpp"
#include "fisherlab/io.hpp"
#include "fisherlab/propagator.hpp"
#include "fisherlab/series.hpp"
#include "fisherlab/statespec.hpp"

namespace fisherlab {

namespace {

struct Runner {
    std::ostream& out;
    int failures = 0;

    void run(const std::string& name, const std::function<bool()>& fn) {
        bool ok = false;
        std::string note;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        if (!ok) ++failures;
        out << (ok ? "[ok]   " : "[FAIL] ") << name << note << "\n";
    }
};

complexd gauss_amp(double x) { return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x); }

}  // namespace

bool run_selfcheck(std::ostream& out) {
    Runner r{out};

    const Grid g = make_grid(-12.0, 12.0, 2048);
    const WaveFunction gauss = normalize(sample(gauss_amp, g));

    r.run("fourier transform preserves the norm", [&] {
        return std::abs(norm_sq(to_momentum(gauss)) - norm_sq(gauss)) < 1e-12;
    });

    r.run("momentum/position round trip is the identity", [&] {
        const WaveFunction back = to_position(to_momentum(gauss));
        double worst = 0.0;
        for (int i = 0; i < g.n; ++i) worst = std::max(worst, std::abs(back.amp[i] - gauss.amp[i]));
        return worst < 1e-12;
    });

    r.run("lattice duality dx*dp*n = 2*pi", [&] {
        return std::abs(g.dx * g.dp() * g.n - 2.0 * std::numbers::pi) < 1e-12;
    });

    r.run("translated state has the same momentum density", [&] {
        const double a = 3.0;
        const WaveFunction shifted =
            normalize(sample([a](double x) { return gauss_amp(x - a); }, make_grid(-12.0 + a, 12.0 + a, 2048)));
        const WaveFunction p0 = to_momentum(gauss), p1 = to_momentum(shifted);
        double worst = 0.0;
        for (int i = 0; i < g.n; ++i)
            worst = std::max(worst, std::abs(std::norm(p0.amp[i]) - std::norm(p1.amp[i])));
        return worst < 1e-10;
    });

    r.run("gaussian fisher information is 2", [&] {
        std::vector<double> rho(g.n);
        for (int i = 0; i < g.n; ++i) rho[i] = std::norm(gauss.amp[i]);
        return std::abs(fisher_density(rho, g.dx) - 2.0) < 1e-8;
    });

    r.run("density and amplitude estimators agree on a nodeless state", [&] {
        std::vector<double> rho(g.n);
        for (int i = 0; i < g.n; ++i) rho[i] = std::norm(gauss.amp[i]);
        const double a = fisher_density(rho, g.dx), b = fisher_amplitude(gauss);
        return std::abs(a - b) / a < 1e-6;
    });

    r.run("fisher product of the coherent gaussian is 4", [&] {
        return std::abs(fisher_product(gauss).product - 4.0) < 4e-6;
    });

    r.run("first derivative state: fisher values 6, product 36", [&] {
        const WaveFunction wf = sample_state(AnalyticState{1, 1.0, 0.0}, g);
        const FisherResult res = fisher_product(wf);
        return std::abs(res.i_x - 6.0) < 6e-6 && std::abs(res.i_p - 6.0) < 6e-6 &&
               std::abs(res.product - 36.0) < 36e-5;
    });

    r.run("fisher is translation invariant", [&] {
        std::vector<double> rho(g.n);
        for (int i = 0; i < g.n; ++i) rho[i] = std::norm(gauss.amp[i]);
        std::vector<double> shifted(g.n, 0.0);
        const int off = static_cast<int>(std::lround(2.0 / g.dx));
        for (int i = 0; i + off < g.n; ++i) shifted[i + off] = rho[i];
        return std::abs(fisher_density(shifted, g.dx) - fisher_density(rho, g.dx)) < 1e-9;
    });

    r.run("fisher scales as 1/lambda^2 under dilation", [&] {
        bool ok = true;
        for (double lam : {0.5, 2.0, 3.0}) {
            const WaveFunction wl = normalize(sample(
                [lam](double x) { return gauss_amp(x / lam) / std::sqrt(lam); }, make_grid(-40.0, 40.0, 8192)));
            std::vector<double> rho(wl.size());
            for (int i = 0; i < wl.size(); ++i) rho[i] = std::norm(wl.amp[i]);
            const double v = fisher_density(rho, wl.grid.dx);
            ok = ok && std::abs(v - 2.0 / (lam * lam)) / (2.0 / (lam * lam)) < 1e-6;
        }
        return ok;
    });

    r.run("real states satisfy the product bound >= 4", [&] {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        const Grid gw = make_grid(-16.0, 16.0, 4096);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> cs(5);
            for (double& v : cs) v = coef(rng);
            const WaveFunction wf = normalize(sample(
                [&cs](double x) {
                    complexd v(0.0, 0.0);
                    for (size_t k = 0; k < cs.size(); ++k)
                        v += cs[k] * psi_k(AnalyticState{static_cast<int>(k), 1.0, 0.0}, x);
                    return v;
                },
                gw));
            if (fisher_product(wf).product < 4.0 * (1.0 - 1e-6)) return false;
        }
        return true;
    });

    r.run("closed-form densities match sampled amplitudes (k = 0, 1)", [&] {
        const double t = 0.8;
        for (int k : {0, 1}) {
            const AnalyticState s{k, 1.0, t};
            for (double x : {-3.0, -0.5, 0.0, 1.0, 2.5}) {
                const double d4t2 = 1.0 + t * t;
                const double closed =
                    k == 0 ? std::exp(-x * x / d4t2) / std::sqrt(std::numbers::pi * d4t2)
                           : 2.0 * x * x * std::exp(-x * x / d4t2) /
                                 std::sqrt(std::numbers::pi * d4t2 * d4t2 * d4t2);
                const double have = density_x(s, x);
                if (std::abs(have - closed) > 1e-12 * std::max(1.0, closed)) return false;
            }
        }
        return true;
    });

    r.run("free evolution matches the closed-form spreading gaussian", [&] {
        const WaveFunction evolved = evolve_free(gauss, 1.0);
        double worst = 0.0;
        for (int i = 0; i < g.n; ++i)
            worst = std::max(worst, std::abs(evolved.amp[i] - psi_k(AnalyticState{0, 1.0, 1.0}, g.x(i))));
        return worst < 1e-10;
    });

    r.run("free evolution is unitary and reversible", [&] {
        const WaveFunction fwd = evolve_free(gauss, 1.7);
        const WaveFunction back = evolve_free(fwd, -1.7);
        double worst = 0.0;
        for (int i = 0; i < g.n; ++i) worst = std::max(worst, std::abs(back.amp[i] - gauss.amp[i]));
        return std::abs(norm_sq(fwd) - 1.0) < 1e-12 && worst < 1e-12;
    });

    r.run("momentum fisher is constant along the evolution", [&] {
        StateSource src{gauss, [](double x) { return gauss_amp(x); }, "gaussian(delta=1)"};
        EvolutionPlan plan{g, {0.0, 1.0, 2.0, 3.0}, RegridPolicy::auto_expand};
        const CurveSeries cs = evolve_series(src, plan);
        double lo = cs.entries[0].i_p, hi = lo;
        for (const CurveEntry& e : cs.entries) {
            lo = std::min(lo, e.i_p);
            hi = std::max(hi, e.i_p);
        }
        return (hi - lo) / hi < 1e-8;
    });

    r.run("evolved product curve follows the closed form", [&] {
        StateSource src{gauss, [](double x) { return gauss_amp(x); }, "gaussian(delta=1)"};
        EvolutionPlan plan{g, {0.0, 1.0, 2.0, 3.0}, RegridPolicy::auto_expand};
        const CurveSeries cs = evolve_series(src, plan);
        const double want[] = {4.0, 2.0, 0.8, 0.4};
        for (int i = 0; i < 4; ++i)
            if (std::abs(cs.entries[i].product - want[i]) / want[i] > 1e-4) return false;
        return true;
    });

    r.run("momentum fisher matches the closed constants (k <= 3)", [&] {
        for (int k = 0; k <= 3; ++k) {
            const Grid gk = make_grid(-20.0, 20.0, 4096);
            const WaveFunction wf = sample_state(AnalyticState{k, 1.0, 0.0}, gk);
            const WaveFunction wfp = to_momentum(wf);
            std::vector<double> rho(wfp.size());
            for (int i = 0; i < wfp.size(); ++i) rho[i] = std::norm(wfp.amp[i]);
            const double got = fisher_density(rho, wfp.grid.dp());
            const double want = fisher_p_exact(k, 1.0);
            if (std::abs(got - want) / want > 1e-6) return false;
        }
        return true;
    });

    r.run("power-law decay fit recovers the exponent", [&] {
        CurveSeries cs;
        for (int i = 0; i <= 24; ++i) {
            const double t = 10.0 * std::pow(10.0, i / 24.0);
            cs.entries.push_back(CurveEntry{t, 0.0, 0.0, 4.0 / (1.0 + t * t), std::nullopt});
        }
        const DecayFit fit = fit_decay(cs, 10.0, 100.0);
        return std::abs(fit.exponent + 2.0) < 5e-3 && std::abs(fit.amplitude - 4.0) < 0.1;
    });

    r.run("crossing search finds the threshold time", [&] {
        const AnalyticState s{1, 1.0, 0.0};
        CurveSeries cs;
        for (int i = 0; i <= 40; ++i) {
            const double t = 0.25 * i;
            cs.entries.push_back(
                CurveEntry{t, 0.0, 0.0, *product_closed(AnalyticState{1, 1.0, t}), std::nullopt});
        }
        const auto t_star = crossing_time(
            cs, 4.0, [](double t) { return *product_closed(AnalyticState{1, 1.0, t}); }, 1e-8);
        return t_star && std::abs(*t_star - 2.0 * std::sqrt(2.0)) < 1e-3 * 2.0 * std::sqrt(2.0);
    });

    r.run("csv emitter round trips at full precision", [&] {
        CurveSeries cs;
        cs.entries.push_back(CurveEntry{0.1, 1.0 / 3.0, 2.0, 2.0 / 3.0, 4.0});
        cs.entries.push_back(CurveEntry{1e-3, 5.5, 1e17, 5.5e17, std::nullopt});
        const auto path = std::filesystem::temp_directory_path() /
                          ("fisherlab-selfcheck-" + std::to_string(::getpid()) + ".csv");
        write_csv(cs, path);
        const CurveSeries back = read_csv(path);
        std::filesystem::remove(path);
        if (back.entries.size() != cs.entries.size()) return false;
        for (size_t i = 0; i < cs.entries.size(); ++i) {
            if (back.entries[i].t != cs.entries[i].t) return false;
            if (back.entries[i].i_x != cs.entries[i].i_x) return false;
            if (back.entries[i].i_p != cs.entries[i].i_p) return false;
            if (back.entries[i].product != cs.entries[i].product) return false;
            if (back.entries[i].analytic_product != cs.entries[i].analytic_product) return false;
        }
        return true;
    });

    r.run("state spec parser round trips", [&] {
        const StateSpec s = parse_state_spec(
            "superposition(0.6*gaussian(delta=1), (0.4,0.2)*hermite(k=2, delta=0.5))");
        return s.kind == StateSpec::Kind::superposition && s.parts.size() == 2 &&
               s.parts[1].second.k == 2 && s.parts[1].second.delta == 0.5;
    });

    out << (r.failures == 0 ? "selfcheck: all checks passed\n"
                            : "selfcheck: " + std::to_string(r.failures) + " check(s) FAILED\n");
    return r.failures == 0;
}

}  // namespace fisherlab
