// Acceptance battery: exercises the full laboratory end to end and prints one
// verdict line per criterion. Usage: fisherlab_acceptance <path-to-cli>.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "fisherlab/analytic.hpp"
#include "fisherlab/errors.hpp"
#include "fisherlab/fisher.hpp"
#include "fisherlab/grid.hpp"
#include "fisherlab/io.hpp"
#include "fisherlab/propagator.hpp"
#include "fisherlab/series.hpp"
#include "fisherlab/statespec.hpp"

namespace fl = fisherlab;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", id, title.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) { return fl::format_double(v); }

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::vector<double> linear_times(double t_max, int steps) {
    std::vector<double> ts(steps);
    for (int i = 0; i < steps; ++i) ts[i] = t_max * i / (steps - 1);
    return ts;
}

fl::StateSource family_source(int k, double delta) {
    fl::StateSource s;
    s.eval_t0 = [k, delta](double x) { return fl::psi_k({k, delta, 0.0}, x); };
    const double half = 16.0 * delta * std::sqrt(k + 1.0);
    s.wf0 = fl::normalize(fl::sample(s.eval_t0, fl::make_grid(-half, half, 2048)));
    s.label = "family member";
    return s;
}

// midpoint quadrature; evaluation points avoid p = 0
double integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f(a + (i + 0.5) * h);
    return acc * h;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& cli, const std::string& args, const fs::path& out_file) {
    const std::string cmd = cli + " " + args + " >" + out_file.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream f(out_file, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    r.out = ss.str();
    return r;
}

// ---------------------------------------------------------------- criteria

void criterion_1() {
    const auto t0 = clock_type::now();
    double worst = 0.0;
    long max_n_seen = 0;
    std::string note;
    bool ok = true;
    try {
        for (double delta : {0.5, 1.0, 2.0}) {
            const fl::StateSource src = family_source(0, delta);
            const double t_max = 10.0 * delta * delta;
            const fl::EvolutionPlan plan{src.wf0.grid, linear_times(t_max, 41),
                                         fl::RegridPolicy::auto_expand};
            const fl::CurveSeries series = fl::evolve_series(src, plan);
            max_n_seen = std::max(max_n_seen, std::stol(series.meta.at("n")));
            for (const auto& e : series.entries) {
                const double closed = 4.0 * std::pow(delta, 4) / (std::pow(delta, 4) + e.t * e.t);
                worst = std::max(worst, std::abs(e.product - closed) / closed);
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("threw: ") + e.what();
    }
    const double elapsed = seconds_since(t0);
    if (ok) {
        ok = worst < 1e-3 && max_n_seen <= (1 << 16) && elapsed < 10.0;
        note = "max rel err " + fmt(worst) + ", n <= " + std::to_string(max_n_seen) + ", " +
               fmt(elapsed) + " s";
    }
    report(1, "Gaussian product curve matches 4*delta^4/(delta^4+t^2)", ok, note);
}

void criterion_2() {
    double worst = 0.0, worst_cross = 0.0;
    std::string note;
    bool ok = true;
    try {
        for (double delta : {0.5, 1.0, 2.0}) {
            const fl::StateSource src = family_source(1, delta);
            const double t_max = 10.0 * delta * delta;
            const fl::EvolutionPlan plan{src.wf0.grid, linear_times(t_max, 41),
                                         fl::RegridPolicy::auto_expand};
            fl::CurveSeries series = fl::evolve_series(src, plan);
            for (const auto& e : series.entries) {
                const double closed = 36.0 * std::pow(delta, 4) / (std::pow(delta, 4) + e.t * e.t);
                worst = std::max(worst, std::abs(e.product - closed) / closed);
            }
            fl::SeriesOptions sopts;
            const fl::WaveFunction base = fl::normalize(
                fl::sample(src.eval_t0, fl::auto_grid(src.wf0, t_max, sopts.grid)));
            const auto reevaluate = [&](double t) {
                return fl::fisher_product(fl::evolve_free(base, t)).product;
            };
            const auto t_star = fl::crossing_time(series, 4.0, reevaluate, 1e-6 * t_max);
            const double expect = 2.0 * std::sqrt(2.0) * delta * delta;
            if (!t_star) {
                ok = false;
                note = "no crossing found for delta " + fmt(delta);
            } else {
                worst_cross = std::max(worst_cross, std::abs(*t_star - expect) / expect);
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("threw: ") + e.what();
    }
    if (ok) {
        ok = worst < 1e-3 && worst_cross < 1e-3;
        note = "max rel err " + fmt(worst) + ", crossing rel err " + fmt(worst_cross);
    }
    report(2, "first-derivative curve and crossing at 2*sqrt(2)*delta^2", ok, note);
}

void criterion_3() {
    std::string note;
    bool ok = true;
    try {
        const fl::StateSource src = family_source(0, 1.0);
        const fl::EvolutionPlan plan{src.wf0.grid, {0.1, 1.0, 10.0}, fl::RegridPolicy::auto_expand};
        const fl::CurveSeries series = fl::evolve_series(src, plan);
        double at_1 = 0.0;
        for (const auto& e : series.entries) {
            if (!(e.product < 4.0)) {
                ok = false;
                note = "product " + fmt(e.product) + " at t = " + fmt(e.t) + " is not below 4";
            }
            if (e.t == 1.0) at_1 = e.product;
        }
        if (ok) {
            ok = std::abs(at_1 - 2.0) / 2.0 < 1e-3;
            note = "all below 4; product(1) = " + fmt(at_1);
        }
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("threw: ") + e.what();
    }
    report(3, "k = 0 product sits below 4 for every t > 0", ok, note);
}

void criterion_4() {
    std::string note;
    bool ok = true;
    double worst_oracle = 0.0, worst_pipe = 0.0, worst_drift = 0.0;
    try {
        for (int k = 0; k <= 5 && ok; ++k) {
            for (double delta : {0.5, 1.0, 2.0}) {
                // stage 1: confirm the closed form against brute quadrature
                const double exact = fl::fisher_p_exact(k, delta);
                const double lim = 14.0 / delta;
                const double oracle = integrate(
                    [&](double p) {
                        const double score = 2.0 * k / p - 2.0 * delta * delta * p;
                        return score * score * fl::density_p({k, delta, 0.0}, p);
                    },
                    -lim, lim, 1 << 21);
                worst_oracle = std::max(worst_oracle, std::abs(oracle - exact) / exact);

                // stage 2: the numeric pipeline over three times on one grid
                const fl::StateSource src = family_source(k, delta);
                const double t_max = 10.0 * delta * delta;
                const fl::EvolutionPlan plan{
                    src.wf0.grid, {0.0, delta * delta, t_max}, fl::RegridPolicy::auto_expand};
                const fl::CurveSeries series = fl::evolve_series(src, plan);
                double lo = series.entries[0].i_p, hi = lo;
                for (const auto& e : series.entries) {
                    lo = std::min(lo, e.i_p);
                    hi = std::max(hi, e.i_p);
                    worst_pipe = std::max(worst_pipe, std::abs(e.i_p - exact) / exact);
                }
                worst_drift = std::max(worst_drift, (hi - lo) / hi);
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("threw: ") + e.what();
    }
    if (ok) {
        ok = worst_oracle < 1e-9 && worst_drift < 1e-6 && worst_pipe < 1e-6;
        note = "oracle agreement " + fmt(worst_oracle) + ", time drift " + fmt(worst_drift) +
               ", pipeline err " + fmt(worst_pipe);
    }
    report(4, "momentum Fisher constants verified by quadrature and pipeline", ok, note);
}

void criterion_5() {
    std::string note;
    bool ok = true;
    double worst = 0.0;
    try {
        for (int k = 0; k <= 5; ++k) {
            const double delta = 1.0;
            // the un-normalized k-th derivative of the t=0 Gaussian is
            // psi_k / N_k; its squared norm must equal 1/|N_k|^2
            const double nk2 = fl::norm_const_sq(k, delta);
            const double half = 16.0 * std::sqrt(k + 1.0);
            const fl::Grid g = fl::make_grid(-half, half, 4096);
            const fl::WaveFunction raw = fl::sample(
                [&](double x) { return fl::psi_k({k, delta, 0.0}, x) / std::sqrt(nk2); }, g);
            const double recovered = 1.0 / fl::norm_sq(raw);
            worst = std::max(worst, std::abs(recovered - nk2) / nk2);
        }
        ok = worst < 1e-8;
        note = "max rel err " + fmt(worst);
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("threw: ") + e.what();
    }
    report(5, "normalization constants recovered from quadrature", ok, note);
}

void criterion_6() {
    std::string note;
    bool ok = true;
    double worst = 0.0;
    try {
        for (int k = 2; k <= 5; ++k) {
            const fl::StateSource src = family_source(k, 1.0);
            std::vector<double> ts;
            const int m = 33;
            for (int i = 0; i < m; ++i)
                ts.push_back(20.0 * std::pow(10.0, static_cast<double>(i) / (m - 1)));
            const fl::EvolutionPlan plan{src.wf0.grid, ts, fl::RegridPolicy::auto_expand};
            const fl::CurveSeries series = fl::evolve_series(src, plan);
            const fl::DecayFit fit = fl::fit_decay(series, ts.front(), ts.back());
            worst = std::max(worst, std::abs(fit.exponent + 2.0));
        }
        ok = worst <= 0.02;
        note = "max |exponent + 2| = " + fmt(worst);
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("threw: ") + e.what();
    }
    report(6, "k in 2..5 products decay with exponent -2.00 +/- 0.02", ok, note);
}

void criterion_7() {
    std::string note;
    bool ok = true;
    double min_product = 1e300, gauss_gap = 0.0;
    try {
        const fl::Grid g = fl::make_grid(-16.0, 16.0, 4096);
        std::vector<fl::WaveFunction> basis;
        for (int k = 0; k <= 6; ++k)
            basis.push_back(fl::sample_state(fl::AnalyticState{k, 1.0, 0.0}, g));
        std::mt19937 rng(20260818);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            fl::WaveFunction mix{g, std::vector<fl::complexd>(g.n), fl::Space::position};
            for (const auto& b : basis) {
                const double c = coef(rng);
                for (int m = 0; m < g.n; ++m) mix.amp[m] += c * b.amp[m].real();
            }
            const double product = fl::fisher_product(fl::normalize(mix)).product;
            min_product = std::min(min_product, product);
        }
        const double gauss = fl::fisher_product(basis[0]).product;
        gauss_gap = std::abs(gauss - 4.0) / 4.0;
        ok = min_product >= 4.0 * (1.0 - 1e-6) && gauss_gap < 1e-6;
        note = "min product " + fmt(min_product) + ", Gaussian gap " + fmt(gauss_gap);
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("threw: ") + e.what();
    }
    report(7, "100 random real states respect the product bound", ok, note);
}

void criterion_8() {
    std::string note;
    bool ok = true;
    double worst_prop = 0.0, worst_smooth = 0.0, worst_noded = 0.0;
    try {
        const fl::Grid g = fl::make_grid(-48.0, 48.0, 8192);
        for (int k = 0; k <= 3; ++k) {
            const fl::WaveFunction wf0 = fl::sample_state(fl::AnalyticState{k, 1.0, 0.0}, g);
            for (double t : {1.0, 5.0}) {
                const fl::WaveFunction num = fl::evolve_free(wf0, t);
                for (int m = 0; m < g.n; ++m)
                    worst_prop = std::max(
                        worst_prop, std::abs(num.amp[m] - fl::psi_k({k, 1.0, t}, g.x(m))));
            }
        }

        // wide box: the amplitude-form momentum derivative is dp-limited
        const fl::Grid gs = fl::make_grid(-128.0, 128.0, 32768);
        const fl::WaveFunction smooth =
            fl::evolve_free(fl::sample_state(fl::AnalyticState{0, 1.0, 0.0}, gs), 0.7);
        const double d_s = fl::fisher_product(smooth, fl::Estimator::density_form).product;
        const double a_s = fl::fisher_product(smooth, fl::Estimator::amplitude_form).product;
        worst_smooth = std::abs(d_s - a_s) / d_s;

        // noded states are compared on the position side, where the node
        // lives; for odd k the momentum modulus has a |p| kink at p = 0 that
        // no finite-difference amplitude estimate can cross cleanly
        const fl::Grid gn = fl::make_grid(-8.0, 8.0, 1 << 16);
        for (int k : {1, 2}) {
            const fl::WaveFunction noded = fl::sample_state(fl::AnalyticState{k, 1.0, 0.0}, gn);
            const double d_n = fl::fisher_product(noded, fl::Estimator::density_form).i_x;
            const double a_n = fl::fisher_amplitude(noded);
            worst_noded = std::max(worst_noded, std::abs(d_n - a_n) / d_n);
        }
        ok = worst_prop < 1e-8 && worst_smooth < 1e-6 && worst_noded < 1e-4;
        note = "propagation err " + fmt(worst_prop) + ", estimator gap smooth " +
               fmt(worst_smooth) + " / noded " + fmt(worst_noded);
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("threw: ") + e.what();
    }
    report(8, "propagation matches the closed family; estimators agree", ok, note);
}

void criterion_9(const std::string& cli) {
    std::string note;
    bool ok = true;
    try {
        // Parseval and unitarity
        double worst_parseval = 0.0, worst_unitary = 0.0;
        const fl::Grid g = fl::make_grid(-24.0, 24.0, 2048);
        for (int k : {0, 2, 4}) {
            const fl::WaveFunction wf = fl::sample_state(fl::AnalyticState{k, 1.0, 0.0}, g);
            worst_parseval =
                std::max(worst_parseval, std::abs(fl::norm_sq(fl::to_momentum(wf)) - 1.0));
            worst_unitary =
                std::max(worst_unitary, std::abs(fl::norm_sq(fl::evolve_free(wf, 2.5)) - 1.0));
        }

        // determinism through the CLI, threaded
        const fs::path dir =
            fs::temp_directory_path() / ("fisherlab_acc_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        const std::string args = "reproduce --k 1 --t-max 8 --steps 17 --threads 4 --out ";
        const RunResult r1 = run_cli(cli, args + (dir / "a.csv").string(), dir / "log1");
        const RunResult r2 = run_cli(cli, args + (dir / "b.csv").string(), dir / "log2");
        std::ifstream fa(dir / "a.csv", std::ios::binary), fb(dir / "b.csv", std::ios::binary);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        const bool deterministic =
            r1.exit_code == 0 && r2.exit_code == 0 && !sa.str().empty() && sa.str() == sb.str();

        // the self-check battery through the CLI
        const auto t0 = clock_type::now();
        const RunResult chk = run_cli(cli, "check", dir / "log3");
        const double chk_time = seconds_since(t0);
        fs::remove_all(dir);

        ok = worst_parseval < 1e-12 && worst_unitary < 1e-12 && deterministic &&
             chk.exit_code == 0 && chk_time < 60.0;
        note = "parseval " + fmt(worst_parseval) + ", unitarity " + fmt(worst_unitary) +
               (deterministic ? ", byte-identical reruns" : ", NONDETERMINISTIC") +
               ", check exit " + std::to_string(chk.exit_code) + " in " + fmt(chk_time) + " s";
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("threw: ") + e.what();
    }
    report(9, "transforms, determinism, and self-check hold", ok, note);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-cli>\n", argv[0]);
        return 64;
    }
    const std::string cli = argv[1];

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(cli);

    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria hold\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
