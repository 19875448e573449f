// Command-line laboratory for Fisher information of free-particle states:
// reproduces the closed-form product curves of the Hermite-Gaussian family,
// fits the long-time decay of the product for arbitrary initial states,
// sweeps (k, delta) grids, and runs the invariant self-check.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fisherlab/analytic.hpp"
#include "fisherlab/check.hpp"
#include "fisherlab/errors.hpp"
#include "fisherlab/io.hpp"
#include "fisherlab/propagator.hpp"
#include "fisherlab/series.hpp"
#include "fisherlab/statespec.hpp"

namespace fl = fisherlab;

namespace {

struct CommonOpts {
    double delta = 1.0;
    double t_max = 10.0;
    int steps = 41;
    std::string out;  // empty = stdout
    std::string format = "csv";
    std::string estimator = "density";
    long max_n = fl::default_max_n();
    int threads = 0;
    double threshold = 4.0;
    double boundary_tol = 1e-10;
    double floor_rel = 1e-12;
    std::string config_file;  // expanded before parsing; bound only for --help
};

// CLI11 runs config-file processing on the root command only, so a
// per-subcommand --config would be silently ignored; the file is instead
// expanded here into long-form flags injected ahead of the explicit flags,
// and the take-last policy lets the command line override the file.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) fl::fail_io("cannot read config file '" + path + "'");
    const auto strip = [](const std::string& s) {
        const char* ws = " \t\r";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        return s.substr(b, s.find_last_not_of(ws) - b + 1);
    };
    std::vector<std::string> toks;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos) fl::fail_usage("config " + where + ": expected key = value");
        const std::string key = strip(t.substr(0, eq));
        std::string value = strip(t.substr(eq + 1));
        if (key.empty()) fl::fail_usage("config " + where + ": empty key");
        if (key == "config") fl::fail_usage("config " + where + ": nested config files");
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
            value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        toks.push_back("--" + key);
        toks.push_back(std::move(value));
    }
    return toks;
}

std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args;
    std::vector<std::string> injected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        std::string path;
        if (a == "--config") {
            if (i + 1 >= argc) fl::fail_usage("--config needs a file path");
            path = argv[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        } else {
            args.push_back(a);
            continue;
        }
        std::vector<std::string> toks = config_tokens(path);
        injected.insert(injected.end(), std::make_move_iterator(toks.begin()),
                        std::make_move_iterator(toks.end()));
    }
    if (!injected.empty()) {
        const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& s) {
            return !s.empty() && s[0] != '-';
        });
        if (sub == args.end()) fl::fail_usage("--config needs a subcommand");
        args.insert(std::next(sub), std::make_move_iterator(injected.begin()),
                    std::make_move_iterator(injected.end()));
    }
    return args;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_delta = true) {
    if (with_delta)
        cmd->add_option("--delta", o.delta, "Initial width parameter")->check(CLI::PositiveNumber);
    cmd->add_option("--t-max", o.t_max, "Largest evolution time")->check(CLI::PositiveNumber);
    cmd->add_option("--steps", o.steps, "Number of time samples");
    cmd->add_option("--out", o.out, "Output path ('-' or empty prints to stdout)");
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--estimator", o.estimator, "Fisher estimator")
        ->check(CLI::IsMember({"density", "amplitude"}));
    cmd->add_option("--max-n", o.max_n, "Grid size cap (default from FISHERLAB_MAX_N or 2^22)");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
    cmd->add_option("--threshold", o.threshold, "Product threshold for crossing reports");
    cmd->add_option("--boundary-tol", o.boundary_tol, "Boundary-mass tolerance");
    cmd->add_option("--floor-rel", o.floor_rel, "Relative density floor for the estimator");
    cmd->add_option("--config", o.config_file,
                    "Flat key = value config file; explicit flags override it");
    for (CLI::Option* opt : cmd->get_options())
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

fl::SeriesOptions series_options(const CommonOpts& o) {
    fl::SeriesOptions s;
    s.estimator = o.estimator == "amplitude" ? fl::Estimator::amplitude_form
                                             : fl::Estimator::density_form;
    s.fisher.floor_rel = o.floor_rel;
    s.grid.max_n = o.max_n;
    s.threads = o.threads;
    s.boundary_tol = o.boundary_tol;
    return s;
}

// Output sinks: data to the file (or stdout), human summary to the other stream.
struct Sink {
    std::string out;
    bool to_stdout() const { return out.empty() || out == "-"; }
    std::ostream& summary() const { return to_stdout() ? std::cerr : std::cout; }
};

void emit(const fl::CurveSeries& series, const std::string& format, const Sink& sink) {
    if (sink.to_stdout()) {
        if (format == "json")
            fl::write_json(series, std::cout);
        else
            fl::write_csv(series, std::cout);
        return;
    }
    const std::filesystem::path path(sink.out);
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) fl::fail_io("cannot create directory '" + path.parent_path().string() + "'");
    }
    if (format == "json")
        fl::write_json(series, path);
    else
        fl::write_csv(series, path);
}

std::vector<double> linear_times(double t_max, int steps) {
    std::vector<double> ts(steps);
    for (int i = 0; i < steps; ++i) ts[i] = t_max * i / (steps - 1);
    return ts;
}

std::vector<double> log_times(double t_min, double t_max, int steps) {
    // t = 0 plus steps-1 log-spaced points in [t_min, t_max]
    std::vector<double> ts{0.0};
    const int m = steps - 1;
    for (int i = 0; i < m; ++i)
        ts.push_back(t_min * std::pow(t_max / t_min, m == 1 ? 1.0 : static_cast<double>(i) / (m - 1)));
    return ts;
}

struct ReproduceOutcome {
    std::optional<double> max_rel_err;
    std::optional<double> crossing;
};

// Shared by `reproduce` and `sweep`: one family member, closed-form column
// attached where it exists, crossing located against the threshold.
ReproduceOutcome run_family_curve(int k, const CommonOpts& o, const Sink& sink) {
    const fl::StateSpec spec = fl::parse_state_spec(
        k == 0 ? "gaussian(delta=" + fl::format_double(o.delta) + ")"
               : "hermite(k=" + std::to_string(k) + ",delta=" + fl::format_double(o.delta) + ")");
    fl::StateSource source = fl::build_source(spec);
    fl::EvolutionPlan plan{source.wf0.grid, linear_times(o.t_max, o.steps),
                           fl::RegridPolicy::auto_expand};
    const fl::SeriesOptions sopts = series_options(o);
    fl::CurveSeries series = fl::evolve_series(source, plan, sopts);
    series.meta["k"] = std::to_string(k);
    series.meta["delta"] = fl::format_double(o.delta);

    ReproduceOutcome res;
    for (fl::CurveEntry& e : series.entries) {
        e.analytic_product = fl::product_closed(fl::AnalyticState{k, o.delta, e.t});
        if (const auto re = e.rel_err())
            res.max_rel_err = std::max(res.max_rel_err.value_or(0.0), *re);
    }

    // Bisection refinement re-runs the numeric pipeline at candidate times.
    fl::WaveFunction base = fl::normalize(
        fl::sample(source.eval_t0, fl::auto_grid(source.wf0, o.t_max, sopts.grid)));
    const auto reevaluate = [&](double t) {
        return fl::fisher_product(fl::evolve_free(base, t, o.boundary_tol), sopts.estimator,
                                  sopts.fisher)
            .product;
    };
    res.crossing = fl::crossing_time(series, o.threshold, reevaluate, 1e-6 * o.t_max);
    if (res.crossing) series.meta["crossing_time"] = fl::format_double(*res.crossing);

    emit(series, o.format, sink);

    std::ostream& s = sink.summary();
    s << "state " << source.label << ", " << o.steps << " samples, t in [0, "
      << fl::format_double(o.t_max) << "], estimator " << series.meta["estimator"] << "\n";
    if (res.max_rel_err)
        s << "max rel err vs closed form: " << fl::format_double(*res.max_rel_err) << "\n";
    else
        s << "no closed-form product for k = " << k << "; numeric curve only\n";
    if (res.crossing)
        s << "product crosses below " << fl::format_double(o.threshold) << " at t = "
          << fl::format_double(*res.crossing) << "\n";
    else
        s << "product never crosses below " << fl::format_double(o.threshold) << "\n";
    return res;
}

int cmd_reproduce(int k, const CommonOpts& o, double rel_tol) {
    if (k < 0 || k > 5) fl::fail_usage("reproduce supports k in 0..5");
    if (o.steps < 2) fl::fail_usage("reproduce needs at least 2 time samples");
    const Sink sink{o.out};
    const ReproduceOutcome res = run_family_curve(k, o, sink);
    if (res.max_rel_err && *res.max_rel_err >= rel_tol) {
        sink.summary() << "TOLERANCE FAILURE: max rel err " << fl::format_double(*res.max_rel_err)
                       << " >= " << fl::format_double(rel_tol) << "\n";
        return static_cast<int>(fl::ExitCode::tolerance);
    }
    return 0;
}

int cmd_conjecture(const std::string& state_text, double t_min, double fit_tail_fraction,
                   const CommonOpts& o) {
    if (o.steps < 7) fl::fail_usage("conjecture needs at least 7 time samples");
    if (!(fit_tail_fraction > 0.0) || fit_tail_fraction > 0.9)
        fl::fail_usage("fit tail fraction must be in (0, 0.9]");
    if (t_min <= 0.0) t_min = o.t_max / 1000.0;
    if (t_min >= o.t_max) fl::fail_usage("t-min must be below t-max");

    const fl::StateSpec spec = fl::parse_state_spec(state_text);
    fl::StateSource source = fl::build_source(spec);
    fl::EvolutionPlan plan{source.wf0.grid, log_times(t_min, o.t_max, o.steps),
                           fl::RegridPolicy::auto_expand};
    fl::CurveSeries series = fl::evolve_series(source, plan, series_options(o));

    // Fit over the last fit_tail_fraction of the log-spaced samples.
    const int n_log = o.steps - 1;
    const int m = std::max(5, static_cast<int>(std::lround(fit_tail_fraction * n_log)));
    if (m > n_log) fl::fail_usage("fit window needs 5 log-spaced samples; increase --steps");
    const double t_lo = series.entries[series.entries.size() - m].t;
    series.fit = fl::fit_decay(series, t_lo, o.t_max);
    series.meta["fit_exponent"] = fl::format_double(series.fit->exponent);

    const auto crossing = fl::crossing_time(series, o.threshold);
    if (crossing) series.meta["crossing_time"] = fl::format_double(*crossing);

    const Sink sink{o.out};
    emit(series, o.format, sink);

    std::ostream& s = sink.summary();
    s << "state " << source.label << ", fit window [" << fl::format_double(t_lo) << ", "
      << fl::format_double(o.t_max) << "]\n";
    s << "product ~ " << fl::format_double(series.fit->amplitude) << " * t^"
      << fl::format_double(series.fit->exponent) << " (rms log residual "
      << fl::format_double(series.fit->residual) << ")\n";
    const bool decays = series.fit->exponent < 0.0;
    s << (decays ? "conjecture-consistent: the product decays\n"
                 : "counterobservation: no decay in the fit window\n");
    if (crossing)
        s << "product crosses below " << fl::format_double(o.threshold) << " at t ~ "
          << fl::format_double(*crossing) << "\n";
    return decays ? 0 : static_cast<int>(fl::ExitCode::tolerance);
}

int cmd_sweep(const std::vector<int>& ks, const std::vector<double>& deltas, const CommonOpts& o,
              double rel_tol) {
    if (ks.empty() || deltas.empty()) fl::fail_usage("sweep needs --k-list and --delta-list");
    if (o.steps < 2) fl::fail_usage("sweep needs at least 2 time samples");
    const std::filesystem::path dir = o.out.empty() ? "." : o.out;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fl::fail_io("cannot create output directory '" + dir.string() + "'");

    int worst = 0;
    for (int k : ks) {
        if (k < 0 || k > 5) fl::fail_usage("sweep supports k in 0..5");
        for (double d : deltas) {
            CommonOpts member = o;
            member.delta = d;
            member.t_max = o.t_max;
            std::string name = "k" + std::to_string(k) + "_delta" + fl::format_double(d) + "." +
                               o.format;
            member.out = (dir / name).string();
            const Sink sink{member.out};
            const ReproduceOutcome res = run_family_curve(k, member, sink);
            std::cout << "wrote " << member.out << "\n";
            if (res.max_rel_err && *res.max_rel_err >= rel_tol) {
                std::cout << "TOLERANCE FAILURE for k=" << k << " delta=" << fl::format_double(d)
                          << ": max rel err " << fl::format_double(*res.max_rel_err) << "\n";
                worst = std::max(worst, static_cast<int>(fl::ExitCode::tolerance));
            }
        }
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fisher information laboratory for free-particle wave packets"};
    app.name("fisherlab");
    app.require_subcommand(1);

    CommonOpts ro;
    int rk = 0;
    double r_rel_tol = 1e-3;
    CLI::App* reproduce =
        app.add_subcommand("reproduce", "Reproduce a family product curve against its closed form");
    reproduce->add_option("--k", rk, "Derivative order of the family member (0..5)");
    add_common(reproduce, ro);
    reproduce->add_option("--rel-tol", r_rel_tol, "Closed-form agreement gate")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CommonOpts co;
    co.t_max = 100.0;
    std::string c_state = "gaussian(delta=1)";
    double c_t_min = 0.0;
    double c_fit_tail = 0.2;
    CLI::App* conjecture =
        app.add_subcommand("conjecture", "Track the product to long times and fit its decay");
    conjecture->add_option("--state", c_state,
                           "Initial state: gaussian(delta=..), hermite(k=..,delta=..), "
                           "superposition(c*spec,..), file(path)");
    conjecture->add_option("--t-min", c_t_min, "First positive time sample (default t-max/1000)");
    conjecture->add_option("--fit-tail-fraction", c_fit_tail,
                           "Tail fraction of log-spaced samples used in the fit");
    add_common(conjecture, co, false);

    CommonOpts so;
    std::vector<int> s_ks;
    std::vector<double> s_deltas;
    double s_rel_tol = 1e-3;
    CLI::App* sweep = app.add_subcommand("sweep", "Family curves over a (k, delta) grid");
    sweep->add_option("--k-list", s_ks, "Derivative orders")->delimiter(',');
    sweep->add_option("--delta-list", s_deltas, "Width parameters")->delimiter(',');
    add_common(sweep, so);
    sweep->add_option("--rel-tol", s_rel_tol, "Closed-form agreement gate")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CLI::App* check = app.add_subcommand("check", "Run the invariant self-check battery");

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const fl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    }
    std::reverse(args.begin(), args.end());

    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(fl::ExitCode::usage);
    }

    try {
        if (reproduce->parsed()) return cmd_reproduce(rk, ro, r_rel_tol);
        if (conjecture->parsed()) return cmd_conjecture(c_state, c_t_min, c_fit_tail, co);
        if (sweep->parsed()) return cmd_sweep(s_ks, s_deltas, so, s_rel_tol);
        if (check->parsed()) return fl::run_selfcheck(std::cout) ? 0 : 1;
    } catch (const fl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(fl::ExitCode::bad_state);
    }
    return 0;
}
