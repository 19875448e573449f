#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "fisherlab/grid.hpp"
#include "fisherlab/io.hpp"
#include "helpers.hpp"

namespace fl = fisherlab;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* cli_path() {
    const char* p = std::getenv("FISHERLAB_CLI");
    REQUIRE_MESSAGE(p != nullptr, "FISHERLAB_CLI must point at the built binary");
    return p;
}

fs::path scratch() {
    static const fs::path dir = [] {
        const fs::path d =
            fs::temp_directory_path() / ("fisherlab_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// `args` is a raw shell fragment; callers quote anything that needs quoting.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int seq = 0;
    const fs::path out = scratch() / ("stdout_" + std::to_string(seq));
    const fs::path err = scratch() / ("stderr_" + std::to_string(seq));
    ++seq;
    const std::string cmd = env_prefix + std::string(cli_path()) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("reproduce: closed-form curve lands on stdout") {
    const RunResult r = run_cli("reproduce --k 0 --delta 1 --t-max 3 --steps 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.substr(0, 41) == "t,ix,ip,product,analytic_product,rel_err\n");
    const fs::path tmp = scratch() / "parse.csv";
    std::ofstream(tmp, std::ios::binary) << r.out;
    const fl::CurveSeries s = fl::read_csv(tmp);
    REQUIRE(s.entries.size() == 4);
    const double expect[] = {4.0, 2.0, 0.8, 0.4};
    for (int i = 0; i < 4; ++i)
        CHECK(s.entries[i].product == doctest::Approx(expect[i]).epsilon(1e-4));
    CHECK(r.err.find("max rel err") != std::string::npos);
}

TEST_CASE("reproduce: crossing for the first-derivative member") {
    const RunResult r = run_cli("reproduce --k 1 --t-max 10 --steps 21");
    CHECK(r.exit_code == 0);
    const auto pos = r.err.find("crosses below 4 at t = ");
    REQUIRE(pos != std::string::npos);
    const double t_star = std::stod(r.err.substr(pos + 23));
    CHECK(t_star == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("reproduce: usage and tolerance gates") {
    CHECK(run_cli("reproduce --steps 1").exit_code == 64);
    CHECK(run_cli("reproduce --k 7").exit_code == 64);
    CHECK(run_cli("bogus").exit_code == 64);
    CHECK(run_cli("reproduce --no-such-flag 1").exit_code == 64);
    const RunResult tight = run_cli("reproduce --k 0 --t-max 3 --steps 4 --rel-tol 1e-15");
    CHECK(tight.exit_code == 1);
    CHECK(tight.err.find("TOLERANCE") != std::string::npos);
}

TEST_CASE("reproduce: resource guard surfaces exit 3") {
    CHECK(run_cli("reproduce --k 0 --delta 0.05 --t-max 10000 --steps 5").exit_code == 3);
    // the environment cap makes even easy runs fail
    CHECK(run_cli("reproduce --k 0 --t-max 3 --steps 4", "FISHERLAB_MAX_N=64 ").exit_code == 3);
    CHECK(run_cli("reproduce --k 0 --t-max 3 --steps 4 --max-n 64").exit_code == 3);
}

TEST_CASE("conjecture: gaussian decays with exponent -2") {
    const fs::path out = scratch() / "conj.json";
    const RunResult r =
        run_cli("conjecture --state 'gaussian(delta=1)' --t-max 100 --format json --out " +
                out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("conjecture-consistent") != std::string::npos);
    std::string text = slurp(out);
    const auto pos = text.find("\"exponent\"");
    REQUIRE(pos != std::string::npos);
    const double alpha = std::stod(text.substr(text.find(':', pos) + 1));
    CHECK(alpha == doctest::Approx(-2.0).epsilon(0.02));
}

TEST_CASE("conjecture: state errors map to the contract") {
    CHECK(run_cli("conjecture --state 'file(/no/such/file.dat)'").exit_code == 2);
    CHECK(run_cli("conjecture --state 'vortex(1)'").exit_code == 64);
    CHECK(run_cli("conjecture --steps 5").exit_code == 64);
    CHECK(run_cli("conjecture --fit-tail-fraction 0.95").exit_code == 64);

    // a rough file state fails the smoothness proxy with exit 4
    const fs::path rough = scratch() / "rough.dat";
    {
        std::ofstream f(rough);
        for (int i = 0; i < 64; ++i) f << i * 0.25 << " " << ((i % 2) ? 1.0 : -1.0) << " 0\n";
    }
    CHECK(run_cli("conjecture --state 'file(" + rough.string() + ")'").exit_code == 4);
}

TEST_CASE("sweep: one file per family member") {
    const fs::path dir = scratch() / "sweep";
    const RunResult r = run_cli("sweep --k-list 0,1 --delta-list 0.5,1 --t-max 4 --steps 9 --out " +
                                dir.string());
    CHECK(r.exit_code == 0);
    for (const char* name : {"k0_delta0.5.csv", "k0_delta1.csv", "k1_delta0.5.csv",
                             "k1_delta1.csv"})
        CHECK(fs::exists(dir / name));
    const fl::CurveSeries s = fl::read_csv(dir / "k0_delta1.csv");
    CHECK(s.entries.size() == 9);
    CHECK(run_cli("sweep --delta-list 1").exit_code == 64);
}

TEST_CASE("config file: flat keys apply, flags override") {
    const fs::path cfg = scratch() / "run.cfg";
    std::ofstream(cfg) << "# defaults\ndelta = 2.0\nsteps = 5\n";
    const RunResult base = run_cli("reproduce --config " + cfg.string() + " --t-max 4");
    CHECK(base.exit_code == 0);
    {
        const fs::path tmp = scratch() / "cfg1.csv";
        std::ofstream(tmp, std::ios::binary) << base.out;
        const fl::CurveSeries s = fl::read_csv(tmp);
        REQUIRE(s.entries.size() == 5);  // steps from config
        CHECK(s.entries[0].i_p == doctest::Approx(8.0).epsilon(1e-6));  // delta from config
    }
    const RunResult over = run_cli("reproduce --config " + cfg.string() + " --t-max 4 --delta 1");
    {
        const fs::path tmp = scratch() / "cfg2.csv";
        std::ofstream(tmp, std::ios::binary) << over.out;
        const fl::CurveSeries s = fl::read_csv(tmp);
        CHECK(s.entries[0].i_p == doctest::Approx(2.0).epsilon(1e-6));  // flag wins
    }
    CHECK(run_cli("reproduce --config " + (scratch() / "absent.cfg").string()).exit_code == 2);
    const fs::path bad = scratch() / "bad.cfg";
    std::ofstream(bad) << "delta 2\n";
    CHECK(run_cli("reproduce --config " + bad.string()).exit_code == 64);
}

TEST_CASE("identical invocations produce identical bytes") {
    const fs::path a = scratch() / "det_a.csv";
    const fs::path b = scratch() / "det_b.csv";
    const std::string args = "reproduce --k 1 --t-max 8 --steps 17 --threads 4 --out ";
    CHECK(run_cli(args + a.string()).exit_code == 0);
    CHECK(run_cli(args + b.string()).exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
}

TEST_CASE("check subcommand runs the invariant battery") {
    const RunResult r = run_cli("check");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("all checks passed") != std::string::npos);
}

TEST_SUITE_END();
