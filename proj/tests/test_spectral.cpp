#include <doctest.h>

#include <cmath>
#include <vector>

#include "fisherlab/errors.hpp"
#include "fisherlab/grid.hpp"
#include "fisherlab/spectral.hpp"
#include "helpers.hpp"

namespace fl = fisherlab;

namespace {

std::vector<double> gaussian_samples(const fl::Grid& g) {
    std::vector<double> f(g.n);
    for (int m = 0; m < g.n; ++m) f[m] = std::exp(-g.x(m) * g.x(m));
    return f;
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("spectral derivative of a decayed Gaussian") {
    const fl::Grid g = fl::make_grid(-10.0, 10.0, 256);
    const std::vector<double> f = gaussian_samples(g);
    const std::vector<double> d1 = fl::spectral_derivative(f, g.dx, 1);
    const std::vector<double> d2 = fl::spectral_derivative(f, g.dx, 2);
    double w1 = 0.0, w2 = 0.0;
    for (int m = 0; m < g.n; ++m) {
        const double x = g.x(m);
        const double e = std::exp(-x * x);
        w1 = std::max(w1, std::abs(d1[m] - (-2.0 * x * e)));
        w2 = std::max(w2, std::abs(d2[m] - (4.0 * x * x - 2.0) * e));
    }
    CHECK(w1 < 1e-10);
    CHECK(w2 < 1e-8);
}

TEST_CASE("spectral derivative order precondition") {
    const fl::Grid g = fl::make_grid(-10.0, 10.0, 64);
    const std::vector<double> f = gaussian_samples(g);
    CHECK_THROWS_AS(fl::spectral_derivative(f, g.dx, 3), fl::Error);
    CHECK_THROWS_AS(fl::spectral_derivative(f, g.dx, 0), fl::Error);
}

TEST_CASE("finite differences: fourth-order convergence") {
    // halving dx must shrink the worst interior error by ~2^4
    double prev1 = 0.0, prev2 = 0.0;
    std::vector<double> errs1, errs2;
    for (int n : {512, 1024}) {
        const fl::Grid g = fl::make_grid(-10.0, 10.0, n);
        const std::vector<double> f = gaussian_samples(g);
        const std::vector<double> d1 = fl::fd_derivative4(f, g.dx);
        const std::vector<double> d2 = fl::fd_second_derivative4(f, g.dx);
        double w1 = 0.0, w2 = 0.0;
        for (int m = 2; m < g.n - 2; ++m) {
            const double x = g.x(m);
            const double e = std::exp(-x * x);
            w1 = std::max(w1, std::abs(d1[m] - (-2.0 * x * e)));
            w2 = std::max(w2, std::abs(d2[m] - (4.0 * x * x - 2.0) * e));
        }
        errs1.push_back(w1);
        errs2.push_back(w2);
        prev1 = w1;
        prev2 = w2;
    }
    (void)prev1;
    (void)prev2;
    CHECK(errs1[0] / errs1[1] > 12.0);
    CHECK(errs2[0] / errs2[1] > 12.0);
    CHECK(errs1[1] < 4e-7);
    CHECK(errs2[1] < 1e-5);
}

TEST_CASE("finite differences use zero extension at the ends") {
    // A sequence that has fully decayed at the boundary is differentiated
    // without wrap-around artifacts: endpoint derivative stays near zero.
    const fl::Grid g = fl::make_grid(-10.0, 10.0, 512);
    const std::vector<double> f = gaussian_samples(g);
    const std::vector<double> d1 = fl::fd_derivative4(f, g.dx);
    CHECK(std::abs(d1.front()) < 1e-20);
    CHECK(std::abs(d1.back()) < 1e-20);
}

TEST_SUITE_END();
