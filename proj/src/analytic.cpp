#include "fisherlab/analytic.hpp"

#include <cmath>
#include <string>

#include "fisherlab/errors.hpp"

namespace fisherlab {

namespace {
constexpr int k_max = 64;  // Hermite recurrence / power bookkeeping stays finite here

void check_state(int k, double delta) {
    if (k < 0 || k > k_max) fail_usage("derivative order k must be in 0..64");
    if (!(delta > 0.0)) fail_usage("delta must be positive");
}

template <typename T>
T hermite_rec(int k, T y) {
    T h0 = T(1.0);
    if (k == 0) return h0;
    T h1 = 2.0 * y;
    for (int i = 1; i < k; ++i) {
        const T h2 = 2.0 * y * h1 - 2.0 * static_cast<double>(i) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

template <typename T>
T ipow(T base, int e) {
    T r = T(1.0);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

const double pi_quarter_inv = std::pow(std::numbers::pi, -0.25);
}  // namespace

ComplexWidth c_of_t(double delta, double t) {
    if (!(delta > 0.0)) fail_usage("delta must be positive");
    return ComplexWidth{1.0 / (2.0 * complexd(delta * delta, t))};
}

double hermite(int k, double y) {
    if (k < 0 || k > k_max) fail_usage("hermite degree must be in 0..64");
    return hermite_rec(k, y);
}

complexd hermite(int k, complexd y) {
    if (k < 0 || k > k_max) fail_usage("hermite degree must be in 0..64");
    return hermite_rec(k, y);
}

double norm_const_sq(int k, double delta) {
    check_state(k, delta);
    // sqrt(pi) delta^(2k) / Gamma(k + 1/2), with Gamma(k+1/2) expanded as
    // sqrt(pi) * prod_{i<k} (i + 1/2): the sqrt(pi) factors cancel exactly.
    double denom = 1.0;
    for (int i = 0; i < k; ++i) denom *= i + 0.5;
    return ipow(delta * delta, k) / denom;
}

complexd psi_k(const AnalyticState& s, double x) {
    check_state(s.k, s.delta);
    const complexd c2 = c_of_t(s.delta, s.t).c_squared;
    const complexd c = std::sqrt(c2);
    const complexd a = pi_quarter_inv * std::sqrt(2.0 * s.delta) * c;
    const double nk = std::sqrt(norm_const_sq(s.k, s.delta));
    return nk * ipow(-c, s.k) * hermite_rec(s.k, c * x) * a * std::exp(-c2 * x * x);
}

double density_x(const AnalyticState& s, double x) { return std::norm(psi_k(s, x)); }

double density_p(const AnalyticState& s, double p) {
    check_state(s.k, s.delta);
    double gamma_half = std::sqrt(std::numbers::pi);  // Gamma(1/2)
    for (int i = 0; i < s.k; ++i) gamma_half *= i + 0.5;
    return ipow(s.delta, 2 * s.k + 1) / gamma_half * ipow(p * p, s.k) *
           std::exp(-s.delta * s.delta * p * p);
}

std::optional<double> product_closed(const AnalyticState& s) {
    check_state(s.k, s.delta);
    const double d4 = ipow(s.delta, 4);
    if (s.k == 0) return 4.0 * d4 / (d4 + s.t * s.t);
    if (s.k == 1) return 36.0 * d4 / (d4 + s.t * s.t);
    return std::nullopt;
}

double fisher_p_exact(int k, double delta) {
    check_state(k, delta);
    if (k == 0) return 2.0 * delta * delta;
    return 4.0 * delta * delta * (k - 0.25) / (k - 0.5);
}

WaveFunction sample_state(const AnalyticState& s, const Grid& grid) {
    return normalize(sample([&s](double x) { return psi_k(s, x); }, grid));
}

}  // namespace fisherlab
