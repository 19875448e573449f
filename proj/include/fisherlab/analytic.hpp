#pragma once

#include <complex>
#include <optional>

#include "fisherlab/grid.hpp"

namespace fisherlab {

// Member of the free-particle Hermite-Gaussian family: the normalized k-th
// spatial derivative of a spreading Gaussian of initial width delta, at time t
// (hbar = 1, unit mass).
struct AnalyticState {
    int k = 0;
    double delta = 1.0;
    double t = 0.0;
};

// c(t)^2 = 1 / (2*(delta^2 + i t)); Re c^2 > 0 for all finite t.
struct ComplexWidth {
    complexd c_squared;
    complexd c() const { return std::sqrt(c_squared); }  // principal branch
};

ComplexWidth c_of_t(double delta, double t);

// Physicists' Hermite polynomial via the three-term recurrence; k in [0, 64].
double hermite(int k, double y);
complexd hermite(int k, complexd y);

// |N_k|^2 = delta^(2k) / prod_{i<k} (i + 1/2), the squared normalization of
// the k-th derivative state (time-independent). N_k itself is taken real >= 0.
double norm_const_sq(int k, double delta);

// psi^(k)(x,t) = N_k (-c)^k H_k(c x) A(t) exp(-c^2 x^2), A = pi^{-1/4} sqrt(2 delta) c.
complexd psi_k(const AnalyticState& s, double x);

// |psi^(k)(x,t)|^2
double density_x(const AnalyticState& s, double x);

// Momentum density delta^(2k+1)/Gamma(k+1/2) p^(2k) exp(-delta^2 p^2);
// time-independent under free evolution.
double density_p(const AnalyticState& s, double p);

// Closed-form Fisher product, known for k <= 1 only:
//   k=0: 4 delta^4/(delta^4+t^2),  k=1: 36 delta^4/(delta^4+t^2).
std::optional<double> product_closed(const AnalyticState& s);

// Momentum Fisher information of the family: 2 delta^2 for k=0,
// 4 delta^2 (k - 1/4)/(k - 1/2) for k >= 1.
double fisher_p_exact(int k, double delta);

// Sample psi^(k)(., t) on a grid and normalize.
WaveFunction sample_state(const AnalyticState& s, const Grid& grid);

}  // namespace fisherlab
