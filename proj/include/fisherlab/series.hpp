#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fisherlab {

struct CurveEntry {
    double t = 0.0;
    double i_x = 0.0;
    double i_p = 0.0;
    double product = 0.0;
    std::optional<double> analytic_product;

    std::optional<double> rel_err() const {
        if (!analytic_product || *analytic_product == 0.0) return std::nullopt;
        return std::abs(product - *analytic_product) / *analytic_product;
    }
};

// Power-law fit product ~ amplitude * t^exponent over [t_lo, t_hi].
struct DecayFit {
    double amplitude = 0.0;
    double exponent = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double residual = 0.0;  // rms in log-log
};

struct CurveSeries {
    std::vector<CurveEntry> entries;              // strictly ascending in t
    std::map<std::string, std::string> meta;      // descriptor, delta, estimator, grid summary
    std::optional<DecayFit> fit;
};

// Least squares line in (log t, log product); requires >= 5 samples in the
// window, all with product > 0 and t > 0.
DecayFit fit_decay(const CurveSeries& series, double t_lo, double t_hi);

// Smallest t where the product crosses below threshold. The bracketing pair of
// samples is refined by bisection on `reevaluate` (the numeric product at
// arbitrary t) down to refine_tol when provided; otherwise the crossing is
// linearly interpolated. Returns nothing if the series never drops below.
std::optional<double> crossing_time(const CurveSeries& series, double threshold,
                                    const std::function<double(double)>& reevaluate = {},
                                    double refine_tol = 0.0);

}  // namespace fisherlab
