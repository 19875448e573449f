#include "fisherlab/series.hpp"

#include <cmath>
#include <string>

#include "fisherlab/errors.hpp"

namespace fisherlab {

DecayFit fit_decay(const CurveSeries& series, double t_lo, double t_hi) {
    std::vector<double> lt, lp;
    for (const CurveEntry& e : series.entries) {
        if (e.t < t_lo || e.t > t_hi) continue;
        if (e.t <= 0.0) continue;
        if (!(e.product > 0.0))
            fail_bad_state("decay fit needs positive products in the window (t = " +
                           std::to_string(e.t) + ")");
        lt.push_back(std::log(e.t));
        lp.push_back(std::log(e.product));
    }
    const size_t m = lt.size();
    if (m < 5)
        fail_usage("decay fit window holds " + std::to_string(m) + " samples; at least 5 needed");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += lt[i];
        sy += lp[i];
        sxx += lt[i] * lt[i];
        sxy += lt[i] * lp[i];
    }
    const double denom = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;

    double ss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double r = lp[i] - (intercept + slope * lt[i]);
        ss += r * r;
    }
    return DecayFit{std::exp(intercept), slope, t_lo, t_hi, std::sqrt(ss / m)};
}

std::optional<double> crossing_time(const CurveSeries& series, double threshold,
                                    const std::function<double(double)>& reevaluate,
                                    double refine_tol) {
    const auto& es = series.entries;
    if (es.empty()) fail_usage("crossing_time needs a nonempty series");

    size_t i = 0;
    while (i < es.size() && es[i].product >= threshold) ++i;
    if (i == es.size()) return std::nullopt;  // never drops below
    if (i == 0) return es[0].t;               // already below at the first sample

    double lo = es[i - 1].t, hi = es[i].t;
    if (reevaluate) {
        const double tol = refine_tol > 0.0 ? refine_tol : 1e-6 * es.back().t;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (reevaluate(mid) < threshold ? hi : lo) = mid;
        }
        return hi;
    }
    // Linear interpolation fallback on the bracketing samples.
    const double p0 = es[i - 1].product, p1 = es[i].product;
    const double w = (p0 - threshold) / (p0 - p1);
    return lo + w * (hi - lo);
}

}  // namespace fisherlab
