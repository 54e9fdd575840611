#include "malshift/splitting.hpp"

#include <cmath>

namespace malshift {

double stability_threshold(const ModelSpec& model, const ElementD& A_gen, const ElementD& B_gen,
                           double K) {
    double s = norm(model, A_gen) + norm(model, B_gen);
    if (s == 0) return std::numeric_limits<double>::infinity();
    return 1.0 / (4.0 * K * model.analytic_B() * s);
}

SweepResult sweep(const SplittingExperiment& exp, par::Mode mode) {
    if (!exp.model.special)
        throw unsupported_model_error("sweep: model '" + exp.model.name + "' is not special");
    SweepResult out;
    out.N = exp.N;
    out.dt_max = stability_threshold(exp.model, exp.A_gen, exp.B_gen, exp.K);

    int ref = exp.N + exp.ref_extra;
    out.points = par::map_indexed<SweepPoint>(
        exp.dt_grid.size(),
        [&](std::size_t i) {
            SweepPoint pt;
            pt.dt = exp.dt_grid[i];
            // The degree-(<=N) slots of the order-(N+ref) series coincide with
            // BCH_N, so one deep truncation yields the difference directly.
            Bigraded<double> Z = bch_truncated<double>(exp.A_gen * pt.dt, exp.B_gen * pt.dt,
                                                       exp.model, ref);
            Element<double> high;
            for (const auto& [g, e] : Z.slots)
                if (g.first + g.second > exp.N) high = high + e;
            pt.error = norm(exp.model, high);
            pt.within = pt.dt < out.dt_max;
            return pt;
        },
        mode);
    return out;
}

ElementD compose_horizon(const ModelSpec& model, const ElementD& step_log, int steps, int N) {
    if (steps < 1) throw std::domain_error("compose_horizon: steps must be >= 1");
    ElementD w = step_log;
    // cleaned(): cancellation dust on the scalar slot would trip the
    // unit-free precondition of the next exp
    for (int k = 1; k < steps; ++k)
        w = bch_truncated<double>(w, step_log, model, N).total().cleaned();
    return w;
}

std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count) {
    if (lo <= 0 || hi <= lo || count < 2)
        throw config_error("log_spaced_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> g(count);
    double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                  static_cast<double>(count - 1));
    return g;
}

double fit_loglog_slope(const std::vector<SweepPoint>& points, double cutoff, double* intercept) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto& p : points) {
        if (p.dt > cutoff || p.error <= 0) continue;
        double x = std::log(p.dt), y = std::log(p.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::domain_error("fit_loglog_slope: fewer than 2 usable points");
    double dn = static_cast<double>(n);
    double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    if (intercept) *intercept = (sy - slope * sx) / dn;
    return slope;
}

}  // namespace malshift
