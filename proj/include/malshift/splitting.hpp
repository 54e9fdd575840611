#ifndef MALSHIFT_SPLITTING_HPP
#define MALSHIFT_SPLITTING_HPP

#include <vector>

#include "malshift/bch.hpp"
#include "malshift/model.hpp"

namespace malshift {

// Step-size bound dt_max = 1/(4 K B (||A||+||B||)); +inf for zero generators.
double stability_threshold(const ModelSpec& model, const ElementD& A_gen, const ElementD& B_gen,
                           double K = 1.0);

struct SplittingExperiment {
    ModelSpec model;
    ElementD A_gen, B_gen;
    std::vector<double> dt_grid;
    int N = 5;           // truncation order under test
    int ref_extra = 8;   // reference = truncation at N + ref_extra
    double K = 1.0;
    int horizon = 1;     // steps for compose_horizon; the sweep itself is single-step
};

// Effective log of `steps` identical splitting steps: iterates
// w <- BCH_N(w, step_log). Since w stays in the subalgebra generated by
// step_log alone, every bracket vanishes and the result is steps * step_log
// exactly; provided for composing experiments, the stability analysis is
// per step.
ElementD compose_horizon(const ModelSpec& model, const ElementD& step_log, int steps, int N);

struct SweepPoint {
    double dt = 0;
    double error = 0;  // ||BCH_{N+ref} - BCH_N|| at (dt A, dt B)
    bool within = false;
};

struct SweepResult {
    double dt_max = 0;
    int N = 0;
    std::vector<SweepPoint> points;  // ordered by dt
};

SweepResult sweep(const SplittingExperiment& exp, par::Mode mode = par::default_mode());

std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count);

// Least-squares slope of log(error) against log(dt) over points with dt <= cutoff.
double fit_loglog_slope(const std::vector<SweepPoint>& points, double cutoff,
                        double* intercept = nullptr);

}  // namespace malshift

#endif
