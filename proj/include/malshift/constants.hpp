#ifndef MALSHIFT_CONSTANTS_HPP
#define MALSHIFT_CONSTANTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "malshift/model.hpp"
#include "malshift/parallel.hpp"

namespace malshift {

// Local ratio B_{m,n} = (sum_k |c_{m,n}^k| w_k) / (w_m w_n), with coefficient
// magnitudes at their stencil cap and unit pairs maximized out. Exact rational
// evaluation wherever the weights allow, converted to double on return.
double local_ratio(const ModelSpec& model, std::uint32_t m, std::uint32_t n);

struct ConstantReport {
    std::string model;
    std::string params;
    double B_empirical = 0;
    double B_analytic = 0;
    bool attained = false;
    std::string witness;
    double K = 1;
    double rho = 0;
};

// Scans 0 <= m,n <= M (respecting min_degree; degree {0} for shiftless models)
// for the empirical sup of local ratios, pairs it with the closed-form bound,
// and derives rho = 1/(4 K B_analytic).
ConstantReport bracket_constant(const ModelSpec& model, std::uint32_t M, double K = 1.0,
                                par::Mode mode = par::default_mode());

std::vector<ConstantReport> generate_table(
    const std::vector<std::pair<std::string, ModelParams>>& rows, double K = 1.0,
    std::uint32_t M = 50, par::Mode mode = par::default_mode());

struct PolyScanResult {
    double max_ratio = 0;
    std::uint32_t arg_m = 0, arg_n = 0;
    double bound = 1;  // 2^p
};

// Exhaustive check of (1+m+n)^p <= 2^p (1+m)^p (1+n)^p over 0 <= m,n <= M.
PolyScanResult poly_weight_inequality_check(double p, std::uint32_t M,
                                            par::Mode mode = par::default_mode());

std::string params_to_string(const ModelSpec& model);

}  // namespace malshift

#endif
