#include "malshift/constants.hpp"

#include <cmath>
#include <sstream>

namespace malshift {

namespace {

// First unit pair attaining the maximized ratio numerator, for witness text.
std::pair<int, int> witness_units(const ModelSpec& model) {
    switch (model.kind) {
        case ModelKind::m_lambda:
            return rat_abs(model.lambda) > 1 ? std::pair{2, 3} : std::pair{1, 2};
        case ModelKind::zorn:
        case ModelKind::operator_norm:
        case ModelKind::heisenberg:
            return {1, 2};
        default:
            return {0, 0};
    }
}

std::string witness_text(const ModelSpec& model, std::uint32_t m, std::uint32_t n) {
    std::ostringstream os;
    if (model.unit_dim > 0) {
        auto [i, j] = witness_units(model);
        os << "((i=" << i << ",m=" << m << "),(j=" << j << ",n=" << n << "))";
    } else {
        os << "(m=" << m << ",n=" << n << ")";
    }
    return os.str();
}

}  // namespace

double local_ratio(const ModelSpec& model, std::uint32_t m, std::uint32_t n) {
    if (m < model.min_degree || n < model.min_degree)
        throw std::domain_error("local_ratio: model '" + model.name +
                                "' restricts shift degrees to >= " +
                                std::to_string(model.min_degree));
    if (!model.has_shifts && (m != 0 || n != 0))
        throw std::domain_error("local_ratio: model '" + model.name +
                                "' carries no shift grading; only (0,0) is defined");
    auto exact = model.local_ratio_exact(m, n);
    if (exact) return to_double(*exact);
    return model.local_ratio_approx(m, n);
}

ConstantReport bracket_constant(const ModelSpec& model, std::uint32_t M, double K,
                                par::Mode mode) {
    if (M < 2) throw config_error("bracket_constant: scan bound M must be >= 2");
    std::uint32_t lo = model.min_degree;
    std::uint32_t hi = model.has_shifts ? M : 0;
    if (hi < lo) hi = lo;
    std::size_t side = hi - lo + 1;

    auto [best, idx] = par::argmax_indexed<double>(
        side * side,
        [&](std::size_t c) {
            std::uint32_t m = lo + static_cast<std::uint32_t>(c / side);
            std::uint32_t n = lo + static_cast<std::uint32_t>(c % side);
            return local_ratio(model, m, n);
        },
        mode);

    ConstantReport r;
    r.model = model.name;
    r.params = params_to_string(model);
    r.B_empirical = best;
    r.B_analytic = model.analytic_B();
    r.attained = std::fabs(r.B_empirical - r.B_analytic) <= 1e-9 * std::fabs(r.B_analytic);
    r.witness = witness_text(model, lo + static_cast<std::uint32_t>(idx / side),
                             lo + static_cast<std::uint32_t>(idx % side));
    r.K = K;
    r.rho = 1.0 / (4.0 * K * r.B_analytic);
    return r;
}

std::vector<ConstantReport> generate_table(
    const std::vector<std::pair<std::string, ModelParams>>& rows, double K, std::uint32_t M,
    par::Mode mode) {
    std::vector<ConstantReport> out;
    out.reserve(rows.size());
    for (const auto& [name, params] : rows)
        out.push_back(bracket_constant(catalog_lookup(name, params), M, K, mode));
    return out;
}

PolyScanResult poly_weight_inequality_check(double p, std::uint32_t M, par::Mode mode) {
    if (p < 0) throw config_error("poly_weight_inequality_check: p must be >= 0");
    std::size_t side = static_cast<std::size_t>(M) + 1;
    auto [best, idx] = par::argmax_indexed<double>(
        side * side,
        [&](std::size_t c) {
            double m = static_cast<double>(c / side);
            double n = static_cast<double>(c % side);
            return std::pow((1.0 + m + n) / ((1.0 + m) * (1.0 + n)), p);
        },
        mode);
    PolyScanResult r;
    r.max_ratio = best;
    r.arg_m = static_cast<std::uint32_t>(idx / side);
    r.arg_n = static_cast<std::uint32_t>(idx % side);
    r.bound = std::pow(2.0, p);
    return r;
}

std::string params_to_string(const ModelSpec& model) {
    std::ostringstream os;
    bool first = true;
    auto put = [&](const std::string& k, const std::string& v) {
        if (!first) os << ";";
        os << k << "=" << v;
        first = false;
    };
    switch (model.kind) {
        case ModelKind::exponential:
        case ModelKind::normalized_shift:
        case ModelKind::zorn:
            put("alpha", rat_to_string(model.alpha));
            break;
        case ModelKind::polynomial:
            put("p", rat_to_string(Rational(model.p_int)));
            break;
        case ModelKind::mixed:
            put("alpha", rat_to_string(model.alpha));
            put("p", rat_to_string(Rational(model.p_int)));
            break;
        case ModelKind::mixed_offset: {
            put("alpha", rat_to_string(model.alpha));
            put("p", rat_to_string(Rational(model.p_int)));
            std::ostringstream d;
            d << "{";
            for (std::size_t i = 0; i < model.offsets.size(); ++i)
                d << (i ? "," : "") << model.offsets[i];
            d << "}";
            put("D", d.str());
            break;
        }
        case ModelKind::tree_branching:
            put("b", std::to_string(model.branching));
            break;
        case ModelKind::damped:
            put("gamma", rat_to_string(model.gamma));
            if (model.min_degree == 0) put("min_degree", "0");
            break;
        case ModelKind::m_lambda:
            put("lambda", rat_to_string(model.lambda));
            break;
        case ModelKind::operator_norm:
        case ModelKind::heisenberg:
            break;
    }
    return os.str();
}

}  // namespace malshift
