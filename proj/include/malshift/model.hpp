#ifndef MALSHIFT_MODEL_HPP
#define MALSHIFT_MODEL_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "malshift/element.hpp"
#include "malshift/errors.hpp"
#include "malshift/weights.hpp"

namespace malshift {

enum class ModelKind {
    operator_norm,
    exponential,
    polynomial,
    tree_branching,
    mixed,
    mixed_offset,
    damped,
    zorn,
    m_lambda,
    normalized_shift,
    heisenberg,
};

enum class NormKind { weighted_l1, euclidean, operator_2x2 };

// ---------------------------------------------------------------------------
// Zorn vector-matrix algebra: 2x2 blocks (a, u; v, b) with scalars a,b and
// 3-vectors u,v. Alternative but not associative; its commutator induces the
// split-octonion bracket used by the zorn shift model.
struct ZornElement {
    Rational a{0}, b{0};
    std::array<Rational, 3> u{Rational(0), Rational(0), Rational(0)};
    std::array<Rational, 3> v{Rational(0), Rational(0), Rational(0)};

    friend bool operator==(const ZornElement&, const ZornElement&) = default;
    friend ZornElement operator+(const ZornElement& p, const ZornElement& q);
    friend ZornElement operator-(const ZornElement& p, const ZornElement& q);
    ZornElement scaled(const Rational& c) const;
};

ZornElement zorn_multiply(const ZornElement& p, const ZornElement& q);
ZornElement zorn_identity();
// Fixed embedding of the seven imaginary units into the Zorn coordinates.
ZornElement zorn_unit(int i);  // i in 1..7
// Coordinates of z against {1, e1..e7}; exact.
std::array<Rational, 8> zorn_coords(const ZornElement& z);

// Unit products e_i e_j = sign * e_k, generated once from zorn_multiply.
// Index 0 is the ambient scalar 1. Every off-diagonal pair anticommutes, so
// the induced commutators are [e_i,e_j] = 2 sign e_k with coefficients in
// {0, +-2}.
struct OctonionTable {
    std::array<std::array<std::uint8_t, 8>, 8> unit;
    std::array<std::array<std::int8_t, 8>, 8> sign;
};
const OctonionTable& octonion_table();

// ---------------------------------------------------------------------------
struct ModelParams {
    std::map<std::string, Rational> scalars;
    std::vector<int> offsets;  // mixed_offset stencil, sorted
};

// Declarative model description: weight law, bracket stencil, degree
// restrictions, and (for special models) the ambient alternative product.
class ModelSpec {
public:
    ModelKind kind;
    std::string name;
    WeightLaw weight;
    NormKind norm_kind = NormKind::weighted_l1;
    int unit_dim = 0;            // 0 = scalar shifts
    std::uint32_t min_degree = 0;
    bool has_shifts = true;      // false: degree 0 only (m_lambda, matrix models)
    bool special = false;        // ambient product present

    Rational alpha{2}, gamma{1}, lambda{0};
    double alpha_d = 2, gamma_d = 1, lambda_d = 0;
    double p = 0;
    bool p_integral = false;
    long p_int = 0;
    long branching = 0;
    std::vector<int> offsets;

    ModelSpec(ModelKind k, std::string n, WeightLaw w)
        : kind(k), name(std::move(n)), weight(std::move(w)) {}

    // Closed-form bound on the bracket constant.
    double analytic_B() const;
    std::optional<Rational> analytic_B_exact() const;

    // Degree restriction check for a single basis index.
    void check_index(BasisIndex b) const;
    template <class S>
    void check_element(const Element<S>& x) const {
        for (const auto& [b, c] : x.terms()) check_index(b);
    }

    // Realized antisymmetric bracket on basis generators.
    template <class S>
    void bracket_terms(BasisIndex a, BasisIndex b, typename Element<S>::Builder& out) const;

    // Ambient alternative product on basis generators (special models only).
    template <class S>
    void ambient_terms(BasisIndex a, BasisIndex b, typename Element<S>::Builder& out) const;

    // Envelope local ratio (sum_k |c_{m,n}^k| w_k) / (w_m w_n), with the
    // coefficient magnitudes at their stencil cap and, for unit-carrying
    // models, maximized over unit pairs. This is the quantity whose sup over
    // (m,n) the closed forms bound; the realized antisymmetric signs vanish on
    // the diagonal but the scan tracks the stencil profile. Exponential weight
    // factors cancel in every family, so the exact form stays small.
    std::optional<Rational> local_ratio_exact(std::uint32_t m, std::uint32_t n) const;
    double local_ratio_approx(std::uint32_t m, std::uint32_t n) const;

    ModelSpec with_min_degree(std::uint32_t d) const {
        ModelSpec m = *this;
        m.min_degree = d;
        return m;
    }

private:
    [[noreturn]] void degree_violation(BasisIndex b) const;
};

// Valid names: operator_norm, exponential, polynomial, tree_branching, mixed,
// mixed_offset, damped, zorn, m_lambda, normalized_shift (+ heisenberg, the
// nilpotent matrix model used by the BCH oracles).
ModelSpec catalog_lookup(const std::string& name, const ModelParams& params = {});
std::vector<std::string> catalog_names();

// The ten rows behind the published constants table, in order.
std::vector<std::pair<std::string, ModelParams>> standard_table_rows();

// ---------------------------------------------------------------------------
// Norms. Float norms are the workhorse; exact norms exist for weighted-l1
// models with exact weights and feed the exact saturation checks.
template <class S>
double norm(const ModelSpec& model, const Element<S>& x);
std::optional<Rational> norm_exact(const ModelSpec& model, const ElementQ& x);

double operator_2x2_norm(double m00, double m01, double m10, double m11);

// ---------------------------------------------------------------------------
struct BracketOptions {
    std::uint32_t degree_cap = UINT32_MAX;
    // Weighted mass of the coefficients dropped at the cap, so truncated norm
    // bounds remain lower bounds of the untruncated ones.
    double* discarded_mass = nullptr;
};

namespace detail {
template <class S>
Element<S> bilinear_apply(const ModelSpec& model, const Element<S>& x, const Element<S>& y,
                          bool ambient, const BracketOptions& opt) {
    typename Element<S>::Builder out;
    typename Element<S>::Builder dropped;
    for (const auto& [bx, cx] : x.terms()) {
        for (const auto& [by, cy] : y.terms()) {
            typename Element<S>::Builder cell;
            if (ambient)
                model.ambient_terms<S>(bx, by, cell);
            else
                model.bracket_terms<S>(bx, by, cell);
            Element<S> terms = std::move(cell).done();
            S prod = cx * cy;
            for (const auto& [bo, co] : terms.terms()) {
                if (bo.degree > opt.degree_cap) {
                    if (opt.discarded_mass)
                        dropped.add(bo, co * prod);
                    continue;
                }
                out.add(bo, co * prod);
            }
        }
    }
    if (opt.discarded_mass) {
        Element<S> d = std::move(dropped).done();
        *opt.discarded_mass += norm<S>(model, d);
    }
    return std::move(out).done().cleaned();
}
}  // namespace detail

template <class S>
Element<S> bracket(const ModelSpec& model, const Element<S>& x, const Element<S>& y,
                   const BracketOptions& opt = {}) {
    model.check_element(x);
    model.check_element(y);
    return detail::bilinear_apply(model, x, y, /*ambient=*/false, opt);
}

template <class S>
Element<S> ambient_mul(const ModelSpec& model, const Element<S>& x, const Element<S>& y,
                       const BracketOptions& opt = {}) {
    if (!model.special)
        throw unsupported_model_error(
            "model '" + model.name +
            "' is not special: no ambient alternative product, exp/log undefined");
    return detail::bilinear_apply(model, x, y, /*ambient=*/true, opt);
}

// J(x,y,z) = [[x,y],z] + [[y,z],x] + [[z,x],y]
template <class S>
Element<S> jacobiator(const ModelSpec& model, const Element<S>& x, const Element<S>& y,
                      const Element<S>& z, const BracketOptions& opt = {}) {
    return bracket(model, bracket(model, x, y, opt), z, opt) +
           bracket(model, bracket(model, y, z, opt), x, opt) +
           bracket(model, bracket(model, z, x, opt), y, opt);
}

// Malcev identity defect: [[x,y],[x,z]] - [[[x,y],z],x] - [[[y,z],x],x] - [[[z,x],x],y].
// Third term per Sagle's form of the identity; the variant ending [...,y],x]
// fails already for so(3), so it cannot be the intended axiom.
template <class S>
Element<S> malcev_defect(const ModelSpec& model, const Element<S>& x, const Element<S>& y,
                         const Element<S>& z, const BracketOptions& opt = {}) {
    Element<S> xy = bracket(model, x, y, opt);
    Element<S> lhs = bracket(model, xy, bracket(model, x, z, opt), opt);
    Element<S> rhs = bracket(model, bracket(model, xy, z, opt), x, opt) +
                     bracket(model, bracket(model, bracket(model, y, z, opt), x, opt), x, opt) +
                     bracket(model, bracket(model, bracket(model, z, x, opt), x, opt), y, opt);
    return lhs - rhs;
}

template <class S>
double malcev_residual(const ModelSpec& model, const Element<S>& x, const Element<S>& y,
                       const Element<S>& z) {
    return norm(model, malcev_defect(model, x, y, z));
}

// Ambient associator (xy)z - x(yz).
template <class S>
Element<S> associator(const ModelSpec& model, const Element<S>& x, const Element<S>& y,
                      const Element<S>& z, const BracketOptions& opt = {}) {
    return ambient_mul(model, ambient_mul(model, x, y, opt), z, opt) -
           ambient_mul(model, x, ambient_mul(model, y, z, opt), opt);
}

// Parses a bare {"alpha": "2", ...} object (rationals as strings or numbers).
ModelParams params_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// JSON model configuration, round-trips losslessly (rationals as strings).
struct ModelConfig {
    std::string model;
    ModelParams params;
    std::string backend = "float";  // "exact" | "float"
    std::uint32_t shift_cap = 64;

    ModelSpec resolve() const { return catalog_lookup(model, params); }
    std::string to_json() const;
    static ModelConfig from_json(const std::string& text);
    friend bool operator==(const ModelConfig&, const ModelConfig&);
};

// --- template implementations ---------------------------------------------

namespace detail {
// Antisymmetric default sign: +1 below the diagonal in (m,n), 0 on it.
inline int eps_sign(std::uint32_t m, std::uint32_t n) { return m < n ? 1 : (m > n ? -1 : 0); }

template <class S>
inline S stencil_scalar(const ModelSpec& model, std::uint32_t total_degree) {
    // damped stencil carries gamma^{m+n}; every other scalar stencil is +-1.
    if (model.kind == ModelKind::damped) {
        if constexpr (std::is_same_v<S, double>)
            return std::pow(model.gamma_d, static_cast<double>(total_degree));
        else
            return rat_pow(model.gamma, total_degree);
    }
    return S(1);
}
}  // namespace detail

template <class S>
void ModelSpec::bracket_terms(BasisIndex a, BasisIndex b, typename Element<S>::Builder& out) const {
    switch (kind) {
        case ModelKind::exponential:
        case ModelKind::polynomial:
        case ModelKind::mixed:
        case ModelKind::normalized_shift:
        case ModelKind::damped: {
            int e = detail::eps_sign(a.degree, b.degree);
            if (e == 0) return;
            S c = detail::stencil_scalar<S>(*this, a.degree + b.degree);
            out.add(BasisIndex{0, a.degree + b.degree}, S(e) * c);
            return;
        }
        case ModelKind::tree_branching: {
            int e = detail::eps_sign(a.degree, b.degree);
            if (e == 0) return;
            for (long j = 0; j < branching; ++j)
                out.add(BasisIndex{0, a.degree + b.degree + static_cast<std::uint32_t>(j)}, S(e));
            return;
        }
        case ModelKind::mixed_offset: {
            int e = detail::eps_sign(a.degree, b.degree);
            if (e == 0) return;
            for (int d : offsets) {
                long k = static_cast<long>(a.degree) + b.degree + d;
                if (k < 0) continue;
                out.add(BasisIndex{0, static_cast<std::uint32_t>(k)}, S(e));
            }
            return;
        }
        case ModelKind::zorn: {
            if (a.unit == 0 || b.unit == 0 || a.unit == b.unit) return;
            const auto& t = octonion_table();
            out.add(BasisIndex{t.unit[a.unit][b.unit], a.degree + b.degree},
                    S(2 * t.sign[a.unit][b.unit]));
            return;
        }
        case ModelKind::m_lambda: {
            if (a.unit == 0 || b.unit == 0 || a.unit == b.unit) return;
            // [e1,e2]=e3, [e2,e3]=lambda e1, [e3,e1]=lambda e2
            auto emit = [&](std::uint32_t i, std::uint32_t j, std::uint32_t k, bool scaled) {
                int sgn = (a.unit == i && b.unit == j) ? 1 : -1;
                S c = scaled ? scalar_cast<S>(lambda) : S(1);
                out.add(BasisIndex{k, 0}, S(sgn) * c);
            };
            std::uint32_t i = a.unit, j = b.unit;
            if ((i == 1 && j == 2) || (i == 2 && j == 1)) emit(1, 2, 3, false);
            if ((i == 2 && j == 3) || (i == 3 && j == 2)) emit(2, 3, 1, true);
            if ((i == 3 && j == 1) || (i == 1 && j == 3)) emit(3, 1, 2, true);
            return;
        }
        case ModelKind::operator_norm: {
            // units: 1 = H = diag(1,-1), 2 = E = E12, 3 = F = E21
            if (a.unit == 0 || b.unit == 0 || a.unit == b.unit) return;
            std::uint32_t i = a.unit, j = b.unit;
            int sgn = 1;
            if (i > j) {
                std::swap(i, j);
                sgn = -1;
            }
            if (i == 1 && j == 2) out.add(BasisIndex{2, 0}, S(2 * sgn));        // [H,E]=2E
            else if (i == 1 && j == 3) out.add(BasisIndex{3, 0}, S(-2 * sgn));  // [H,F]=-2F
            else if (i == 2 && j == 3) out.add(BasisIndex{1, 0}, S(sgn));       // [E,F]=H
            return;
        }
        case ModelKind::heisenberg: {
            if (a.unit == 1 && b.unit == 2) out.add(BasisIndex{3, 0}, S(1));
            if (a.unit == 2 && b.unit == 1) out.add(BasisIndex{3, 0}, S(-1));
            return;
        }
    }
}

template <class S>
void ModelSpec::ambient_terms(BasisIndex a, BasisIndex b, typename Element<S>::Builder& out) const {
    switch (kind) {
        case ModelKind::zorn: {
            const auto& t = octonion_table();
            out.add(BasisIndex{t.unit[a.unit][b.unit], a.degree + b.degree},
                    S(t.sign[a.unit][b.unit]));
            return;
        }
        case ModelKind::operator_norm: {
            std::uint32_t i = a.unit, j = b.unit;
            if (i == 0) { out.add(b, S(1)); return; }
            if (j == 0) { out.add(a, S(1)); return; }
            if (i == 1 && j == 1) { out.add(BasisIndex{0, 0}, S(1)); return; }   // H H = I
            if (i == 1 && j == 2) { out.add(BasisIndex{2, 0}, S(1)); return; }   // H E = E
            if (i == 2 && j == 1) { out.add(BasisIndex{2, 0}, S(-1)); return; }  // E H = -E
            if (i == 1 && j == 3) { out.add(BasisIndex{3, 0}, S(-1)); return; }  // H F = -F
            if (i == 3 && j == 1) { out.add(BasisIndex{3, 0}, S(1)); return; }   // F H = F
            if (i == 2 && j == 3) {                                              // E F = (I+H)/2
                out.add(BasisIndex{0, 0}, scalar_cast<S>(Rational(1, 2)));
                out.add(BasisIndex{1, 0}, scalar_cast<S>(Rational(1, 2)));
                return;
            }
            if (i == 3 && j == 2) {                                              // F E = (I-H)/2
                out.add(BasisIndex{0, 0}, scalar_cast<S>(Rational(1, 2)));
                out.add(BasisIndex{1, 0}, scalar_cast<S>(Rational(-1, 2)));
                return;
            }
            return;  // E E = F F = 0
        }
        case ModelKind::heisenberg: {
            if (a.unit == 0) { out.add(b, S(1)); return; }
            if (b.unit == 0) { out.add(a, S(1)); return; }
            if (a.unit == 1 && b.unit == 2) out.add(BasisIndex{3, 0}, S(1));  // E12 E23 = E13
            return;  // all other unit products vanish
        }
        default:
            throw unsupported_model_error(
                "model '" + name +
                "' is not special: no ambient alternative product, exp/log undefined");
    }
}

template <class S>
double norm(const ModelSpec& model, const Element<S>& x) {
    switch (model.norm_kind) {
        case NormKind::weighted_l1: {
            double acc = 0;
            for (const auto& [b, c] : x.terms())
                acc += detail::scalar_abs_d(c) * model.weight.weight(b.degree);
            return acc;
        }
        case NormKind::euclidean: {
            double acc = 0;
            for (const auto& [b, c] : x.terms()) {
                double v = detail::scalar_abs_d(c);
                acc += v * v;
            }
            return std::sqrt(acc);
        }
        case NormKind::operator_2x2: {
            double m[4] = {0, 0, 0, 0};  // I, H, E, F coefficients
            for (const auto& [b, c] : x.terms()) {
                double v;
                if constexpr (std::is_same_v<S, double>) v = c;
                else v = to_double(c);
                if (b.unit <= 3) m[b.unit] += v;
            }
            return operator_2x2_norm(m[0] + m[1], m[2], m[3], m[0] - m[1]);
        }
    }
    return 0.0;
}

}  // namespace malshift

#endif
