#ifndef MALSHIFT_BCH_HPP
#define MALSHIFT_BCH_HPP

#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "malshift/model.hpp"
#include "malshift/parallel.hpp"
#include "malshift/trees.hpp"

namespace malshift {

// Series over the ambient algebra bigraded by (degree in x, degree in y),
// truncated at total degree <= cap. Homogeneous extraction is structural:
// grades are carried exactly, never recovered numerically.
template <class S>
struct Bigraded {
    int cap = 0;
    std::map<std::pair<int, int>, Element<S>> slots;

    Element<S> slot(int j, int k) const {
        auto it = slots.find({j, k});
        return it == slots.end() ? Element<S>() : it->second;
    }
    Element<S> homogeneous(int n) const {
        Element<S> acc;
        for (const auto& [g, e] : slots)
            if (g.first + g.second == n) acc = acc + e;
        return acc;
    }
    Element<S> total() const {
        Element<S> acc;
        for (const auto& [g, e] : slots) acc = acc + e;
        return acc;
    }
    void set(int j, int k, Element<S> e) {
        if (e.is_zero())
            slots.erase({j, k});
        else
            slots[{j, k}] = std::move(e);
    }
};

template <class S>
Bigraded<S> graded_mul(const Bigraded<S>& A, const Bigraded<S>& B, const ModelSpec& model,
                       int cap, const BracketOptions& opt = {}) {
    Bigraded<S> out;
    out.cap = cap;
    for (const auto& [ga, ea] : A.slots) {
        for (const auto& [gb, eb] : B.slots) {
            int j = ga.first + gb.first, k = ga.second + gb.second;
            if (j + k > cap) continue;
            Element<S> p = ambient_mul(model, ea, eb, opt);
            if (p.is_zero()) continue;
            auto key = std::make_pair(j, k);
            auto it = out.slots.find(key);
            if (it == out.slots.end())
                out.slots.emplace(key, std::move(p));
            else
                it->second = it->second + p;
        }
    }
    std::erase_if(out.slots, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

// exp(x) = sum_{k<=N} x^k / k!, graded (k,0) or (0,k) along the chosen axis.
// Powers are taken by repeated left multiplication; in an alternative ambient
// algebra the bracketing does not matter (one-generated subalgebras are
// associative), which the exact tests assert.
template <class S>
Bigraded<S> exp_series(const Element<S>& x, int axis, const ModelSpec& model, int N,
                       const BracketOptions& opt = {}) {
    if (!model.special)
        throw unsupported_model_error("exp_series: model '" + model.name +
                                      "' is not special (no ambient product)");
    for (const auto& [b, c] : x.terms())
        if (b.unit == 0 && model.unit_dim > 0)
            throw std::domain_error("exp_series: argument must be unit-free");
    Bigraded<S> out;
    out.cap = N;
    out.set(0, 0, Element<S>::monomial(ambient_one(), S(1)));
    Element<S> pw = Element<S>::monomial(ambient_one(), S(1));
    Rational fact(1);
    for (int k = 1; k <= N; ++k) {
        pw = ambient_mul(model, pw, x, opt);
        fact *= k;
        Element<S> term = pw * scalar_cast<S>(Rational(1) / fact);
        if (axis == 0)
            out.set(k, 0, std::move(term));
        else
            out.set(0, k, std::move(term));
    }
    return out;
}

// log(exp(x) exp(y)) truncated at total degree N. The log series is applied to
// P - 1, whose grades all have total degree >= 1, so r <= N powers suffice.
// All products run through the ambient product only; associativity of the
// two-generated subalgebra is a theorem (Artin), not an assumption of the code.
template <class S>
Bigraded<S> bch_truncated(const Element<S>& x, const Element<S>& y, const ModelSpec& model,
                          int N, BracketOptions opt = {}) {
    if (N < 1) throw std::domain_error("bch_truncated: order N must be >= 1");
    if (opt.degree_cap == UINT32_MAX && model.has_shifts) {
        // default shift cap N * max input degree: lossless for monomial inputs
        std::uint32_t d = std::max(x.max_degree(), y.max_degree());
        opt.degree_cap = static_cast<std::uint32_t>(N) * d;
    }
    Bigraded<S> Ex = exp_series(x, 0, model, N, opt);
    Bigraded<S> Ey = exp_series(y, 1, model, N, opt);
    Bigraded<S> P = graded_mul(Ex, Ey, model, N, opt);

    Bigraded<S> Q = P;
    Q.set(0, 0, Q.slot(0, 0) - Element<S>::monomial(ambient_one(), S(1)));

    Bigraded<S> L;
    L.cap = N;
    Bigraded<S> Qp;
    for (int r = 1; r <= N; ++r) {
        Qp = (r == 1) ? Q : graded_mul(Qp, Q, model, N, opt);
        Rational c(((r % 2) ? 1 : -1), r);
        S cs = scalar_cast<S>(c);
        for (const auto& [g, e] : Qp.slots) {
            Element<S> add = e * cs;
            auto it = L.slots.find(g);
            if (it == L.slots.end())
                L.slots.emplace(g, std::move(add));
            else
                it->second = it->second + add;
        }
    }
    std::erase_if(L.slots, [](const auto& kv) { return kv.second.is_zero(); });
    return L;
}

// ||Z_n|| for n = 0..cap (index 0 is the residual unit slot, identically zero
// for exact log/exp round trips).
template <class S>
std::vector<double> homogeneous_norms(const Bigraded<S>& series, const ModelSpec& model) {
    std::vector<double> out(static_cast<std::size_t>(series.cap) + 1, 0.0);
    for (int n = 0; n <= series.cap; ++n)
        out[static_cast<std::size_t>(n)] = norm(model, series.homogeneous(n));
    return out;
}

std::vector<std::optional<Rational>> homogeneous_norms_exact(const Bigraded<Rational>& series,
                                                             const ModelSpec& model);

// Exact Catalan tail sum_{n>N} K C_{n-1} B^{n-1} s^n via the generating
// function, +inf flag outside the guaranteed domain K B s < 1/4.
double truncation_bound(int N, double K, double B, double s);

struct TruncationReport {
    int N = 0;
    std::vector<double> per_level_norms;  // ||Z_n||, n = 1..N
    double tail_bound = 0;
    bool within_radius = false;
};

template <class S>
TruncationReport truncation_report(const Bigraded<S>& series, const ModelSpec& model, double K,
                                   double s) {
    TruncationReport r;
    r.N = series.cap;
    auto norms = homogeneous_norms(series, model);
    r.per_level_norms.assign(norms.begin() + 1, norms.end());
    double B = model.analytic_B();
    r.within_radius = K * B * s < 0.25;
    r.tail_bound = truncation_bound(series.cap, K, B, s);
    return r;
}

// Level-ratio divergence indicator along a ray (t x_dir, t y_dir).
struct RadiusPoint {
    double t = 0;
    double growth = 0;  // max ||Z_{n+1}||/||Z_n|| over consecutive nonzero levels
    bool stable = true;
    std::vector<double> levels;
};
struct RadiusProfile {
    std::vector<RadiusPoint> points;
    std::optional<double> crossing;  // first t with growth >= 1, interpolated
};

RadiusProfile radius_diagnostic(const ModelSpec& model, const ElementD& x_dir,
                                const ElementD& y_dir, const std::vector<double>& t_grid, int N,
                                par::Mode mode = par::default_mode());

// Saturating pair x = (t/alpha) S^1, y = (t/alpha^M) S^M in the exponential
// model: every labeled tree free of equal-degree sibling collisions evaluates
// to norm exactly t^n, and the good trees (one lone x leaf per node) are
// collision-free with positive sign in canonical orientation. Trees with a
// collision vanish outright -- [u,u] = 0 for any antisymmetric bracket -- so
// the per-level sums are nonzero_count * t^n, not C_{n-1} t^n.
struct SharpnessLevel {
    unsigned n = 0;
    BigInt labeled = 0;
    BigInt nonzero = 0;
    BigInt good = 0;
    bool all_trees_saturate = false;      // every labeled tree has norm t^n
    bool nonzero_trees_saturate = false;  // every nonzero tree has norm t^n
    bool good_trees_saturate = false;     // every good tree nonzero with norm t^n
    Rational max_norm = 0;
    Rational level_sum = 0;       // sum of norms over all labeled trees
    Rational good_level_sum = 0;  // sum over good trees = |G_n| t^n
    Rational catalan_tn = 0;      // C_{n-1} t^n, the claimed shape-count level sum
};
struct SharpnessReport {
    Rational t;
    int M = 0;
    std::vector<SharpnessLevel> levels;
    bool canonical_signs_all_plus = false;  // left-comb good family signs are +1
};

SharpnessReport sharpness_harness(const Rational& alpha, int M, const Rational& t, unsigned n_max,
                                  par::Mode mode = par::default_mode());

}  // namespace malshift

#endif
