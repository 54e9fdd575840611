#include "malshift/bch.hpp"

#include <cmath>

namespace malshift {

std::vector<std::optional<Rational>> homogeneous_norms_exact(const Bigraded<Rational>& series,
                                                             const ModelSpec& model) {
    std::vector<std::optional<Rational>> out(static_cast<std::size_t>(series.cap) + 1);
    for (int n = 0; n <= series.cap; ++n)
        out[static_cast<std::size_t>(n)] = norm_exact(model, series.homogeneous(n));
    return out;
}

double truncation_bound(int N, double K, double B, double s) {
    if (N < 1) throw std::domain_error("truncation_bound: N must be >= 1");
    if (s < 0) throw std::domain_error("truncation_bound: s must be >= 0");
    if (s == 0) return 0.0;
    if (K * B * s >= 0.25) return std::numeric_limits<double>::infinity();
    double z = B * s;
    // sum_{n>=1} C_{n-1} z^n = (1 - sqrt(1-4z))/2; subtract the first N terms.
    double full = 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * z));
    double head = 0.0, zn = 1.0;
    for (int n = 1; n <= N; ++n) {
        zn *= z;
        head += catalan_d(static_cast<unsigned>(n - 1)) * zn;
    }
    double tail = (K / B) * (full - head);
    return tail > 0 ? tail : 0.0;
}

RadiusProfile radius_diagnostic(const ModelSpec& model, const ElementD& x_dir,
                                const ElementD& y_dir, const std::vector<double>& t_grid, int N,
                                par::Mode mode) {
    if (!model.special)
        throw unsupported_model_error("radius_diagnostic: model '" + model.name +
                                      "' is not special");
    auto points = par::map_indexed<RadiusPoint>(
        t_grid.size(),
        [&](std::size_t i) {
            RadiusPoint pt;
            pt.t = t_grid[i];
            Bigraded<double> Z =
                bch_truncated<double>(x_dir * pt.t, y_dir * pt.t, model, N);
            auto levels = homogeneous_norms(Z, model);
            pt.levels.assign(levels.begin() + 1, levels.end());
            double floor = 0;
            for (double v : pt.levels) floor = std::max(floor, v);
            floor *= 1e-13;  // ignore float dust when spotting vanishing levels
            pt.growth = 0;
            for (std::size_t n = 0; n + 1 < pt.levels.size(); ++n) {
                if (pt.levels[n] <= floor || pt.levels[n + 1] <= floor) continue;
                pt.growth = std::max(pt.growth, pt.levels[n + 1] / pt.levels[n]);
            }
            pt.stable = pt.growth < 1.0;
            return pt;
        },
        mode);
    RadiusProfile profile;
    profile.points = std::move(points);
    for (std::size_t i = 0; i < profile.points.size(); ++i) {
        if (profile.points[i].growth >= 1.0) {
            if (i == 0) {
                profile.crossing = profile.points[0].t;
            } else {
                double t0 = profile.points[i - 1].t, g0 = profile.points[i - 1].growth;
                double t1 = profile.points[i].t, g1 = profile.points[i].growth;
                profile.crossing = t0 + (1.0 - g0) / (g1 - g0) * (t1 - t0);
            }
            break;
        }
    }
    return profile;
}

namespace {

// Monomial chain evaluation used by the harness: (coefficient, degree), with
// the collision flag raised when a node brackets equal degrees.
struct MonoEval {
    Rational coef;
    std::uint32_t degree = 0;
    bool zero = false;
};

MonoEval eval_tree_mono(const TreeShape& shape, std::uint32_t mask, const Rational& ax,
                        std::uint32_t dx, const Rational& by, std::uint32_t dy) {
    std::vector<MonoEval> vals(shape.nodes.size());
    for (std::size_t i = 0; i < shape.nodes.size(); ++i) {
        const auto& nd = shape.nodes[i];
        if (nd.left < 0) {
            bool isy = (mask >> nd.leaf_pos) & 1u;
            vals[i] = {isy ? by : ax, isy ? dy : dx, false};
            continue;
        }
        const auto& L = vals[nd.left];
        const auto& R = vals[nd.right];
        if (L.zero || R.zero || L.degree == R.degree) {
            vals[i].zero = true;
            continue;
        }
        int eps = L.degree < R.degree ? 1 : -1;
        vals[i] = {L.coef * R.coef * eps, L.degree + R.degree, false};
    }
    return vals[shape.root];
}

}  // namespace

SharpnessReport sharpness_harness(const Rational& alpha, int M, const Rational& t, unsigned n_max,
                                  par::Mode mode) {
    if (alpha <= 1) throw config_error("sharpness_harness: alpha must be > 1");
    if (M < 3)
        throw std::domain_error(
            "sharpness_harness: M must be >= 3 (smaller M breaks the distinct-degree argument)");
    if (t <= 0) throw std::domain_error("sharpness_harness: t must be positive");

    ModelSpec model = catalog_lookup("exponential", {{{"alpha", alpha}}, {}});
    Rational ax = t / alpha;                                     // x = ax S^1
    Rational by = t / rat_pow(alpha, M);                         // y = by S^M
    std::uint32_t dy = static_cast<std::uint32_t>(M);

    SharpnessReport report;
    report.t = t;
    report.M = M;

    for (unsigned n = 1; n <= n_max; ++n) {
        SharpnessLevel lev;
        lev.n = n;
        Rational tn = rat_pow(t, n);
        lev.catalan_tn = Rational(catalan(n - 1)) * tn;
        lev.labeled = catalan(n - 1) * (BigInt(1) << n);

        struct MaskAgg {
            BigInt nonzero = 0;
            BigInt good = 0;
            bool nonzero_sat = true;
            bool good_sat = true;
            Rational max_norm = 0;
            Rational sum = 0;
            Rational good_sum = 0;
        };
        auto shapes = all_shapes(n);
        std::size_t nmask = std::size_t(1) << n;
        auto agg = par::map_indexed<MaskAgg>(
            nmask,
            [&](std::size_t mask) {
                MaskAgg a;
                for (const auto& sh : shapes) {
                    MonoEval r = eval_tree_mono(sh, static_cast<std::uint32_t>(mask), ax, 1, by,
                                                dy);
                    bool good = is_good_tree(sh, static_cast<std::uint32_t>(mask));
                    if (good) ++a.good;
                    if (r.zero) {
                        if (good) a.good_sat = false;  // good trees never collide
                        continue;
                    }
                    Rational nrm = rat_abs(r.coef) * rat_pow(alpha, r.degree);
                    ++a.nonzero;
                    a.sum += nrm;
                    if (nrm > a.max_norm) a.max_norm = nrm;
                    if (nrm != tn) {
                        a.nonzero_sat = false;
                        if (good) a.good_sat = false;
                    }
                    if (good) a.good_sum += nrm;
                }
                return a;
            },
            mode);
        lev.nonzero_trees_saturate = true;
        lev.good_trees_saturate = true;
        for (const auto& a : agg) {
            lev.nonzero += a.nonzero;
            lev.good += a.good;
            lev.level_sum += a.sum;
            lev.good_level_sum += a.good_sum;
            if (a.max_norm > lev.max_norm) lev.max_norm = a.max_norm;
            lev.nonzero_trees_saturate &= a.nonzero_sat;
            lev.good_trees_saturate &= a.good_sat;
        }
        lev.all_trees_saturate = lev.nonzero_trees_saturate && lev.nonzero == lev.labeled;
        report.levels.push_back(std::move(lev));
    }

    // Canonical good family: T_1 = y, T_n = Node(x, T_{n-1}). Left degree 1 is
    // always below the right degree (M >= 3), so every node sign is +1.
    report.canonical_signs_all_plus = true;
    for (unsigned n = 2, deg = dy; n <= n_max; ++n, deg += 1) {
        if (1 >= deg) {  // eps(1, deg) = +1 exactly when the x leaf sits below
            report.canonical_signs_all_plus = false;
            break;
        }
    }
    return report;
}

}  // namespace malshift
