#include "malshift/model.hpp"

#include <algorithm>
#include <mutex>

#include <json.hpp>

namespace malshift {

// --- Zorn vector-matrix algebra --------------------------------------------

ZornElement operator+(const ZornElement& p, const ZornElement& q) {
    ZornElement r;
    r.a = p.a + q.a;
    r.b = p.b + q.b;
    for (int i = 0; i < 3; ++i) {
        r.u[i] = p.u[i] + q.u[i];
        r.v[i] = p.v[i] + q.v[i];
    }
    return r;
}

ZornElement operator-(const ZornElement& p, const ZornElement& q) {
    return p + q.scaled(Rational(-1));
}

ZornElement ZornElement::scaled(const Rational& c) const {
    ZornElement r;
    r.a = a * c;
    r.b = b * c;
    for (int i = 0; i < 3; ++i) {
        r.u[i] = u[i] * c;
        r.v[i] = v[i] * c;
    }
    return r;
}

namespace {
std::array<Rational, 3> cross(const std::array<Rational, 3>& x, const std::array<Rational, 3>& y) {
    return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}
Rational dot(const std::array<Rational, 3>& x, const std::array<Rational, 3>& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}
}  // namespace

// (a,u;v,b)(a',u';v',b') = (aa'+u.v', au'+b'u-vxv'; a'v+bv'+uxu', bb'+v.u')
ZornElement zorn_multiply(const ZornElement& p, const ZornElement& q) {
    ZornElement r;
    r.a = p.a * q.a + dot(p.u, q.v);
    r.b = p.b * q.b + dot(p.v, q.u);
    auto vv = cross(p.v, q.v);
    auto uu = cross(p.u, q.u);
    for (int i = 0; i < 3; ++i) {
        r.u[i] = p.a * q.u[i] + q.b * p.u[i] - vv[i];
        r.v[i] = q.a * p.v[i] + p.b * q.v[i] + uu[i];
    }
    return r;
}

ZornElement zorn_identity() {
    ZornElement r;
    r.a = 1;
    r.b = 1;
    return r;
}

// e1 = u1-v1, e2 = u2-v2, e3 = v3-u3, e4 = w = diag(1,-1), e5 = u1+v1,
// e6 = u2+v2, e7 = u3+v3. These square to -1,-1,-1,+1,+1,+1,+1 and
// anticommute pairwise, so every commutator lands on a single unit with
// coefficient +-2.
ZornElement zorn_unit(int i) {
    ZornElement r;
    auto set = [&](int axis, int su, int sv) {
        r.u[axis] = su;
        r.v[axis] = sv;
    };
    switch (i) {
        case 1: set(0, 1, -1); break;
        case 2: set(1, 1, -1); break;
        case 3: set(2, -1, 1); break;
        case 4: r.a = 1; r.b = -1; break;
        case 5: set(0, 1, 1); break;
        case 6: set(1, 1, 1); break;
        case 7: set(2, 1, 1); break;
        default: throw config_error("zorn_unit: index must be 1..7");
    }
    return r;
}

std::array<Rational, 8> zorn_coords(const ZornElement& z) {
    std::array<Rational, 8> c;
    Rational half(1, 2);
    c[0] = (z.a + z.b) * half;
    c[4] = (z.a - z.b) * half;
    c[1] = (z.u[0] - z.v[0]) * half;
    c[5] = (z.u[0] + z.v[0]) * half;
    c[2] = (z.u[1] - z.v[1]) * half;
    c[6] = (z.u[1] + z.v[1]) * half;
    c[3] = (z.v[2] - z.u[2]) * half;
    c[7] = (z.u[2] + z.v[2]) * half;
    return c;
}

const OctonionTable& octonion_table() {
    static OctonionTable table = [] {
        OctonionTable t{};
        std::array<ZornElement, 8> e;
        e[0] = zorn_identity();
        for (int i = 1; i < 8; ++i) e[i] = zorn_unit(i);
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                auto c = zorn_coords(zorn_multiply(e[i], e[j]));
                int found = -1;
                for (int k = 0; k < 8; ++k) {
                    if (c[k] == 0) continue;
                    if (found >= 0 || (c[k] != 1 && c[k] != -1))
                        throw std::logic_error("octonion table: product not a signed unit");
                    found = k;
                    t.unit[i][j] = static_cast<std::uint8_t>(k);
                    t.sign[i][j] = c[k] == 1 ? 1 : -1;
                }
                if (found < 0) throw std::logic_error("octonion table: zero product");
            }
        }
        return t;
    }();
    return table;
}

// --- ModelSpec --------------------------------------------------------------

double ModelSpec::analytic_B() const {
    auto e = analytic_B_exact();
    if (e) return to_double(*e);
    return std::pow(2.0, p) * (kind == ModelKind::mixed_offset
                                   ? [&] {
                                         double s = 0;
                                         for (int d : offsets)
                                             s += std::pow(alpha_d, static_cast<double>(d));
                                         return s;
                                     }()
                                   : 1.0);
}

std::optional<Rational> ModelSpec::analytic_B_exact() const {
    switch (kind) {
        case ModelKind::operator_norm:
        case ModelKind::zorn:
            return Rational(2);
        case ModelKind::exponential:
        case ModelKind::normalized_shift:
        case ModelKind::heisenberg:
            return Rational(1);
        case ModelKind::polynomial:
        case ModelKind::mixed:
            if (!p_integral) return std::nullopt;
            return rat_pow(Rational(2), p_int);
        case ModelKind::tree_branching:
            return Rational(branching);
        case ModelKind::mixed_offset: {
            if (!p_integral) return std::nullopt;
            Rational s(0);
            for (int d : offsets) s += rat_pow(alpha, d);
            return s * rat_pow(Rational(2), p_int);
        }
        case ModelKind::damped:
            // the gamma^2 bound needs the zero mode excluded
            return min_degree >= 1 ? gamma * gamma : Rational(1);
        case ModelKind::m_lambda: {
            Rational al = rat_abs(lambda);
            return al > 1 ? al : Rational(1);
        }
    }
    return std::nullopt;
}

void ModelSpec::degree_violation(BasisIndex b) const {
    throw std::domain_error("model '" + name + "': basis index " + to_string(b) +
                            " violates the degree restriction (min shift degree " +
                            std::to_string(min_degree) +
                            (has_shifts ? "" : ", shift degree must be 0") + ")");
}

void ModelSpec::check_index(BasisIndex b) const {
    if (b.unit > static_cast<std::uint32_t>(unit_dim)) degree_violation(b);
    if (!has_shifts && b.degree != 0) degree_violation(b);
    if (b.degree < min_degree && !(b.unit == 0 && b.degree == 0 && unit_dim > 0))
        degree_violation(b);
    if (unit_dim > 0 && b.unit == 0 && b.degree != 0) degree_violation(b);
}

std::optional<Rational> ModelSpec::local_ratio_exact(std::uint32_t m, std::uint32_t n) const {
    // (1+m+n+d)^p / ((1+m)^p (1+n)^p), the only non-cancelling weight factor
    auto poly_part = [&](long d) -> Rational {
        BigInt num = 1 + static_cast<long>(m) + static_cast<long>(n) + d;
        BigInt den = BigInt(1 + m) * BigInt(1 + n);
        return rat_pow(Rational(num, den), p_int);
    };
    switch (kind) {
        case ModelKind::exponential:
        case ModelKind::normalized_shift:
            return Rational(1);
        case ModelKind::polynomial:
        case ModelKind::mixed:
            if (!p_integral) return std::nullopt;
            return poly_part(0);
        case ModelKind::mixed_offset: {
            if (!p_integral) return std::nullopt;
            Rational s(0);
            for (int d : offsets) {
                if (static_cast<long>(m) + n + d < 0) continue;
                s += rat_pow(alpha, d) * poly_part(d);
            }
            return s;
        }
        case ModelKind::damped:
            return rat_pow(gamma, m + n);  // the gamma^n weights cancel
        case ModelKind::tree_branching:
            return Rational(branching);  // constant weights
        case ModelKind::zorn:
            return Rational(2);  // attained by any unit pair on a line
        case ModelKind::m_lambda: {
            Rational al = rat_abs(lambda);
            return al > 1 ? al : Rational(1);  // max over the three bracket lines
        }
        case ModelKind::operator_norm:
            return Rational(2);  // [H,E] = 2E with unit operator norms
        case ModelKind::heisenberg:
            return Rational(1);
    }
    return std::nullopt;
}

double ModelSpec::local_ratio_approx(std::uint32_t m, std::uint32_t n) const {
    double base = (1.0 + m + n) / ((1.0 + m) * (1.0 + n));
    switch (kind) {
        case ModelKind::polynomial:
        case ModelKind::mixed:
            return std::pow(base, p);
        case ModelKind::mixed_offset: {
            double s = 0;
            for (int d : offsets) {
                if (static_cast<long>(m) + n + d < 0) continue;
                s += std::pow(alpha_d, static_cast<double>(d)) *
                     std::pow((1.0 + m + n + d) / ((1.0 + m) * (1.0 + n)), p);
            }
            return s;
        }
        default: {
            auto e = local_ratio_exact(m, n);
            return e ? to_double(*e) : 0.0;
        }
    }
}

// --- catalog ----------------------------------------------------------------

namespace {

Rational param_or(const ModelParams& p, const std::string& key, const Rational& dflt) {
    auto it = p.scalars.find(key);
    return it == p.scalars.end() ? dflt : it->second;
}

void reject_unknown(const ModelParams& p, std::initializer_list<const char*> known,
                    const std::string& model) {
    for (const auto& [k, v] : p.scalars) {
        bool ok = false;
        for (const char* key : known)
            if (k == key) ok = true;
        if (!ok)
            throw config_error("model '" + model + "': unknown parameter '" + k + "'");
    }
}

void finish_scalar(ModelSpec& m) {
    m.unit_dim = 0;
    m.has_shifts = true;
    m.special = false;
}

}  // namespace

ModelSpec catalog_lookup(const std::string& name, const ModelParams& params) {
    auto alpha_param = [&](Rational dflt) {
        Rational a = param_or(params, "alpha", dflt);
        if (a <= 1) throw config_error("model '" + name + "': alpha must satisfy alpha > 1");
        return a;
    };
    auto p_param = [&](Rational dflt) {
        Rational pq = param_or(params, "p", dflt);
        if (pq < 0) throw config_error("model '" + name + "': p must be >= 0");
        return pq;
    };

    if (name == "operator_norm") {
        reject_unknown(params, {}, name);
        ModelSpec m(ModelKind::operator_norm, name, WeightLaw::exponential(Rational(1)));
        m.norm_kind = NormKind::operator_2x2;
        m.unit_dim = 3;
        m.has_shifts = false;
        m.special = true;
        return m;
    }
    if (name == "exponential" || name == "normalized_shift") {
        reject_unknown(params, {"alpha"}, name);
        Rational a = alpha_param(Rational(2));
        ModelSpec m(name == "exponential" ? ModelKind::exponential : ModelKind::normalized_shift,
                    name, WeightLaw::exponential(a));
        m.alpha = a;
        m.alpha_d = to_double(a);
        finish_scalar(m);
        return m;
    }
    if (name == "polynomial") {
        reject_unknown(params, {"p"}, name);
        Rational pq = p_param(Rational(1));
        ModelSpec m(ModelKind::polynomial, name, WeightLaw::polynomial(to_double(pq)));
        m.p = to_double(pq);
        m.p_integral = m.weight.p_integral();
        if (m.p_integral) m.p_int = std::lround(m.p);
        finish_scalar(m);
        return m;
    }
    if (name == "tree_branching") {
        reject_unknown(params, {"b"}, name);
        Rational bq = param_or(params, "b", Rational(3));
        if (bq < 1 || denominator(bq) != 1)
            throw config_error("model 'tree_branching': b must be a positive integer");
        // constant weights keep the b-output stencil inside the b * w_{m+n} envelope
        ModelSpec m(ModelKind::tree_branching, name, WeightLaw::exponential(Rational(1)));
        m.branching = static_cast<long>(numerator(bq));
        finish_scalar(m);
        return m;
    }
    if (name == "mixed") {
        reject_unknown(params, {"alpha", "p"}, name);
        Rational a = alpha_param(Rational(3, 2));
        Rational pq = p_param(Rational(2));
        ModelSpec m(ModelKind::mixed, name, WeightLaw::mixed(a, to_double(pq)));
        m.alpha = a;
        m.alpha_d = to_double(a);
        m.p = to_double(pq);
        m.p_integral = m.weight.p_integral();
        if (m.p_integral) m.p_int = std::lround(m.p);
        finish_scalar(m);
        return m;
    }
    if (name == "mixed_offset") {
        reject_unknown(params, {"alpha", "p"}, name);
        Rational a = alpha_param(Rational(13, 10));
        Rational pq = p_param(Rational(1));
        ModelSpec m(ModelKind::mixed_offset, name, WeightLaw::mixed(a, to_double(pq)));
        m.alpha = a;
        m.alpha_d = to_double(a);
        m.p = to_double(pq);
        m.p_integral = m.weight.p_integral();
        if (m.p_integral) m.p_int = std::lround(m.p);
        m.offsets = params.offsets.empty() ? std::vector<int>{-1, 0, 1} : params.offsets;
        std::sort(m.offsets.begin(), m.offsets.end());
        finish_scalar(m);
        return m;
    }
    if (name == "damped") {
        reject_unknown(params, {"gamma", "min_degree"}, name);
        Rational g = param_or(params, "gamma", Rational(7, 10));
        if (g <= 0 || g >= 1)
            throw config_error("model 'damped': gamma must lie in the open interval (0,1)");
        ModelSpec m(ModelKind::damped, name, WeightLaw::damped(g));
        m.gamma = g;
        m.gamma_d = to_double(g);
        finish_scalar(m);
        Rational md = param_or(params, "min_degree", Rational(1));
        if (md != 0 && md != 1)
            throw config_error("model 'damped': min_degree must be 0 or 1");
        m.min_degree = md == 0 ? 0u : 1u;
        return m;
    }
    if (name == "zorn") {
        reject_unknown(params, {"alpha"}, name);
        Rational a = alpha_param(Rational(2));
        ModelSpec m(ModelKind::zorn, name, WeightLaw::exponential(a));
        m.alpha = a;
        m.alpha_d = to_double(a);
        m.unit_dim = 7;
        m.has_shifts = true;
        m.special = true;
        return m;
    }
    if (name == "m_lambda") {
        reject_unknown(params, {"lambda"}, name);
        Rational l = param_or(params, "lambda", Rational(-9, 10));
        ModelSpec m(ModelKind::m_lambda, name, WeightLaw::exponential(Rational(1)));
        m.norm_kind = NormKind::euclidean;
        m.lambda = l;
        m.lambda_d = to_double(l);
        m.unit_dim = 3;
        m.has_shifts = false;
        m.special = false;
        return m;
    }
    if (name == "heisenberg") {
        reject_unknown(params, {}, name);
        ModelSpec m(ModelKind::heisenberg, name, WeightLaw::exponential(Rational(1)));
        m.unit_dim = 3;
        m.has_shifts = false;
        m.special = true;
        return m;
    }
    throw config_error("unknown model '" + name + "'");
}

std::vector<std::string> catalog_names() {
    return {"operator_norm", "exponential",  "polynomial", "tree_branching",
            "mixed",         "mixed_offset", "damped",     "zorn",
            "m_lambda",      "normalized_shift"};
}

std::vector<std::pair<std::string, ModelParams>> standard_table_rows() {
    auto scal = [](std::initializer_list<std::pair<const std::string, Rational>> kv) {
        ModelParams p;
        p.scalars = kv;
        return p;
    };
    std::vector<std::pair<std::string, ModelParams>> rows;
    rows.emplace_back("operator_norm", ModelParams{});
    rows.emplace_back("exponential", scal({{"alpha", Rational(2)}}));
    rows.emplace_back("polynomial", scal({{"p", Rational(1)}}));
    rows.emplace_back("polynomial", scal({{"p", Rational(3)}}));
    rows.emplace_back("tree_branching", scal({{"b", Rational(3)}}));
    rows.emplace_back("tree_branching", scal({{"b", Rational(10)}}));
    rows.emplace_back("mixed", scal({{"alpha", Rational(3, 2)}, {"p", Rational(2)}}));
    ModelParams off;
    off.scalars = {{"alpha", Rational(13, 10)}, {"p", Rational(1)}};
    off.offsets = {-1, 0, 1};
    rows.emplace_back("mixed_offset", off);
    rows.emplace_back("damped", scal({{"gamma", Rational(7, 10)}}));
    rows.emplace_back("zorn", scal({{"alpha", Rational(2)}}));
    return rows;
}

// --- norms ------------------------------------------------------------------

double operator_2x2_norm(double m00, double m01, double m10, double m11) {
    double g00 = m00 * m00 + m10 * m10;
    double g01 = m00 * m01 + m10 * m11;
    double g11 = m01 * m01 + m11 * m11;
    double mid = 0.5 * (g00 + g11);
    double rad = std::sqrt(0.25 * (g00 - g11) * (g00 - g11) + g01 * g01);
    return std::sqrt(std::max(0.0, mid + rad));
}

std::optional<Rational> norm_exact(const ModelSpec& model, const ElementQ& x) {
    if (model.norm_kind != NormKind::weighted_l1) return std::nullopt;
    Rational acc(0);
    for (const auto& [b, c] : x.terms()) {
        auto w = model.weight.exact_weight(b.degree);
        if (!w) return std::nullopt;
        acc += rat_abs(c) * *w;
    }
    return acc;
}

// --- JSON config ------------------------------------------------------------

bool operator==(const ModelConfig& a, const ModelConfig& b) {
    return a.model == b.model && a.params.scalars == b.params.scalars &&
           a.params.offsets == b.params.offsets && a.backend == b.backend &&
           a.shift_cap == b.shift_cap;
}

std::string ModelConfig::to_json() const {
    nlohmann::ordered_json j;
    j["model"] = model;
    nlohmann::ordered_json ps = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params.scalars) ps[k] = rat_to_string(v);
    if (!params.offsets.empty()) ps["offsets"] = params.offsets;
    j["params"] = ps;
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    ModelSpec spec = resolve();
    switch (spec.weight.kind()) {
        case WeightLaw::Kind::exponential:
            w["kind"] = "exponential";
            w["alpha"] = rat_to_string(spec.weight.alpha());
            break;
        case WeightLaw::Kind::polynomial:
            w["kind"] = "polynomial";
            w["p"] = spec.weight.p();
            break;
        case WeightLaw::Kind::mixed:
            w["kind"] = "mixed";
            w["alpha"] = rat_to_string(spec.weight.alpha());
            w["p"] = spec.weight.p();
            break;
        case WeightLaw::Kind::damped:
            w["kind"] = "damped";
            w["gamma"] = rat_to_string(spec.weight.gamma());
            break;
        case WeightLaw::Kind::custom:
            w["kind"] = "custom";
            break;
    }
    j["weight"] = w;
    j["backend"] = backend;
    j["shift_cap"] = shift_cap;
    return j.dump();
}

ModelParams params_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("bad params JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("params must be a JSON object");
    ModelParams params;
    for (const auto& [k, v] : j.items()) {
        if (k == "offsets") {
            params.offsets = v.get<std::vector<int>>();
        } else if (v.is_string()) {
            params.scalars[k] = rat_parse(v.get<std::string>());
        } else if (v.is_number_integer()) {
            params.scalars[k] = Rational(v.get<long long>());
        } else if (v.is_number_float()) {
            // binary64 values are exact rationals; parse via their shortest text
            params.scalars[k] = rat_parse(v.dump());
        } else {
            throw config_error("params: value of '" + k + "' must be a number");
        }
    }
    return params;
}

ModelConfig ModelConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("bad model config JSON: ") + e.what());
    }
    ModelConfig cfg;
    if (!j.contains("model") || !j["model"].is_string())
        throw config_error("model config: missing 'model' name");
    cfg.model = j["model"].get<std::string>();
    if (j.contains("params")) cfg.params = params_from_json(j["params"].dump());
    if (j.contains("backend")) {
        cfg.backend = j["backend"].get<std::string>();
        if (cfg.backend != "exact" && cfg.backend != "float")
            throw config_error("model config: backend must be 'exact' or 'float'");
    }
    if (j.contains("shift_cap")) cfg.shift_cap = j["shift_cap"].get<std::uint32_t>();
    cfg.resolve();  // validates name + parameters
    return cfg;
}

}  // namespace malshift
