#ifndef MALSHIFT_WEIGHTS_HPP
#define MALSHIFT_WEIGHTS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "malshift/errors.hpp"
#include "malshift/rational.hpp"

namespace malshift {

// Positive weight sequence w_n defining the weighted l1 norm. All families
// grow (or decay) at most exponentially, which keeps the completion a Banach
// space. Exact values are available whenever the exponent p is an integer.
class WeightLaw {
public:
    enum class Kind { exponential, polynomial, mixed, damped, custom };

    static WeightLaw exponential(Rational alpha);           // w_n = alpha^n
    static WeightLaw polynomial(double p);                  // w_n = (1+n)^p
    static WeightLaw mixed(Rational alpha, double p);       // w_n = alpha^n (1+n)^p
    static WeightLaw damped(Rational gamma);                // w_n = gamma^n, 0 < gamma < 1
    static WeightLaw custom(std::vector<Rational> table);   // finite table, error beyond

    Kind kind() const { return kind_; }
    const Rational& alpha() const { return alpha_; }
    const Rational& gamma() const { return alpha_; }
    double p() const { return p_; }
    bool p_integral() const { return p_int_.has_value(); }

    double weight(std::uint32_t n) const;
    // Exact weight; empty for non-integer p.
    std::optional<Rational> exact_weight(std::uint32_t n) const;

    std::string describe() const;

private:
    WeightLaw(Kind k, Rational a, double p) : kind_(k), alpha_(std::move(a)), p_(p) {
        double r = 0.0;
        if (p_ >= 0 && std::modf(p_, &r) == 0.0 && p_ < 1e6) p_int_ = static_cast<long>(p_);
    }
    Kind kind_;
    Rational alpha_{1};
    double p_ = 0.0;
    std::optional<long> p_int_;
    std::vector<Rational> table_;
};

inline WeightLaw WeightLaw::exponential(Rational alpha) {
    if (alpha <= 0) throw config_error("weight law: alpha must be positive");
    return WeightLaw(Kind::exponential, std::move(alpha), 0.0);
}

inline WeightLaw WeightLaw::polynomial(double p) {
    if (p < 0) throw config_error("weight law: p must be >= 0");
    return WeightLaw(Kind::polynomial, Rational(1), p);
}

inline WeightLaw WeightLaw::mixed(Rational alpha, double p) {
    if (alpha <= 0) throw config_error("weight law: alpha must be positive");
    if (p < 0) throw config_error("weight law: p must be >= 0");
    return WeightLaw(Kind::mixed, std::move(alpha), p);
}

inline WeightLaw WeightLaw::damped(Rational gamma) {
    if (gamma <= 0 || gamma >= 1) throw config_error("weight law: gamma must lie in (0,1)");
    return WeightLaw(Kind::damped, std::move(gamma), 0.0);
}

inline WeightLaw WeightLaw::custom(std::vector<Rational> table) {
    WeightLaw w(Kind::custom, Rational(1), 0.0);
    if (table.empty()) throw config_error("weight law: empty custom table");
    for (const auto& v : table)
        if (v <= 0) throw config_error("weight law: custom weights must be positive");
    w.table_ = std::move(table);
    return w;
}

inline double WeightLaw::weight(std::uint32_t n) const {
    switch (kind_) {
        case Kind::exponential:
        case Kind::damped:
            return std::pow(to_double(alpha_), static_cast<double>(n));
        case Kind::polynomial:
            return std::pow(1.0 + n, p_);
        case Kind::mixed:
            return std::pow(to_double(alpha_), static_cast<double>(n)) * std::pow(1.0 + n, p_);
        case Kind::custom:
            if (n >= table_.size())
                throw resource_error("weight law: degree " + std::to_string(n) +
                                     " beyond custom table");
            return to_double(table_[n]);
    }
    return 1.0;
}

inline std::optional<Rational> WeightLaw::exact_weight(std::uint32_t n) const {
    switch (kind_) {
        case Kind::exponential:
        case Kind::damped:
            return rat_pow(alpha_, n);
        case Kind::polynomial:
            if (!p_int_) return std::nullopt;
            return rat_pow(Rational(1 + n), *p_int_);
        case Kind::mixed:
            if (!p_int_) return std::nullopt;
            return rat_pow(alpha_, n) * rat_pow(Rational(1 + n), *p_int_);
        case Kind::custom:
            if (n >= table_.size())
                throw resource_error("weight law: degree " + std::to_string(n) +
                                     " beyond custom table");
            return table_[n];
    }
    return std::nullopt;
}

}  // namespace malshift

#endif
