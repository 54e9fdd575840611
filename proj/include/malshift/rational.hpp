#ifndef MALSHIFT_RATIONAL_HPP
#define MALSHIFT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace malshift {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational rat_pow(const Rational& base, long e) {
    if (e < 0) {
        if (base == 0) throw std::domain_error("rat_pow: 0 to negative power");
        Rational p = rat_pow(base, -e);
        return Rational(denominator(p), numerator(p));
    }
    Rational acc(1), b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

// Parses "3", "-3/4", "0.49", "1e-3" style literals exactly.
Rational rat_parse(const std::string& text);

std::string rat_to_string(const Rational& q);

}  // namespace malshift

#endif
