#include "malshift/rational.hpp"

#include <cctype>

namespace malshift {

namespace {
BigInt parse_int(const std::string& s, std::size_t lo, std::size_t hi) {
    BigInt v = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("rat_parse: bad digit in '" + s + "'");
        v = v * 10 + (s[i] - '0');
    }
    return v;
}
}  // namespace

Rational rat_parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("rat_parse: empty string");

    bool neg = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        neg = s[pos] == '-';
        ++pos;
    }

    auto slash = s.find('/', pos);
    if (slash != std::string::npos) {
        BigInt num = parse_int(s, pos, slash);
        BigInt den = parse_int(s, slash + 1, s.size());
        if (den == 0) throw std::invalid_argument("rat_parse: zero denominator");
        Rational q(num, den);
        return neg ? Rational(-q) : q;
    }

    // decimal with optional exponent
    long exp10 = 0;
    auto epos = s.find_first_of("eE", pos);
    std::string mant = s.substr(pos, epos == std::string::npos ? std::string::npos : epos - pos);
    if (epos != std::string::npos) exp10 = std::stol(s.substr(epos + 1));

    auto dot = mant.find('.');
    std::string digits = mant;
    long frac = 0;
    if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        frac = static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty()) throw std::invalid_argument("rat_parse: no digits in '" + text + "'");
    BigInt num = parse_int(digits, 0, digits.size());
    Rational q(num);
    long net = exp10 - frac;
    if (net > 0) q *= rat_pow(Rational(10), net);
    if (net < 0) q /= rat_pow(Rational(10), -net);
    return neg ? Rational(-q) : q;
}

std::string rat_to_string(const Rational& q) {
    std::string n = numerator(q).str();
    if (denominator(q) == 1) return n;
    return n + "/" + denominator(q).str();
}

}  // namespace malshift
