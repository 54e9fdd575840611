#ifndef MALSHIFT_BASIS_HPP
#define MALSHIFT_BASIS_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace malshift {

// Basis label for graded elements: unit index crossed with a shift degree.
// unit == 0 is the ambient scalar slot (coefficient of 1*S^degree); imaginary
// units are 1..d. Pure shift models keep unit == 0 throughout, so S^n is (0,n).
struct BasisIndex {
    std::uint32_t unit = 0;
    std::uint32_t degree = 0;

    friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
};

inline BasisIndex shift_gen(std::uint32_t n) { return BasisIndex{0, n}; }
inline BasisIndex unit_gen(std::uint32_t i, std::uint32_t n = 0) { return BasisIndex{i, n}; }
inline BasisIndex ambient_one() { return BasisIndex{0, 0}; }

inline std::string to_string(const BasisIndex& b) {
    std::string s;
    if (b.unit > 0) s += "e" + std::to_string(b.unit);
    if (b.unit == 0 || b.degree > 0) {
        if (b.unit > 0) s += "*";
        s += "S^" + std::to_string(b.degree);
    }
    return s;
}

}  // namespace malshift

#endif
