#ifndef MALSHIFT_ELEMENT_HPP
#define MALSHIFT_ELEMENT_HPP

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <type_traits>
#include <utility>
#include <vector>

#include "malshift/basis.hpp"
#include "malshift/rational.hpp"

namespace malshift {

namespace detail {
template <class S>
inline bool scalar_is_zero(const S& v) {
    if constexpr (std::is_same_v<S, double>)
        return v == 0.0;
    else
        return v == 0;
}
template <class S>
inline double scalar_abs_d(const S& v) {
    if constexpr (std::is_same_v<S, double>)
        return std::fabs(v);
    else
        return std::fabs(to_double(v));
}
}  // namespace detail

template <class To>
inline To scalar_cast(const Rational& q) {
    if constexpr (std::is_same_v<To, double>)
        return to_double(q);
    else
        return q;
}

// Sparse element of a graded algebra: finitely many (basis index, coefficient)
// terms, kept sorted with no stored zeros. Immutable value semantics; all
// operations return fresh elements.
template <class S>
class Element {
public:
    using Term = std::pair<BasisIndex, S>;

    Element() = default;
    explicit Element(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

    static Element zero() { return Element(); }
    static Element monomial(BasisIndex b, S c) {
        Element e;
        if (!detail::scalar_is_zero(c)) e.terms_.push_back({b, std::move(c)});
        return e;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }

    S coeff(BasisIndex b) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), b,
                                   [](const Term& t, BasisIndex k) { return t.first < k; });
        if (it != terms_.end() && it->first == b) return it->second;
        return S(0);
    }

    std::uint32_t max_degree() const {
        std::uint32_t d = 0;
        for (const auto& [b, c] : terms_) d = std::max(d, b.degree);
        return d;
    }

    friend bool operator==(const Element& a, const Element& b) { return a.terms_ == b.terms_; }

    friend Element operator+(const Element& a, const Element& b) {
        Element out;
        out.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() && ib != b.terms_.end()) {
            if (ia->first < ib->first) {
                out.terms_.push_back(*ia++);
            } else if (ib->first < ia->first) {
                out.terms_.push_back(*ib++);
            } else {
                S c = ia->second + ib->second;
                if (!detail::scalar_is_zero(c)) out.terms_.push_back({ia->first, std::move(c)});
                ++ia, ++ib;
            }
        }
        out.terms_.insert(out.terms_.end(), ia, a.terms_.end());
        out.terms_.insert(out.terms_.end(), ib, b.terms_.end());
        return out;
    }

    friend Element operator-(const Element& a, const Element& b) { return a + (b * S(-1)); }
    friend Element operator-(const Element& a) { return a * S(-1); }

    friend Element operator*(const Element& a, const S& c) {
        if (detail::scalar_is_zero(c)) return Element();
        Element out;
        out.terms_.reserve(a.terms_.size());
        for (const auto& [b, v] : a.terms_) out.terms_.push_back({b, v * c});
        return out;
    }
    friend Element operator*(const S& c, const Element& a) { return a * c; }

    // Accumulation sink used by the bilinear products; call done() once at the end.
    class Builder {
    public:
        void add(BasisIndex b, S c) {
            if (!detail::scalar_is_zero(c)) acc_.push_back({b, std::move(c)});
        }
        Element done() && {
            Element e;
            e.terms_ = std::move(acc_);
            e.normalize();
            return e;
        }

    private:
        std::vector<Term> acc_;
    };

    // Float backend only: drop coefficients below rel_floor * max |coeff|.
    // Keeps deep expansions from accumulating denormal dust in their support.
    Element cleaned(double rel_floor = 1e-14) const {
        if constexpr (std::is_same_v<S, double>) {
            double m = 0;
            for (const auto& [b, c] : terms_) m = std::max(m, std::fabs(c));
            if (m == 0) return *this;
            Element out;
            for (const auto& [b, c] : terms_)
                if (std::fabs(c) >= rel_floor * m) out.terms_.push_back({b, c});
            return out;
        } else {
            return *this;
        }
    }

private:
    void normalize() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
        std::vector<Term> merged;
        merged.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().first == t.first)
                merged.back().second += t.second;
            else
                merged.push_back(std::move(t));
        }
        std::erase_if(merged, [](const Term& t) { return detail::scalar_is_zero(t.second); });
        terms_ = std::move(merged);
    }

    std::vector<Term> terms_;
};

using ElementQ = Element<Rational>;
using ElementD = Element<double>;

}  // namespace malshift

#endif
