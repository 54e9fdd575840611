#include "malshift/trees.hpp"

#include <cmath>
#include <mutex>

namespace malshift {

BigInt catalan(unsigned k) {
    static std::vector<BigInt> memo{1};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (memo.size() <= k) {
        // C_{m} = sum_{i<m} C_i C_{m-1-i}
        std::size_t m = memo.size();
        BigInt c = 0;
        for (std::size_t i = 0; i < m; ++i) c += memo[i] * memo[m - 1 - i];
        memo.push_back(c);
    }
    return memo[k];
}

BigInt catalan_binomial(unsigned k) {
    // binom(2k,k)/(k+1)
    BigInt num = 1, den = 1;
    for (unsigned i = 1; i <= k; ++i) {
        num *= (k + i);
        den *= i;
    }
    return num / den / (k + 1);
}

double catalan_d(unsigned k) { return to_double(catalan(k)); }

namespace {

struct ShapeBuilder {
    TreeShape shape;
    int next_leaf = 0;

    int push_leaf() {
        TreeShape::Node nd;
        nd.leaf_pos = next_leaf++;
        shape.nodes.push_back(nd);
        return static_cast<int>(shape.nodes.size()) - 1;
    }
    int push_node(int l, int r) {
        TreeShape::Node nd;
        nd.left = l;
        nd.right = r;
        nd.leaf_pos = -1;
        nd.leaves = shape.nodes[l].leaves + shape.nodes[r].leaves;
        shape.nodes.push_back(nd);
        return static_cast<int>(shape.nodes.size()) - 1;
    }
    void pop_to(std::size_t mark, int leaf_mark) {
        shape.nodes.resize(mark);
        next_leaf = leaf_mark;
    }
};

void gen_shapes(unsigned n, ShapeBuilder& b, const std::function<void(int)>& k) {
    if (n == 1) {
        std::size_t mark = b.shape.nodes.size();
        int lm = b.next_leaf;
        int idx = b.push_leaf();
        k(idx);
        b.pop_to(mark, lm);
        return;
    }
    for (unsigned nl = 1; nl < n; ++nl) {
        gen_shapes(nl, b, [&](int li) {
            gen_shapes(n - nl, b, [&](int ri) {
                std::size_t mark = b.shape.nodes.size();
                int lm = b.next_leaf;
                int idx = b.push_node(li, ri);
                k(idx);
                b.pop_to(mark, lm);
            });
        });
    }
}

}  // namespace

void for_each_shape(unsigned n, const std::function<void(const TreeShape&)>& fn, unsigned cap) {
    if (n < 1) throw std::domain_error("for_each_shape: need n >= 1");
    if (n > cap)
        throw resource_error("tree enumeration: n = " + std::to_string(n) +
                             " exceeds the cap " + std::to_string(cap));
    ShapeBuilder b;
    gen_shapes(n, b, [&](int root) {
        b.shape.root = root;
        b.shape.leaf_count = static_cast<int>(n);
        fn(b.shape);
    });
}

void for_each_labeled(unsigned n, const std::function<void(const TreeShape&, std::uint32_t)>& fn,
                      unsigned cap) {
    if (n > 31) throw resource_error("labeled enumeration: n too large for the label mask");
    for_each_shape(
        n,
        [&](const TreeShape& s) {
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) fn(s, mask);
        },
        cap);
}

std::vector<TreeShape> all_shapes(unsigned n, unsigned cap) {
    std::vector<TreeShape> out;
    for_each_shape(n, [&](const TreeShape& s) { out.push_back(s); }, cap);
    return out;
}

BigInt count_shapes(unsigned n, unsigned cap) {
    BigInt c = 0;
    for_each_shape(n, [&](const TreeShape&) { ++c; }, cap);
    return c;
}

bool is_good_tree(const TreeShape& shape, std::uint32_t mask) {
    if (shape.leaf_count < 2) return false;
    std::vector<std::uint8_t> pure_x(shape.nodes.size()), has_y(shape.nodes.size()),
        good(shape.nodes.size());
    for (std::size_t i = 0; i < shape.nodes.size(); ++i) {
        const auto& nd = shape.nodes[i];
        if (nd.left < 0) {
            bool y = (mask >> nd.leaf_pos) & 1u;
            pure_x[i] = !y;
            has_y[i] = y;
            good[i] = 1;
        } else {
            pure_x[i] = pure_x[nd.left] && pure_x[nd.right];
            has_y[i] = has_y[nd.left] || has_y[nd.right];
            bool split = (pure_x[nd.left] && has_y[nd.right]) ||
                         (pure_x[nd.right] && has_y[nd.left]);
            good[i] = split && good[nd.left] && good[nd.right];
        }
    }
    return good[shape.root];
}

GoodTreeCount good_tree_count(unsigned n, unsigned cap) {
    // Per shape: count labelings via the pair (g, p) where g counts labelings
    // making the subtree good-with-a-y and p those making it a lone x leaf.
    // An internal all-x subtree always contains a bad node, so p vanishes
    // off the leaves and g(node) = p(L) g(R) + g(L) p(R).
    BigInt total = 0;
    for_each_shape(
        n,
        [&](const TreeShape& s) {
            std::vector<BigInt> g(s.nodes.size()), p(s.nodes.size());
            for (std::size_t i = 0; i < s.nodes.size(); ++i) {
                const auto& nd = s.nodes[i];
                if (nd.left < 0) {
                    g[i] = 1;
                    p[i] = 1;
                } else {
                    g[i] = p[nd.left] * g[nd.right] + g[nd.left] * p[nd.right];
                    p[i] = 0;
                }
            }
            total += n >= 2 ? g[s.root] : BigInt(0);
        },
        cap);
    GoodTreeCount out;
    out.count = total;
    out.ratio_to_catalan = to_double(Rational(total, catalan(n - 1)));
    return out;
}

double majorant(unsigned n, double K, double B, double s) {
    if (n < 1) throw std::domain_error("majorant: level n must be >= 1");
    return K * catalan_d(n - 1) * std::pow(B, static_cast<double>(n - 1)) *
           std::pow(s, static_cast<double>(n));
}

double MajorantSeries::partial_sum(unsigned cap) const {
    double acc = 0;
    for (unsigned n = 1; n <= cap; ++n) acc += level(n);
    return acc;
}

double MajorantSeries::limit() const {
    double z = B * s;
    if (z >= 0.25) return std::numeric_limits<double>::infinity();
    // sum_{n>=1} C_{n-1} z^n = (1 - sqrt(1-4z)) / 2
    return K / B * 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * z));
}

MajorantSeries::Diagnosis MajorantSeries::diagnose(unsigned cap, double tol) const {
    Diagnosis d;
    if (cap < 8) throw std::domain_error("MajorantSeries::diagnose: cap too small");
    double prev = level(cap - 1);
    double last = level(cap);
    d.last_increment = last;
    d.tail_ratio = prev > 0 ? last / prev : 0;
    d.increments_decreasing = true;
    for (unsigned n = cap - 5; n < cap; ++n)
        if (level(n + 1) >= level(n)) d.increments_decreasing = false;
    d.cauchy = d.increments_decreasing && last < tol;
    d.partial_sum = partial_sum(cap);
    return d;
}

}  // namespace malshift
