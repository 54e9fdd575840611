#ifndef MALSHIFT_TREES_HPP
#define MALSHIFT_TREES_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "malshift/model.hpp"
#include "malshift/parallel.hpp"

namespace malshift {

// C_k via the convolution recurrence; cross-checked against the binomial form.
BigInt catalan(unsigned k);
BigInt catalan_binomial(unsigned k);
double catalan_d(unsigned k);

// Full binary tree shape in arena form. Nodes are stored children-first, the
// root is the last node. Leaves carry their in-order position 0..n-1; labeled
// trees pair a shape with a bitmask over those positions (bit set = y leaf).
struct TreeShape {
    struct Node {
        int left = -1, right = -1;  // leaf iff left < 0
        int leaf_pos = -1;
        int leaves = 1;
    };
    std::vector<Node> nodes;
    int root = -1;
    int leaf_count = 0;
};

inline constexpr unsigned kDefaultTreeCap = 16;

// Streams the C_{n-1} shapes with n leaves in deterministic order: left
// subtree size ascending, then recursively. O(n) live memory per shape.
void for_each_shape(unsigned n, const std::function<void(const TreeShape&)>& fn,
                    unsigned cap = kDefaultTreeCap);

// Streams labeled trees as (shape, mask); masks ascend within each shape.
void for_each_labeled(unsigned n, const std::function<void(const TreeShape&, std::uint32_t)>& fn,
                      unsigned cap = kDefaultTreeCap);

// Materialized shape list for parallel map-reduce over trees.
std::vector<TreeShape> all_shapes(unsigned n, unsigned cap = kDefaultTreeCap);

BigInt count_shapes(unsigned n, unsigned cap = kDefaultTreeCap);

// Nested commutator [x,y]_T: leaves read x or y off the mask, internal nodes
// apply the model bracket.
template <class S>
Element<S> tree_commutator(const TreeShape& shape, std::uint32_t mask, const Element<S>& x,
                           const Element<S>& y, const ModelSpec& model,
                           const BracketOptions& opt = {}) {
    std::vector<Element<S>> vals(shape.nodes.size());
    for (std::size_t i = 0; i < shape.nodes.size(); ++i) {
        const auto& nd = shape.nodes[i];
        if (nd.left < 0)
            vals[i] = (mask >> nd.leaf_pos) & 1u ? y : x;
        else
            vals[i] = bracket(model, vals[nd.left], vals[nd.right], opt);
    }
    return vals[shape.root];
}

// A labeled tree is good when every internal node has one all-x child and one
// child containing a y leaf. A bare leaf has no internal node and is counted
// as not good.
bool is_good_tree(const TreeShape& shape, std::uint32_t mask);

struct GoodTreeCount {
    BigInt count;
    double ratio_to_catalan;  // |G_n| / C_{n-1}, reported at the cap, never extrapolated
};
// Counts good labelings shape by shape (streamed; per-shape closed recursion).
GoodTreeCount good_tree_count(unsigned n, unsigned cap = kDefaultTreeCap);

// Catalan majorant level: K C_{n-1} B^{n-1} s^n with s = ||x|| + ||y||.
double majorant(unsigned n, double K, double B, double s);

// Majorant series with the convergence criterion K B s < 1/4. The symmetric
// ball ||x||,||y|| < 1/(4KB) is the inscribed sufficient condition.
struct MajorantSeries {
    double K = 1, B = 1, s = 0;

    bool converged() const { return K * B * s < 0.25; }
    double level(unsigned n) const { return majorant(n, K, B, s); }
    double partial_sum(unsigned cap) const;
    // Closed-form limit via the Catalan generating function; +inf outside B s < 1/4.
    double limit() const;

    struct Diagnosis {
        double last_increment = 0;
        double tail_ratio = 0;          // level(cap)/level(cap-1)
        bool increments_decreasing = false;
        bool cauchy = false;            // decreasing tail and last increment below tol
        double partial_sum = 0;
    };
    Diagnosis diagnose(unsigned cap = 200, double tol = 1e-6) const;
};

inline bool within_symmetric_ball(double norm_x, double norm_y, double K, double B) {
    double rho = 1.0 / (4.0 * K * B);
    return norm_x < rho && norm_y < rho;
}

}  // namespace malshift

#endif
