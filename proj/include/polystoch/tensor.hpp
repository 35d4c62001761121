#pragma once

#include "polystoch/rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace polystoch {

// Coordinates of one element, one value per axis, each in {0..n-1}.
using IndexTuple = std::vector<int>;

// Dense d-dimensional matrix of order n with exact rational entries,
// stored row-major (first axis slowest).
class Tensor {
public:
    Tensor(int dim, int order);
    Tensor(int dim, int order, std::vector<Rational> entries);

    int dim() const { return dim_; }
    int order() const { return order_; }
    std::size_t size() const { return entries_.size(); }

    const Rational& operator[](std::size_t flat) const { return entries_[flat]; }
    Rational& operator[](std::size_t flat) { return entries_[flat]; }

    const Rational& at(std::span<const int> idx) const { return entries_[flat_index(idx)]; }
    Rational& at(std::span<const int> idx) { return entries_[flat_index(idx)]; }

    std::size_t flat_index(std::span<const int> idx) const;
    IndexTuple unflatten(std::size_t flat) const;

    const std::vector<Rational>& entries() const { return entries_; }

    bool operator==(const Tensor& other) const = default;

    // Same dim and order required.
    Tensor& operator+=(const Tensor& other);
    Tensor& operator*=(const Rational& c);

    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator*(const Rational& c, Tensor a) { return a *= c; }

private:
    int dim_;
    int order_;
    std::vector<Rational> entries_;
};

// Advances idx through [0,n)^k in row-major order; false once exhausted.
bool next_index(IndexTuple& idx, int order);

// number of cells of a dim/order shape, with an overflow guard
std::size_t cell_count(int dim, int order);

// An s-plane: s free axes, the rest pinned to fixed values.
struct PlaneSpec {
    static constexpr int kFree = -1;
    std::vector<int> fixed; // fixed[axis] = value, or kFree

    int dim() const { return static_cast<int>(fixed.size()); }
    int free_count() const;
    bool is_free(int axis) const { return fixed[axis] == kFree; }

    static PlaneSpec line(int dim, int free_axis, const IndexTuple& other_coords);
};

// Calls fn for every s-plane of a (dim, order) shape.
template <typename Fn>
void for_each_plane(int dim, int order, int s, Fn&& fn);

// Weighted list of tensors; weights positive and summing to exactly 1.
struct ConvexCombination {
    std::vector<std::pair<Rational, Tensor>> terms;
};

struct PredicateReport {
    bool ok = false;
    std::string reason; // empty when ok
};

// Exact sum of the entries in the given plane.
Rational plane_sum(const Tensor& a, const PlaneSpec& p);

// Every s-plane sums to exactly 1 and all entries are non-negative.
// A negative entry yields false (see check_polystochastic for the reason).
bool is_polystochastic(const Tensor& a, int s);
PredicateReport check_polystochastic(const Tensor& a, int s);

// (0,1)-valued with exactly one 1 per s-plane.
bool is_permutation_matrix(const Tensor& a, int s);
PredicateReport check_permutation_matrix(const Tensor& a, int s);

// Contraction product: C(i_1..i_{p+q-2}) = sum_j A(i_1..i_{p-1}, j) B(j, i_p..i_{p+q-2}).
Tensor product(const Tensor& a, const Tensor& b);

// Exact weighted sum; validates the convex-combination invariants.
Tensor combine(const ConvexCombination& c);

// Every entry 1/n.
Tensor uniform(int d, int n);

// Every entry 1.
Tensor ones(int d, int n);

// --- template definitions ---

template <typename Fn>
void for_each_plane(int dim, int order, int s, Fn&& fn) {
    if (s < 0 || s > dim) throw std::invalid_argument("for_each_plane: s out of range");
    std::vector<int> axes(s);
    // enumerate s-subsets of {0..dim-1} as the free axes
    for (int i = 0; i < s; ++i) axes[i] = i;
    PlaneSpec p;
    p.fixed.assign(dim, 0);
    while (true) {
        // walk all assignments of the dim-s fixed axes
        std::fill(p.fixed.begin(), p.fixed.end(), 0);
        for (int ax : axes) p.fixed[ax] = PlaneSpec::kFree;
        while (true) {
            fn(const_cast<const PlaneSpec&>(p));
            int ax = dim - 1;
            for (; ax >= 0; --ax) {
                if (p.fixed[ax] == PlaneSpec::kFree) continue;
                if (++p.fixed[ax] < order) break;
                p.fixed[ax] = 0;
            }
            if (ax < 0) break;
        }
        // next s-subset
        int i = s - 1;
        while (i >= 0 && axes[i] == dim - s + i) --i;
        if (i < 0) break;
        ++axes[i];
        for (int j = i + 1; j < s; ++j) axes[j] = axes[j - 1] + 1;
    }
}

} // namespace polystoch
