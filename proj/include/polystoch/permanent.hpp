#pragma once

#include "polystoch/latin.hpp"
#include "polystoch/tensor.hpp"

#include <optional>
#include <vector>

namespace polystoch {

// An s-diagonal: n^s cells, no two agreeing on s or more coordinate positions.
struct Diagonal {
    int s = 1;
    std::vector<IndexTuple> cells; // lexicographically sorted

    bool operator==(const Diagonal& other) const = default;
};

struct PermanentResult {
    Rational value;
    Integer diagonal_count; // diagonals whose entries are all positive
    std::optional<Diagonal> witness; // lexicographically first positive diagonal
};

// Exact 1-permanent by depth-first assignment over the first axis with
// per-axis used-value masks and zero-entry pruning. `threads` may split the
// top-level branch; the result is identical for every thread count.
PermanentResult permanent1(const Tensor& a, int threads = 1);

// Exact s-permanent via slot-by-slot backtracking over supports; capped.
PermanentResult permanent_s(const Tensor& a, int s);

struct TransversalCount {
    Integer count;
    std::optional<std::vector<Diagonal>> list;
};

// Transversals of H = positive diagonals of p_of_h(H).
TransversalCount count_transversals(const LatinHypercube& h, bool with_list = false);

// All transversals, as diagonals of the associated permutation tensor,
// in lexicographic order.
std::vector<Diagonal> enumerate_transversals(const LatinHypercube& h);

// Searches the union of the supports of the p_of_h images for a positive
// diagonal; such a diagonal is a mixed transversal of the set.
std::optional<Diagonal> mixed_transversal_exists(const std::vector<LatinHypercube>& hs);

// permanent1(a) > 0, decided on the support with early exit. Requires a >= 0.
bool has_positive_diagonal(const Tensor& a);

// First positive diagonal of a non-negative tensor, if any.
std::optional<Diagonal> find_positive_diagonal(const Tensor& a);

// Verifies T is a transversal of H, returns the Delta sum mod n, and checks
// it lands on the parity-dictated residue (0, or n/2 when n is even and the
// matrix dimension is odd).
int delta_sum_check(const LatinHypercube& h, const Diagonal& t);

} // namespace polystoch
