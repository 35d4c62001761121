#pragma once

#include "polystoch/tensor.hpp"

#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace polystoch {

// k-dimensional array over symbols {0..n-1} in which every line contains
// each symbol exactly once.
class LatinHypercube {
public:
    // Validates the Latin property; throws std::invalid_argument otherwise.
    LatinHypercube(int dim, int order, std::vector<int> symbols);

    int dim() const { return dim_; }
    int order() const { return order_; }
    std::size_t size() const { return symbols_.size(); }

    int at(std::span<const int> coords) const { return symbols_[flat_index(coords)]; }
    int operator[](std::size_t flat) const { return symbols_[flat]; }

    std::size_t flat_index(std::span<const int> coords) const;
    IndexTuple unflatten(std::size_t flat) const;

    const std::vector<int>& symbols() const { return symbols_; }

    bool operator==(const LatinHypercube& other) const = default;

private:
    int dim_;
    int order_;
    std::vector<int> symbols_;
};

// One element of a hypercube: its coordinates and the symbol there.
struct Cell {
    IndexTuple coords;
    int symbol = 0;
};

bool is_latin_array(int dim, int order, const std::vector<int>& symbols);

// H -> P with P(x_1..x_k, s) = 1 iff H(x_1..x_k) = s; P is in Lambda_1(k+1, n).
Tensor p_of_h(const LatinHypercube& h);

// Inverse of p_of_h; rejects tensors outside Lambda_1.
LatinHypercube h_of_p(const Tensor& p);

// H(x_1..x_k) = (x_1 + ... + x_k) mod n.
LatinHypercube cyclic(int dim, int order);

struct LinearForm {
    int shift = 0;
    std::vector<int> coeffs;
};

// H(x) = (shift + sum coeffs[i]*x_i) mod n. Requires gcd(coeffs[i], n) = 1.
LatinHypercube linear_hypercube(int dim, int order, int shift, const std::vector<int>& coeffs);

// The unique linear form matching H, if any.
std::optional<LinearForm> detect_linear(const LatinHypercube& h);

// (symbol - sum of coordinates) mod n.
int delta(const LatinHypercube& h, const Cell& c);

// H(x_1..x_k) = (L(x_1, x_2) + x_3 + ... + x_k) mod n; lift(L, 2) = L.
LatinHypercube lift(const LatinHypercube& square, int dim);

// Switches the minimal row cycle through (r1, start_col) between rows r1, r2.
LatinHypercube switch_row_cycle(const LatinHypercube& square, int r1, int r2, int start_col);

// Columns of the cycle through (r1, start_col), in trace order.
std::vector<int> row_cycle_columns(const LatinHypercube& square, int r1, int r2, int start_col);

// Swaps hyperplanes i and j along the given axis; axis == dim() selects the
// symbol direction (relabels symbols i and j everywhere).
LatinHypercube interchange_hyperplanes(const LatinHypercube& h, int axis, int i, int j);

enum class Tristate { False, True, Undecided };

// Orbit test under coordinate/value permutations and axis exchange on the
// associated permutation tensor. Undecided when the canonical-form search
// exceeds its node cap.
Tristate species_equivalent(const LatinHypercube& h1, const LatinHypercube& h2);

// Lexicographically minimal symbol array over the species orbit;
// nullopt when the node cap is exceeded.
std::optional<std::vector<int>> canonical_species_form(const LatinHypercube& h);

// The hypercube whose permutation tensor is P with axes permuted so that new
// axis i reads old axis perm[i].
LatinHypercube conjugate(const LatinHypercube& h, const std::vector<int>& perm);

class CapCounter;

// Fills the -1 cells of `partial` in lexicographic order subject to the
// Latin property, invoking fn once per completion; fn returns false to stop.
// Returns false when stopped early. shuffle_rng randomizes the symbol try
// order per cell; cap counts candidate expansions.
bool for_each_latin_completion(int dim, int order, const std::vector<int>& partial,
                               const std::function<bool(const std::vector<int>&)>& fn,
                               CapCounter* cap = nullptr,
                               std::mt19937_64* shuffle_rng = nullptr);

// All Latin hypercubes of the given shape, in lexicographic symbol order.
bool for_each_latin_hypercube(int dim, int order,
                              const std::function<bool(const LatinHypercube&)>& fn);

} // namespace polystoch
