#pragma once

#include "polystoch/latin.hpp"
#include "polystoch/polytope.hpp"
#include "polystoch/tensor.hpp"

#include <vector>

namespace polystoch {

// Family of hypercubes agreeing with the cyclic hypercube outside r
// consecutive hyperplanes (window indices taken mod n) along one axis.
struct ZeroFamilySpec {
    int d = 3;            // matrix dimension, odd
    int n = 4;            // order, even
    int r = 0;            // window length, r(r-1) < n; 0 picks the maximum
    int window_start = -1; // -1 picks the last r hyperplanes
    int axis = 0;         // hypercube axis carrying the window

    static ZeroFamilySpec make(int d, int n);
    void validate() const;
    int effective_r() const;
    int effective_window_start() const;
};

// Largest r with r(r-1) < n.
int max_window_length(int n);

// All hypercubes of the family, in lexicographic order of the window fill.
std::vector<LatinHypercube> zero_family(const ZeroFamilySpec& spec);

// Up to `count` distinct members found by a randomized completion order.
std::vector<LatinHypercube> zero_family_sample(const ZeroFamilySpec& spec, int count,
                                               unsigned seed = 1);

// The square L_{a,b}: the cyclic square with the half-length row cycle
// through (2a-2, 2b-2) switched between rows 2a-2 and 2a, then the resulting
// intercalate at columns {2b-2, 2b-1} switched between rows 2a-2 and 2a-1.
// 1 <= a, 1 <= b <= n/2.
LatinHypercube lab_square(int n, int a, int b);

// Pairwise independent permutation matrices, every convex combination of
// which (plus the cyclic one) has zero permanent. n/2 * floor((r-1)/2)
// matrices for even n > 6; a single interchange for n in {4, 6}.
std::vector<Tensor> independent_zero_set(int d, int n);

// The polystochastic 6x6x6 matrix with a Lambda_2 hull certificate,
// transcribed from its layer display.
const Tensor& a6();

// Its 8-term certificate: combine(terms) = (1/6) a6().
HullCertificate a6_certificate();

// Two orthogonal Latin squares of order n (n > 2, n != 6): linear pairs for
// odd n, binary-field squares for n in {4, 8}, direct products for composite
// admissible n, capped backtracking otherwise.
std::pair<LatinHypercube, LatinHypercube> mols_pair(int n);

// Verified: all n^2 ordered symbol pairs distinct.
bool are_orthogonal(const LatinHypercube& a, const LatinHypercube& b);

// Certificate chain for d >= 3: base case from a transversal cover (a6 for
// n = 6), then repeated products with the 3-dimensional base. The target is
// 1-polystochastic, differs from uniform, and combine(terms) = n^(2-d) target.
HullCertificate hull_witness(int d, int n);

struct ScanResult {
    std::vector<Rational> epsilons;
    std::vector<Rational> values; // permanent of (1-eps) uniform + eps V
    Rational baseline;            // permanent of uniform(d, n)
};

// Exact permanents along the segment from uniform(d,n) toward V.
// An empty grid uses {1/100, 1/50, 1/20, 1/10}.
ScanResult perturbation_scan(const Tensor& v, std::vector<Rational> epsilons = {});

// Species among the squares agreeing with cyclic(2,n) outside the last r
// rows, lifted to dimension d-1. Desk scale only (n <= 6).
int count_zero_species(int n, int d);

} // namespace polystoch
