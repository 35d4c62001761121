#pragma once

#include "polystoch/latin.hpp"
#include "polystoch/permanent.hpp"
#include "polystoch/tensor.hpp"

#include <optional>
#include <vector>

namespace polystoch {

struct VertexReport {
    bool is_vertex = false;
    int freedom_dim = 0; // dimension of the line-sum solution space on Supp(A)
    std::optional<Tensor> witness_direction; // zero line sums, supported in Supp(A)
};

// A polystochastic matrix is a vertex iff it is the unique solution of
// "all line sums = 1" restricted to its support; decided by exact elimination.
VertexReport is_vertex(const Tensor& a);

// target scaled by `scale` equals the convex combination of Lambda_s terms:
// combine(terms) == scale * target.
struct HullCertificate {
    Tensor target;
    int s = 1;
    Rational scale = Rational(1);
    ConvexCombination terms;
};

PredicateReport verify_certificate(const HullCertificate& cert);

// Greedy 2-dimensional decomposition of a doubly stochastic matrix into
// permutation matrices (scale 1 certificate).
HullCertificate birkhoff_decompose(const Tensor& a);

struct CoverResult {
    enum class Status { Found, None, Undecided };
    Status status = Status::Undecided;
    std::vector<Tensor> parts; // n disjoint Lambda_2(3,n) matrices summing to P
    std::optional<LatinHypercube> mate; // orthogonal mate of H(P)
};

// Partitions the cells of H(P) into n disjoint transversals, if possible.
CoverResult transversal_cover(const Tensor& p);

struct RankResult {
    int rank = 0;
    bool independent = false;
};

// Exact rational rank of the flattened entry vectors.
RankResult rank_independent(const std::vector<Tensor>& ms);

} // namespace polystoch
