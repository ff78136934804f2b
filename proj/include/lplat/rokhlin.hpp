#pragma once

#include "lplat/induced.hpp"

namespace lplat {

/// First-return decomposition of a base set: each piece comes back to the
/// base after exactly k steps, never earlier.  Mass that does not return
/// within the iteration cap is surfaced as residual.
struct ReturnPartition {
    struct Piece {
        Interval part;  // subinterval of the base
        int k;          // least return time, >= 1
    };
    IntervalSet base;
    std::vector<Piece> pieces;
    IntervalSet residual;

    Scalar resolved_mass() const;
};

/// Output of the tower construction, with its certificates recomputed
/// exactly from (g, h) before being returned.
struct TowerResult {
    StepFunction g;
    StepFunction h;
    int n = 0;
    Scalar overlap;     // max over i < j < n of || sigma^i g  /\  sigma^j g ||
    Scalar deficiency;  // || (sum_k sigma^k g + h - f)^- ||
    Scalar g_norm;
    Scalar h_norm;
};

/// B inside A, positive mass, with sigma^k(B) disjoint from B for
/// 1 <= k <= N.  Shrink-and-verify; delta is the width floor below which
/// the search gives up with a diagnostic error.
IntervalSet disjoint_base(const PAMap& sigma, const IntervalSet& A, int N, const Rat& delta);

/// B as in disjoint_base, additionally covering A by its images
/// sigma^k(B), |k| <= N, up to residual mass at most delta.
std::pair<IntervalSet, Scalar> covering_base(const PAMap& sigma, const IntervalSet& A, int N,
                                             const Rat& delta);

ReturnPartition first_return(const PAMap& sigma, const IntervalSet& B, int K_max);

/// Tower splitting: positive g, h with sigma^k(g) pairwise disjoint for
/// k < n, f <= sum_k sigma^k(g) + h, ||g|| <= ||f||, ||h|| <= eps.
TowerResult functional_rokhlin(const InducedAut& A, const StepFunction& f, int n,
                               const Rat& eps);

/// Base set A with sigma^i(A) pairwise disjoint for i < n and leak
/// mass(X \ union) < eps.  UNIT only.
IntervalSet set_tower(const PAMap& sigma, int n, const Rat& eps);

/// Exact value of the quantifier-free Rokhlin matrix:
/// max( ||sigma^i|y| /\ |y||| for 0 < i < n,
///      ||(sum_{k<n} sigma^k|y| - |x|)^-||,
///      ||y|| monus ||x|| ).
Scalar rn_value(const InducedAut& A, const StepFunction& x, const StepFunction& y, int n);

}  // namespace lplat
