#pragma once

#include "lplat/pamap.hpp"

#include <memory>
#include <variant>

namespace lplat {

/// Step function whose coefficients are enclosures rather than exact scalars.
/// Produced when a p-th root of a derivative value has no exact representation.
struct EnclosedStep {
    struct Piece {
        Scalar lo;
        Scalar hi;
        Enclosure value;
    };
    std::vector<Piece> pieces;
};

/// Lattice automorphism induced by a non-singular transformation:
/// u maps to (d sigma_* mu / d mu)^(1/p) * (u composed with sigma^-1).
class InducedAut {
public:
    InducedAut(PAMap map, Measure mu, PExponent p = PExponent::one());

    const PAMap& map() const { return map_; }
    const Measure& measure() const { return mu_; }
    const PExponent& exponent() const { return p_; }
    const StepFunction& derivative() const { return rn_; }

    /// Exact application; throws when a required p-th root is irrational.
    StepFunction apply(const StepFunction& u) const;
    /// Exact when possible, otherwise enclosure-valued coefficients.
    std::variant<StepFunction, EnclosedStep> apply_general(
        const StepFunction& u, const Rat& width = Rat(1, 1 << 20)) const;

    StepFunction apply_inverse(const StepFunction& u) const;
    /// sigma-tilde^k, any sign of k.
    StepFunction apply_power(long k, const StepFunction& u) const;

    InducedAut inverse() const;
    /// (*this after other)~ as an induced automorphism of the composed map.
    InducedAut compose(const InducedAut& other) const;

    /// Encloses sigma^-1(r) by bisecting on q over supports of apply(chi_[0,q)).
    Enclosure support_inf_point(const Scalar& r, const Rat& width) const;
    /// Recovers the underlying inverse transformation from support data and
    /// verifies it against support_inf_point at branch sample points.
    PAMap reconstruct() const;

private:
    PAMap map_;
    Measure mu_;
    PExponent p_;
    StepFunction rn_;  // derivative of the pushforward, precomputed
};

}  // namespace lplat
