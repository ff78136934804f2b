#pragma once

#include "lplat/step.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lplat {

/// Affine branch x -> slope * x + intercept on the half-open domain.
struct Branch {
    Interval domain;
    Rat slope;       // nonzero (non-singularity)
    Scalar intercept;

    Scalar image_of(const Scalar& x) const { return x * Scalar(slope) + intercept; }
    Interval image() const;
};

/// Invertible piecewise-affine transformation.  On UNIT the branches
/// partition [0,1) and so do their images; on LINE only translations
/// x -> x + step are represented.
class PAMap {
public:
    /// UNIT map from explicit branches; validates bijectivity.
    static PAMap from_branches(Space space, std::vector<Branch> branches);
    static PAMap identity(Space space);
    static PAMap rotation(const Scalar& step, Space space);
    static PAMap translation(const Scalar& step, Space space);

    const Space& space() const { return space_; }
    bool is_line_translation() const { return line_; }
    const Scalar& translation_step() const { return step_; }
    const std::vector<Branch>& branches() const { return branches_; }

    bool is_identity() const;
    /// Detects the rotation structure and returns its step in [0,1).
    std::optional<Scalar> as_rotation() const;

    Scalar apply(const Scalar& x) const;
    IntervalSet image(const IntervalSet& s) const;
    IntervalSet preimage(const IntervalSet& s) const;

    PAMap compose(const PAMap& inner) const;  // (*this) o inner
    PAMap inverse() const;
    PAMap conjugate_by(const PAMap& f) const;  // f o (*this) o f^-1
    PAMap power(long n) const;

    bool operator==(const PAMap& o) const;

    std::string text() const;

private:
    PAMap() = default;

    Space space_;
    bool line_ = false;
    Scalar step_;                  // LINE translation step
    std::vector<Branch> branches_; // UNIT branches, sorted by domain
};

enum class PeriodicityVerdict { Aperiodic, Periodic };

struct AperiodicityReport {
    struct PerN {
        int n;
        PeriodicityVerdict verdict;
        Scalar periodic_mass;  // Lebesgue mass of identity branches of sigma^n
    };
    std::vector<PerN> per_n;
    bool certified_all_n = false;  // closed-form certificate covers every n
    std::string certificate;

    bool aperiodic_up_to(int n) const;
};

/// Symbolic aperiodicity analysis up to n_max, with closed-form certificates
/// for the rotation and translation families.
AperiodicityReport aperiodicity_check(const PAMap& sigma, int n_max);

/// Piecewise-constant Radon-Nikodym derivative of the pushforward of mu
/// under sigma with respect to mu.
StepFunction rn_derivative(const PAMap& sigma, const Measure& mu);

}  // namespace lplat
