#pragma once

#include "lplat/scalar.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace lplat {

enum class SpaceKind { Unit, Line };

/// Measured base space: the half-open unit interval, or the real line
/// represented through finitely supported data.
struct Space {
    SpaceKind kind = SpaceKind::Unit;
    AlphaRef alpha;  // optional designated irrational

    bool compatible(const Space& o) const {
        if (kind != o.kind) return false;
        if (alpha && o.alpha) return alpha->same(*o.alpha);
        return true;
    }
    static Space unit(AlphaRef a = nullptr) { return {SpaceKind::Unit, std::move(a)}; }
    static Space line(AlphaRef a = nullptr) { return {SpaceKind::Line, std::move(a)}; }
};

/// Half-open interval [lo, hi).
struct Interval {
    Scalar lo;
    Scalar hi;
    Scalar length() const { return hi - lo; }
    bool empty() const { return !(lo < hi); }
};

/// Normalized finite union of disjoint half-open intervals, sorted and with
/// adjacent pieces merged.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> ivs);
    static IntervalSet single(Scalar lo, Scalar hi);

    const std::vector<Interval>& intervals() const { return ivs_; }
    bool empty() const { return ivs_.empty(); }
    Scalar total_length() const;

    bool contains(const Scalar& x) const;

    IntervalSet unite(const IntervalSet& o) const;
    IntervalSet intersect(const IntervalSet& o) const;
    IntervalSet subtract(const IntervalSet& o) const;

    bool operator==(const IntervalSet& o) const;

private:
    std::vector<Interval> ivs_;
};

/// Exponent of the lattice norm; p = 1 is the exact mode.
struct PExponent {
    Rat p = 1;
    bool exact() const { return p == 1; }
    static PExponent one() { return {Rat(1)}; }
};

/// Finitely supported piecewise-constant function.  Canonical form: pieces
/// sorted and disjoint, zero values dropped, adjacent equal-valued pieces
/// merged; equality of step functions is structural.
class StepFunction {
public:
    struct Piece {
        Scalar lo, hi;  // [lo, hi)
        Scalar value;
    };

    StepFunction() = default;
    explicit StepFunction(std::vector<Piece> pieces);

    static StepFunction indicator(const Scalar& lo, const Scalar& hi);
    static StepFunction indicator(const IntervalSet& s);
    static StepFunction zero() { return StepFunction(); }

    const std::vector<Piece>& pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }

    Scalar at(const Scalar& x) const;
    IntervalSet support() const;
    Scalar max_abs_value() const;
    Scalar min_positive_value() const;

    StepFunction operator+(const StepFunction& o) const;
    StepFunction operator-(const StepFunction& o) const;
    StepFunction operator-() const;
    StepFunction scale(const Scalar& c) const;
    StepFunction abs() const;
    StepFunction join(const StepFunction& o) const;  // pointwise max
    StepFunction meet(const StepFunction& o) const;  // pointwise min
    StepFunction pos() const { return join(StepFunction()); }
    StepFunction neg_part() const { return (-*this).join(StepFunction()); }
    StepFunction avg(const StepFunction& o) const { return (*this + o).scale(Rat(1, 2)); }
    StepFunction multiply(const StepFunction& o) const;  // pointwise product

    /// Band projection of *this onto b(y): x * indicator(supp y).
    StepFunction restrict_to(const StepFunction& y) const;
    StepFunction restrict_to(const IntervalSet& a) const;
    /// Zeroes *this on A (projection onto the complement band).
    StepFunction complement_project(const IntervalSet& a) const;

    bool operator==(const StepFunction& o) const;
    bool operator!=(const StepFunction& o) const { return !(*this == o); }

    /// u <= v pointwise.
    bool dominated_by(const StepFunction& o) const;

    std::string text() const;

private:
    std::vector<Piece> pieces_;
};

bool disjoint(const StepFunction& f, const StepFunction& g);

/// Sigma-finite measure with piecewise-constant density.  Points not covered
/// by an explicit density piece carry density 1 (on UNIT the default density
/// is the uniform one; on LINE this makes the measure sigma-finite with
/// finitely many deviations from Lebesgue).
class Measure {
public:
    Measure() : space_(Space::unit()) {}
    explicit Measure(Space space) : space_(std::move(space)) {}
    Measure(Space space, StepFunction density_deviation);

    static Measure lebesgue_unit(AlphaRef a = nullptr) { return Measure(Space::unit(std::move(a))); }
    static Measure lebesgue_line(AlphaRef a = nullptr) { return Measure(Space::line(std::move(a))); }

    const Space& space() const { return space_; }
    /// Density value at a point.
    Scalar density_at(const Scalar& x) const;
    const StepFunction& density_pieces() const { return density_; }
    bool is_lebesgue() const { return density_.is_zero(); }

    Scalar mass(const IntervalSet& a) const;
    Scalar mass(const Interval& a) const;
    bool finite_total() const { return space_.kind == SpaceKind::Unit; }
    Scalar total_mass() const;

private:
    Space space_;
    StepFunction density_;  // explicit pieces; implicit density 1 elsewhere
};

using ScalarOrEnclosure = std::variant<Scalar, Enclosure>;

/// L^p norm of a step function: exact Scalar for p = 1 (or whenever the
/// integral has an exact p-th root), an Enclosure of width <= root_width
/// otherwise.
ScalarOrEnclosure norm_p(const StepFunction& f, const Measure& mu, const PExponent& p,
                         const Rat& root_width = Rat(1, 1 << 20));

/// Exact L^1 norm.
Scalar norm1(const StepFunction& f, const Measure& mu);

}  // namespace lplat
