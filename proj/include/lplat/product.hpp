#pragma once

#include "lplat/induced.hpp"

namespace lplat {

/// Step function on the unit square, supported on a rectangle grid.
class Step2D {
public:
    struct Rect {
        Interval x;
        Interval y;
        Scalar value;
    };

    Step2D() = default;
    explicit Step2D(std::vector<Rect> rects);

    const std::vector<Scalar>& xcuts() const { return xs_; }
    const std::vector<Scalar>& ycuts() const { return ys_; }
    Scalar at(const Scalar& x, const Scalar& y) const;
    bool is_zero() const;

    Step2D operator+(const Step2D& o) const;
    Step2D operator-(const Step2D& o) const;
    Step2D abs() const;

    /// Integral of |F| against mu (horizontal) x Lebesgue (vertical).
    Scalar norm1(const Measure& mu) const;

    bool operator==(const Step2D& o) const;

private:
    // grid cuts always start at 0 and end at 1; vals_[i][j] sits on
    // [xs_[i], xs_[i+1]) x [ys_[j], ys_[j+1])
    std::vector<Scalar> xs_{Scalar(0), Scalar(1)};
    std::vector<Scalar> ys_{Scalar(0), Scalar(1)};
    std::vector<std::vector<Scalar>> vals_{{Scalar(0)}};

    Step2D refined(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys) const;
    friend class ProductSystem;
};

/// Skew product (x, y) -> (f(x), y + step) of a unit-interval map with an
/// aperiodic rotation, acting on rectangle step functions.
class ProductSystem {
public:
    ProductSystem(PAMap horizontal, Scalar rotation_step, Measure mu);

    const PAMap& horizontal() const { return f_; }
    const Scalar& rotation_step() const { return step_; }

    /// Phi(u)(x, y) = u(x).
    Step2D lift(const StepFunction& u) const;
    /// Induced automorphism of the product, p = 1.
    Step2D apply(const Step2D& F) const;
    Step2D apply_inverse(const Step2D& F) const;

    /// Periodic sets of the product are null for every n: the vertical
    /// rotation factor is irrational.
    AperiodicityReport aperiodicity(int n_max) const;

private:
    PAMap f_;
    Scalar step_;
    Measure mu_;
    StepFunction rn_;
    Step2D apply_with(const PAMap& f, const Scalar& step, const StepFunction& rn,
                      const Step2D& F) const;
};

}  // namespace lplat
