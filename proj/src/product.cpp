#include "lplat/product.hpp"

#include <algorithm>

namespace lplat {

namespace {

std::vector<Scalar> merge_cuts(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    std::vector<Scalar> out = a;
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Scalar& x, const Scalar& y) { return x == y; }),
              out.end());
    return out;
}

std::size_t cell_index(const std::vector<Scalar>& cuts, const Scalar& x) {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i] <= x && x < cuts[i + 1]) return i;
    throw error("Step2D: point outside [0,1)");
}

}  // namespace

Step2D::Step2D(std::vector<Rect> rects) {
    std::vector<Scalar> xs{Scalar(0), Scalar(1)}, ys{Scalar(0), Scalar(1)};
    for (const auto& r : rects) {
        xs.push_back(r.x.lo);
        xs.push_back(r.x.hi);
        ys.push_back(r.y.lo);
        ys.push_back(r.y.hi);
    }
    xs_ = merge_cuts(xs, {});
    ys_ = merge_cuts(ys, {});
    vals_.assign(xs_.size() - 1, std::vector<Scalar>(ys_.size() - 1, Scalar(0)));
    for (const auto& r : rects) {
        if (r.x.empty() || r.y.empty()) continue;
        for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
            if (xs_[i] < r.x.lo || r.x.hi < xs_[i + 1]) continue;
            for (std::size_t j = 0; j + 1 < ys_.size(); ++j) {
                if (ys_[j] < r.y.lo || r.y.hi < ys_[j + 1]) continue;
                vals_[i][j] += r.value;
            }
        }
    }
}

Step2D Step2D::refined(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys) const {
    Step2D out;
    out.xs_ = xs;
    out.ys_ = ys;
    out.vals_.assign(xs.size() - 1, std::vector<Scalar>(ys.size() - 1, Scalar(0)));
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        std::size_t si = cell_index(xs_, xs[i]);
        for (std::size_t j = 0; j + 1 < ys.size(); ++j)
            out.vals_[i][j] = vals_[si][cell_index(ys_, ys[j])];
    }
    return out;
}

Scalar Step2D::at(const Scalar& x, const Scalar& y) const {
    return vals_[cell_index(xs_, x)][cell_index(ys_, y)];
}

bool Step2D::is_zero() const {
    for (const auto& row : vals_)
        for (const auto& v : row)
            if (!v.is_zero()) return false;
    return true;
}

Step2D Step2D::operator+(const Step2D& o) const {
    std::vector<Scalar> xs = merge_cuts(xs_, o.xs_);
    std::vector<Scalar> ys = merge_cuts(ys_, o.ys_);
    Step2D a = refined(xs, ys), b = o.refined(xs, ys);
    for (std::size_t i = 0; i < a.vals_.size(); ++i)
        for (std::size_t j = 0; j < a.vals_[i].size(); ++j) a.vals_[i][j] += b.vals_[i][j];
    return a;
}

Step2D Step2D::operator-(const Step2D& o) const {
    Step2D neg = o;
    for (auto& row : neg.vals_)
        for (auto& v : row) v = -v;
    return *this + neg;
}

Step2D Step2D::abs() const {
    Step2D a = *this;
    for (auto& row : a.vals_)
        for (auto& v : row) v = v.abs();
    return a;
}

Scalar Step2D::norm1(const Measure& mu) const {
    Scalar total(0);
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        Scalar mx = mu.mass(Interval{xs_[i], xs_[i + 1]});
        for (std::size_t j = 0; j + 1 < ys_.size(); ++j)
            total += vals_[i][j].abs() * mx * (ys_[j + 1] - ys_[j]);
    }
    return total;
}

bool Step2D::operator==(const Step2D& o) const {
    std::vector<Scalar> xs = merge_cuts(xs_, o.xs_);
    std::vector<Scalar> ys = merge_cuts(ys_, o.ys_);
    Step2D a = refined(xs, ys), b = o.refined(xs, ys);
    return a.vals_ == b.vals_;
}

// ---------------------------------------------------------------------------

ProductSystem::ProductSystem(PAMap horizontal, Scalar rotation_step, Measure mu)
    : f_(std::move(horizontal)), step_(std::move(rotation_step)), mu_(std::move(mu)) {
    if (f_.space().kind != SpaceKind::Unit)
        throw error("ProductSystem: horizontal factor must act on UNIT");
    if (step_.is_rational())
        throw error("ProductSystem: vertical rotation must be irrational");
    rn_ = rn_derivative(f_, mu_);
}

Step2D ProductSystem::lift(const StepFunction& u) const {
    std::vector<Step2D::Rect> rects;
    for (const auto& p : u.pieces())
        rects.push_back({{p.lo, p.hi}, {Scalar(0), Scalar(1)}, p.value});
    return Step2D(std::move(rects));
}

Step2D ProductSystem::apply_with(const PAMap& f, const Scalar& step, const StepFunction& rn,
                                 const Step2D& F) const {
    Scalar a = step - Scalar(Rat(step.floor()));
    PAMap finv = f.inverse();

    // refine horizontally so each x-cell sits in one branch with constant
    // derivative, and vertically at the rotation wrap point
    std::vector<Scalar> xcuts = F.xcuts();
    for (const auto& b : f.branches()) xcuts.push_back(b.domain.lo);
    for (const auto& rp : rn.pieces())
        for (const Scalar& c : {rp.lo, rp.hi})
            if (Scalar(0) < c && c < Scalar(1)) xcuts.push_back(finv.apply(c));
    std::vector<Scalar> ycuts = F.ycuts();
    if (!a.is_zero()) ycuts.push_back(Scalar(1) - a);
    Step2D R = F.refined(merge_cuts(xcuts, {}), merge_cuts(ycuts, {}));

    std::vector<Step2D::Rect> rects;
    const auto& xs = R.xs_;
    const auto& ys = R.ys_;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        IntervalSet img = f.image(IntervalSet::single(xs[i], xs[i + 1]));
        if (img.intervals().size() != 1) throw error("ProductSystem: cell spans branches");
        Interval jx = img.intervals()[0];
        Scalar mid = (jx.lo + jx.hi) * Scalar(Rat(1, 2));
        Scalar factor = rn.at(mid);
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            if (R.vals_[i][j].is_zero()) continue;
            Scalar ylo = ys[j] + a, yhi = ys[j + 1] + a;
            if (Scalar(1) < yhi) {
                ylo -= Scalar(1);
                yhi -= Scalar(1);
            }
            rects.push_back({jx, {ylo, yhi}, R.vals_[i][j] * factor});
        }
    }
    return Step2D(std::move(rects));
}

Step2D ProductSystem::apply(const Step2D& F) const { return apply_with(f_, step_, rn_, F); }

Step2D ProductSystem::apply_inverse(const Step2D& F) const {
    PAMap finv = f_.inverse();
    return apply_with(finv, -step_, rn_derivative(finv, mu_), F);
}

AperiodicityReport ProductSystem::aperiodicity(int n_max) const {
    AperiodicityReport rep;
    for (int n = 1; n <= n_max; ++n)
        rep.per_n.push_back({n, PeriodicityVerdict::Aperiodic, Scalar(0)});
    rep.certified_all_n = true;
    rep.certificate =
        "irrational vertical rotation: the n-periodic set lies in a null slice of the square";
    return rep;
}

}  // namespace lplat
