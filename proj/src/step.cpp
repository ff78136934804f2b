#include "lplat/step.hpp"

#include <algorithm>
#include <sstream>

namespace lplat {

namespace {

void sort_by_lo(std::vector<Interval>& ivs) {
    std::sort(ivs.begin(), ivs.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
}

}  // namespace

// ---------------------------------------------------------------------------
// IntervalSet

IntervalSet::IntervalSet(std::vector<Interval> ivs) {
    std::erase_if(ivs, [](const Interval& iv) { return iv.empty(); });
    sort_by_lo(ivs);
    for (auto& iv : ivs) {
        if (!ivs_.empty() && iv.lo < ivs_.back().hi)
            throw error("IntervalSet: overlapping intervals");
        if (!ivs_.empty() && iv.lo == ivs_.back().hi)
            ivs_.back().hi = iv.hi;  // merge adjacent
        else
            ivs_.push_back(iv);
    }
}

IntervalSet IntervalSet::single(Scalar lo, Scalar hi) {
    return IntervalSet({Interval{std::move(lo), std::move(hi)}});
}

Scalar IntervalSet::total_length() const {
    Scalar total(0);
    for (const auto& iv : ivs_) total += iv.length();
    return total;
}

bool IntervalSet::contains(const Scalar& x) const {
    for (const auto& iv : ivs_)
        if (iv.lo <= x && x < iv.hi) return true;
    return false;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
    // endpoints may interleave arbitrarily, so rebuild from scratch
    std::vector<Interval> all = ivs_;
    all.insert(all.end(), o.ivs_.begin(), o.ivs_.end());
    sort_by_lo(all);
    std::vector<Interval> out;
    for (auto& iv : all) {
        if (iv.empty()) continue;
        if (!out.empty() && iv.lo <= out.back().hi) {
            if (out.back().hi < iv.hi) out.back().hi = iv.hi;
        } else {
            out.push_back(iv);
        }
    }
    IntervalSet r;
    r.ivs_ = std::move(out);
    return r;
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
    std::vector<Interval> out;
    for (const auto& a : ivs_) {
        for (const auto& b : o.ivs_) {
            if (b.lo >= a.hi) break;
            if (b.hi <= a.lo) continue;
            out.push_back({max(a.lo, b.lo), min(a.hi, b.hi)});
        }
    }
    IntervalSet r;
    r.ivs_ = std::move(out);
    return r;
}

IntervalSet IntervalSet::subtract(const IntervalSet& o) const {
    std::vector<Interval> out;
    for (const auto& a : ivs_) {
        Scalar cur = a.lo;
        for (const auto& b : o.ivs_) {
            if (b.hi <= cur) continue;
            if (b.lo >= a.hi) break;
            if (cur < b.lo) out.push_back({cur, min(b.lo, a.hi)});
            cur = max(cur, b.hi);
            if (!(cur < a.hi)) break;
        }
        if (cur < a.hi) out.push_back({cur, a.hi});
    }
    return IntervalSet(std::move(out));
}

bool IntervalSet::operator==(const IntervalSet& o) const {
    if (ivs_.size() != o.ivs_.size()) return false;
    for (std::size_t i = 0; i < ivs_.size(); ++i)
        if (ivs_[i].lo != o.ivs_[i].lo || ivs_[i].hi != o.ivs_[i].hi) return false;
    return true;
}

// ---------------------------------------------------------------------------
// StepFunction

StepFunction::StepFunction(std::vector<Piece> pieces) {
    std::erase_if(pieces, [](const Piece& p) { return !(p.lo < p.hi) || p.value.is_zero(); });
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    for (auto& p : pieces) {
        if (!pieces_.empty() && p.lo < pieces_.back().hi)
            throw error("StepFunction: overlapping pieces");
        if (!pieces_.empty() && p.lo == pieces_.back().hi && p.value == pieces_.back().value)
            pieces_.back().hi = p.hi;
        else
            pieces_.push_back(p);
    }
}

StepFunction StepFunction::indicator(const Scalar& lo, const Scalar& hi) {
    return StepFunction({Piece{lo, hi, Scalar(1)}});
}

StepFunction StepFunction::indicator(const IntervalSet& s) {
    std::vector<Piece> ps;
    for (const auto& iv : s.intervals()) ps.push_back({iv.lo, iv.hi, Scalar(1)});
    return StepFunction(std::move(ps));
}

Scalar StepFunction::at(const Scalar& x) const {
    for (const auto& p : pieces_) {
        if (x < p.lo) break;
        if (x < p.hi) return p.value;
    }
    return Scalar(0);
}

IntervalSet StepFunction::support() const {
    std::vector<Interval> ivs;
    for (const auto& p : pieces_) ivs.push_back({p.lo, p.hi});
    return IntervalSet(std::move(ivs));
}

Scalar StepFunction::max_abs_value() const {
    Scalar m(0);
    for (const auto& p : pieces_) m = max(m, p.value.abs());
    return m;
}

Scalar StepFunction::min_positive_value() const {
    Scalar m(0);
    bool found = false;
    for (const auto& p : pieces_) {
        if (p.value.sign() > 0 && (!found || p.value < m)) {
            m = p.value;
            found = true;
        }
    }
    if (!found) throw error("StepFunction: no positive value");
    return m;
}

namespace {

// Pointwise combination over the common refinement of two piece lists.
StepFunction zip_with(const StepFunction& f, const StepFunction& g,
                      const std::function<Scalar(const Scalar&, const Scalar&)>& op) {
    std::vector<Scalar> cuts;
    for (const auto& p : f.pieces()) { cuts.push_back(p.lo); cuts.push_back(p.hi); }
    for (const auto& p : g.pieces()) { cuts.push_back(p.lo); cuts.push_back(p.hi); }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](const Scalar& a, const Scalar& b) { return a == b; }),
               cuts.end());
    std::vector<StepFunction::Piece> out;
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const Scalar& a = cuts[k];
        const Scalar& b = cuts[k + 1];
        while (i < f.pieces().size() && !(a < f.pieces()[i].hi)) ++i;
        while (j < g.pieces().size() && !(a < g.pieces()[j].hi)) ++j;
        Scalar fv = (i < f.pieces().size() && !(a < f.pieces()[i].lo)) ? f.pieces()[i].value
                                                                       : Scalar(0);
        Scalar gv = (j < g.pieces().size() && !(a < g.pieces()[j].lo)) ? g.pieces()[j].value
                                                                       : Scalar(0);
        Scalar v = op(fv, gv);
        if (!v.is_zero()) out.push_back({a, b, v});
    }
    return StepFunction(std::move(out));
}

}  // namespace

StepFunction StepFunction::operator+(const StepFunction& o) const {
    return zip_with(*this, o, [](const Scalar& a, const Scalar& b) { return a + b; });
}

StepFunction StepFunction::operator-(const StepFunction& o) const {
    return zip_with(*this, o, [](const Scalar& a, const Scalar& b) { return a - b; });
}

StepFunction StepFunction::operator-() const {
    std::vector<Piece> ps = pieces_;
    for (auto& p : ps) p.value = -p.value;
    return StepFunction(std::move(ps));
}

StepFunction StepFunction::scale(const Scalar& c) const {
    if (c.is_zero()) return StepFunction();
    std::vector<Piece> ps = pieces_;
    for (auto& p : ps) p.value = p.value * c;
    return StepFunction(std::move(ps));
}

StepFunction StepFunction::abs() const {
    std::vector<Piece> ps = pieces_;
    for (auto& p : ps) p.value = p.value.abs();
    return StepFunction(std::move(ps));
}

StepFunction StepFunction::join(const StepFunction& o) const {
    return zip_with(*this, o, [](const Scalar& a, const Scalar& b) { return max(a, b); });
}

StepFunction StepFunction::meet(const StepFunction& o) const {
    return zip_with(*this, o, [](const Scalar& a, const Scalar& b) { return min(a, b); });
}

StepFunction StepFunction::multiply(const StepFunction& o) const {
    return zip_with(*this, o, [](const Scalar& a, const Scalar& b) { return a * b; });
}

StepFunction StepFunction::restrict_to(const StepFunction& y) const {
    return restrict_to(y.support());
}

StepFunction StepFunction::restrict_to(const IntervalSet& a) const {
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
        for (const auto& iv : a.intervals()) {
            if (iv.hi <= p.lo) continue;
            if (iv.lo >= p.hi) break;
            out.push_back({max(p.lo, iv.lo), min(p.hi, iv.hi), p.value});
        }
    }
    return StepFunction(std::move(out));
}

StepFunction StepFunction::complement_project(const IntervalSet& a) const {
    return restrict_to(support().subtract(a));
}

bool StepFunction::operator==(const StepFunction& o) const {
    if (pieces_.size() != o.pieces_.size()) return false;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (pieces_[i].lo != o.pieces_[i].lo || pieces_[i].hi != o.pieces_[i].hi ||
            pieces_[i].value != o.pieces_[i].value)
            return false;
    }
    return true;
}

bool StepFunction::dominated_by(const StepFunction& o) const {
    bool ok = true;
    zip_with(*this, o, [&ok](const Scalar& a, const Scalar& b) {
        if (a > b) ok = false;
        return Scalar(0);
    });
    // pieces of *this outside o are fine iff their values are <= 0, which the
    // sweep above already saw (o contributes 0 there)
    return ok;
}

std::string StepFunction::text() const {
    std::ostringstream os;
    os << "step{ ";
    bool first = true;
    for (const auto& p : pieces_) {
        if (!first) os << ", ";
        first = false;
        os << "[" << p.lo.text() << "," << p.hi.text() << "): " << p.value.text();
    }
    os << " }";
    return os.str();
}

bool disjoint(const StepFunction& f, const StepFunction& g) {
    return f.abs().meet(g.abs()).is_zero();
}

// ---------------------------------------------------------------------------
// Measure

Measure::Measure(Space space, StepFunction density_deviation)
    : space_(std::move(space)), density_(std::move(density_deviation)) {
    for (const auto& p : density_.pieces())
        if (!(p.value > Scalar(0))) throw error("Measure: density must be strictly positive");
}

Scalar Measure::density_at(const Scalar& x) const {
    for (const auto& p : density_.pieces()) {
        if (x < p.lo) break;
        if (x < p.hi) return p.value;
    }
    return Scalar(1);
}

Scalar Measure::mass(const Interval& a) const {
    if (a.empty()) return Scalar(0);
    Scalar total(0);
    Scalar cur = a.lo;
    for (const auto& p : density_.pieces()) {
        if (p.hi <= cur) continue;
        if (p.lo >= a.hi) break;
        if (cur < p.lo) {
            total += min(p.lo, a.hi) - cur;  // background density 1
            cur = min(p.lo, a.hi);
        }
        if (cur < a.hi && cur < p.hi) {
            Scalar end = min(p.hi, a.hi);
            total += (end - cur) * p.value;
            cur = end;
        }
    }
    if (cur < a.hi) total += a.hi - cur;
    return total;
}

Scalar Measure::mass(const IntervalSet& a) const {
    Scalar total(0);
    for (const auto& iv : a.intervals()) total += mass(iv);
    return total;
}

Scalar Measure::total_mass() const {
    if (!finite_total()) throw error("Measure: infinite total mass on LINE");
    return mass(Interval{Scalar(0), Scalar(1)});
}

// ---------------------------------------------------------------------------
// Norms

Scalar norm1(const StepFunction& f, const Measure& mu) {
    Scalar total(0);
    for (const auto& p : f.pieces())
        total += p.value.abs() * mu.mass(Interval{p.lo, p.hi});
    return total;
}

ScalarOrEnclosure norm_p(const StepFunction& f, const Measure& mu, const PExponent& p,
                         const Rat& root_width) {
    if (p.exact()) return norm1(f, mu);
    if (f.is_zero()) return Scalar(0);
    Int a = numerator(p.p), b = denominator(p.p);
    if (b == 1) {
        // integer exponent: the integral of |v|^p is exact
        long e = a.convert_to<long>();
        Scalar integral(0);
        for (const auto& piece : f.pieces()) {
            Scalar v = piece.value.abs();
            Scalar pw(1);
            for (long i = 0; i < e; ++i) pw *= v;
            integral += pw * mu.mass(Interval{piece.lo, piece.hi});
        }
        if (integral.is_rational()) {
            if (auto root = exact_nth_root(integral.as_rational(), static_cast<unsigned>(e)))
                return Scalar(*root);
            return p_root_enclose(Enclosure(integral.as_rational()), p.p, root_width);
        }
        return p_root_enclose(integral.enclose(root_width), p.p, root_width);
    }
    // fractional exponent: enclose |v|^p piecewise, then take the outer root
    Enclosure integral(Rat(0));
    long e = a.convert_to<long>();
    for (const auto& piece : f.pieces()) {
        Enclosure v = piece.value.abs().enclose(root_width);
        Enclosure va(rat_pow(v.lo, e), rat_pow(v.hi, e));
        Enclosure vp = p_root_enclose(va, Rat(b), root_width);
        Enclosure m = piece.value.is_zero() ? Enclosure(Rat(0))
                                            : mu.mass(Interval{piece.lo, piece.hi}).enclose(root_width);
        integral = integral + vp * m;
    }
    return p_root_enclose(integral, p.p, root_width);
}

}  // namespace lplat
