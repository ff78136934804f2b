#include "lplat/pamap.hpp"

#include <algorithm>
#include <sstream>

namespace lplat {

Interval Branch::image() const {
    Scalar a = domain.lo * Scalar(slope) + intercept;
    Scalar b = domain.hi * Scalar(slope) + intercept;
    // negative slope flips the orientation; endpoint type differences are null
    return slope > 0 ? Interval{a, b} : Interval{b, a};
}

namespace {

void check_partition_of_unit(std::vector<Interval> ivs, const char* what) {
    std::sort(ivs.begin(), ivs.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Scalar cur(0);
    for (const auto& iv : ivs) {
        if (iv.lo != cur) throw error(std::string("PAMap: ") + what + " do not partition [0,1)");
        cur = iv.hi;
    }
    if (cur != Scalar(1))
        throw error(std::string("PAMap: ") + what + " do not partition [0,1)");
}

}  // namespace

PAMap PAMap::from_branches(Space space, std::vector<Branch> branches) {
    if (space.kind != SpaceKind::Unit)
        throw error("PAMap: explicit branches are supported on UNIT only");
    std::erase_if(branches, [](const Branch& b) { return b.domain.empty(); });
    for (const auto& b : branches)
        if (b.slope == 0) throw error("PAMap: zero slope (singular branch)");
    std::sort(branches.begin(), branches.end(),
              [](const Branch& a, const Branch& b) { return a.domain.lo < b.domain.lo; });
    // merge adjacent branches that continue the same affine rule
    std::vector<Branch> merged;
    for (auto& b : branches) {
        if (!merged.empty() && merged.back().domain.hi == b.domain.lo &&
            merged.back().slope == b.slope && merged.back().intercept == b.intercept)
            merged.back().domain.hi = b.domain.hi;
        else
            merged.push_back(b);
    }
    std::vector<Interval> domains, images;
    for (const auto& b : merged) {
        domains.push_back(b.domain);
        images.push_back(b.image());
    }
    check_partition_of_unit(std::move(domains), "branch domains");
    check_partition_of_unit(std::move(images), "branch images (map not bijective)");
    PAMap m;
    m.space_ = std::move(space);
    m.branches_ = std::move(merged);
    return m;
}

PAMap PAMap::identity(Space space) {
    if (space.kind == SpaceKind::Line) return translation(Scalar(0), std::move(space));
    return from_branches(std::move(space),
                         {Branch{{Scalar(0), Scalar(1)}, Rat(1), Scalar(0)}});
}

PAMap PAMap::rotation(const Scalar& step, Space space) {
    if (space.kind != SpaceKind::Unit) throw error("PAMap: rotation lives on UNIT");
    Scalar a = step - Scalar(Rat(step.floor()));  // reduce mod 1
    if (a.is_zero()) return identity(std::move(space));
    Scalar cut = Scalar(1) - a;
    return from_branches(std::move(space),
                         {Branch{{Scalar(0), cut}, Rat(1), a},
                          Branch{{cut, Scalar(1)}, Rat(1), a - Scalar(1)}});
}

PAMap PAMap::translation(const Scalar& step, Space space) {
    if (space.kind != SpaceKind::Line) throw error("PAMap: translations live on LINE");
    PAMap m;
    m.space_ = std::move(space);
    m.line_ = true;
    m.step_ = step;
    return m;
}

bool PAMap::is_identity() const {
    if (line_) return step_.is_zero();
    for (const auto& b : branches_)
        if (b.slope != 1 || !b.intercept.is_zero()) return false;
    return true;
}

std::optional<Scalar> PAMap::as_rotation() const {
    if (line_) return std::nullopt;
    if (is_identity()) return Scalar(0);
    if (branches_.size() != 2) return std::nullopt;
    const Branch& b0 = branches_[0];
    const Branch& b1 = branches_[1];
    if (b0.slope != 1 || b1.slope != 1) return std::nullopt;
    Scalar a = b0.intercept;
    if (!(Scalar(0) < a && a < Scalar(1))) return std::nullopt;
    if (b1.intercept != a - Scalar(1)) return std::nullopt;
    if (b0.domain.hi != Scalar(1) - a) return std::nullopt;
    return a;
}

Scalar PAMap::apply(const Scalar& x) const {
    if (line_) return x + step_;
    for (const auto& b : branches_)
        if (b.domain.lo <= x && x < b.domain.hi) return b.image_of(x);
    throw error("PAMap: point outside [0,1)");
}

IntervalSet PAMap::image(const IntervalSet& s) const {
    if (line_) {
        std::vector<Interval> out;
        for (const auto& iv : s.intervals()) out.push_back({iv.lo + step_, iv.hi + step_});
        return IntervalSet(std::move(out));
    }
    std::vector<Interval> out;
    for (const auto& iv : s.intervals()) {
        for (const auto& b : branches_) {
            if (b.domain.hi <= iv.lo || b.domain.lo >= iv.hi) continue;
            Interval part{max(iv.lo, b.domain.lo), min(iv.hi, b.domain.hi)};
            out.push_back(Branch{part, b.slope, b.intercept}.image());
        }
    }
    return IntervalSet(std::move(out));
}

IntervalSet PAMap::preimage(const IntervalSet& s) const {
    return inverse().image(s);
}

PAMap PAMap::compose(const PAMap& inner) const {
    if (!space_.compatible(inner.space_)) throw error("PAMap: compose across spaces");
    if (line_ != inner.line_) throw error("PAMap: compose across space kinds");
    if (line_) return translation(step_ + inner.step_, space_);
    std::vector<Branch> out;
    for (const auto& bi : inner.branches_) {
        Interval j = bi.image();
        for (const auto& bo : branches_) {
            if (bo.domain.hi <= j.lo || bo.domain.lo >= j.hi) continue;
            Interval part{max(j.lo, bo.domain.lo), min(j.hi, bo.domain.hi)};
            // pull `part` back through bi
            Scalar x0 = (part.lo - bi.intercept) / Scalar(bi.slope);
            Scalar x1 = (part.hi - bi.intercept) / Scalar(bi.slope);
            Interval dom = bi.slope > 0 ? Interval{x0, x1} : Interval{x1, x0};
            out.push_back(Branch{dom, bo.slope * bi.slope,
                                 bi.intercept * Scalar(bo.slope) + bo.intercept});
        }
    }
    return from_branches(space_, std::move(out));
}

PAMap PAMap::inverse() const {
    if (line_) return translation(-step_, space_);
    std::vector<Branch> out;
    for (const auto& b : branches_) {
        Rat s = Rat(1) / b.slope;
        out.push_back(Branch{b.image(), s, -(b.intercept * Scalar(s))});
    }
    return from_branches(space_, std::move(out));
}

PAMap PAMap::conjugate_by(const PAMap& f) const {
    return f.compose(*this).compose(f.inverse());
}

PAMap PAMap::power(long n) const {
    if (n == 0) return identity(space_);
    if (line_) return translation(step_ * Scalar(Rat(n)), space_);
    if (auto a = as_rotation()) return rotation(*a * Scalar(Rat(n)), space_);
    if (n < 0) return inverse().power(-n);
    PAMap acc = *this;
    for (long i = 1; i < n; ++i) acc = acc.compose(*this);
    return acc;
}

bool PAMap::operator==(const PAMap& o) const {
    if (line_ != o.line_) return false;
    if (line_) return step_ == o.step_;
    if (branches_.size() != o.branches_.size()) return false;
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto& a = branches_[i];
        const auto& b = o.branches_[i];
        if (a.domain.lo != b.domain.lo || a.domain.hi != b.domain.hi || a.slope != b.slope ||
            a.intercept != b.intercept)
            return false;
    }
    return true;
}

std::string PAMap::text() const {
    std::ostringstream os;
    if (line_) {
        os << "trans(" << step_.text() << ")";
        return os.str();
    }
    if (auto a = as_rotation()) {
        os << "rot(" << a->text() << ")";
        return os.str();
    }
    os << "map{ ";
    bool first = true;
    for (const auto& b : branches_) {
        if (!first) os << ", ";
        first = false;
        os << "[" << b.domain.lo.text() << "," << b.domain.hi.text() << ") -> slope ";
        os << Scalar(b.slope).text() << " + " << b.intercept.text();
    }
    os << " }";
    return os.str();
}

// ---------------------------------------------------------------------------
// Aperiodicity

bool AperiodicityReport::aperiodic_up_to(int n) const {
    if (certified_all_n) return true;
    for (const auto& e : per_n)
        if (e.n <= n && e.verdict == PeriodicityVerdict::Periodic) return false;
    return static_cast<int>(per_n.size()) >= n;
}

AperiodicityReport aperiodicity_check(const PAMap& sigma, int n_max) {
    if (n_max < 1) throw error("aperiodicity_check: n_max must be >= 1");
    AperiodicityReport rep;

    if (sigma.is_line_translation()) {
        if (sigma.translation_step().is_zero()) {
            for (int n = 1; n <= n_max; ++n)
                rep.per_n.push_back({n, PeriodicityVerdict::Periodic, Scalar(1)});
            rep.certificate = "identity translation: every point is fixed";
        } else {
            for (int n = 1; n <= n_max; ++n)
                rep.per_n.push_back({n, PeriodicityVerdict::Aperiodic, Scalar(0)});
            rep.certified_all_n = true;
            rep.certificate = "nonzero translation: x + n*r != x";
        }
        return rep;
    }

    if (auto a = sigma.as_rotation()) {
        if (!a->is_rational()) {
            for (int n = 1; n <= n_max; ++n)
                rep.per_n.push_back({n, PeriodicityVerdict::Aperiodic, Scalar(0)});
            rep.certified_all_n = true;
            rep.certificate = "irrational rotation";
            return rep;
        }
        Int den = denominator(a->as_rational());
        for (int n = 1; n <= n_max; ++n) {
            bool periodic = Int(n) % den == 0;
            rep.per_n.push_back({n, periodic ? PeriodicityVerdict::Periodic
                                             : PeriodicityVerdict::Aperiodic,
                                 periodic ? Scalar(1) : Scalar(0)});
        }
        rep.certificate = "rational rotation: periodic exactly at multiples of the denominator";
        return rep;
    }

    PAMap pw = sigma;
    for (int n = 1; n <= n_max; ++n) {
        Scalar mass(0);
        for (const auto& b : pw.branches())
            if (b.slope == 1 && b.intercept.is_zero()) mass += b.domain.length();
        rep.per_n.push_back({n, mass.sign() > 0 ? PeriodicityVerdict::Periodic
                                                : PeriodicityVerdict::Aperiodic,
                             mass});
        if (n < n_max) pw = pw.compose(sigma);
    }
    rep.certificate = "symbolic branch analysis up to n_max";
    return rep;
}

// ---------------------------------------------------------------------------
// Radon-Nikodym derivative

StepFunction rn_derivative(const PAMap& sigma, const Measure& mu) {
    if (!sigma.space().compatible(mu.space()))
        throw error("rn_derivative: map and measure live on different spaces");
    std::vector<Scalar> density_cuts;
    for (const auto& p : mu.density_pieces().pieces()) {
        density_cuts.push_back(p.lo);
        density_cuts.push_back(p.hi);
    }
    PAMap inv = sigma.inverse();

    auto value_at_image = [&](const Scalar& y, const Rat& slope) {
        return mu.density_at(inv.apply(y)) / (mu.density_at(y) * Scalar(slope).abs());
    };

    std::vector<StepFunction::Piece> out;
    auto emit = [&](const Interval& img, const Rat& slope) {
        // cut the image so that both density factors are constant on each atom
        std::vector<Scalar> cuts{img.lo, img.hi};
        for (const auto& c : density_cuts) {
            if (img.lo < c && c < img.hi) cuts.push_back(c);
            Scalar fc = c + sigma.translation_step();
            if (img.lo < fc && fc < img.hi) cuts.push_back(fc);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](const Scalar& a, const Scalar& b) { return a == b; }),
                   cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            Scalar mid = (cuts[k] + cuts[k + 1]) * Scalar(Rat(1, 2));
            out.push_back({cuts[k], cuts[k + 1], value_at_image(mid, slope)});
        }
    };

    if (sigma.is_line_translation()) {
        // only the finitely many deviation windows differ from background 1
        IntervalSet windows;
        for (const auto& p : mu.density_pieces().pieces()) {
            windows = windows.unite(IntervalSet::single(p.lo, p.hi));
            windows = windows.unite(
                IntervalSet::single(p.lo + sigma.translation_step(), p.hi + sigma.translation_step()));
        }
        for (const auto& iv : windows.intervals()) emit(iv, Rat(1));
        // drop background-1 pieces: the LINE convention is explicit deviations only
        std::erase_if(out, [](const StepFunction::Piece& p) { return p.value == Scalar(1); });
        return StepFunction(std::move(out));
    }

    for (const auto& b : sigma.branches()) {
        Interval img = b.image();
        // image-side cuts also need the forward images of density breakpoints
        std::vector<Scalar> cuts{img.lo, img.hi};
        for (const auto& c : density_cuts)
            if (img.lo < c && c < img.hi) cuts.push_back(c);
        for (const auto& c : density_cuts)
            if (b.domain.lo <= c && c < b.domain.hi) {
                Scalar fc = b.image_of(c);
                if (img.lo < fc && fc < img.hi) cuts.push_back(fc);
            }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](const Scalar& a, const Scalar& b2) { return a == b2; }),
                   cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            Scalar mid = (cuts[k] + cuts[k + 1]) * Scalar(Rat(1, 2));
            out.push_back({cuts[k], cuts[k + 1], value_at_image(mid, b.slope)});
        }
    }
    return StepFunction(std::move(out));
}

}  // namespace lplat
