#include "lplat/induced.hpp"

#include <algorithm>

namespace lplat {

namespace {

// rn pieces on LINE record only deviations from 1; value 0 is impossible
// for a non-singular map, so an uncovered point means derivative 1.
Scalar rn_at(const StepFunction& rn, const Scalar& y, bool line) {
    Scalar v = rn.at(y);
    if (line && v.is_zero()) return Scalar(1);
    return v;
}

}  // namespace

InducedAut::InducedAut(PAMap map, Measure mu, PExponent p)
    : map_(std::move(map)), mu_(std::move(mu)), p_(std::move(p)) {
    if (!map_.space().compatible(mu_.space()))
        throw error("InducedAut: map and measure live on different spaces");
    if (p_.p < 1) throw error("InducedAut: exponent must be >= 1");
    rn_ = rn_derivative(map_, mu_);
}

std::variant<StepFunction, EnclosedStep> InducedAut::apply_general(const StepFunction& u,
                                                                   const Rat& width) const {
    const bool line = map_.is_line_translation();
    PAMap inv = map_.inverse();

    // pull the derivative breakpoints back into domain coordinates
    std::vector<Scalar> extra_cuts;
    for (const auto& rp : rn_.pieces())
        for (const Scalar& c : {rp.lo, rp.hi}) {
            if (!line && (c <= Scalar(0) || Scalar(1) <= c)) continue;
            extra_cuts.push_back(inv.apply(c));
        }
    if (!line)
        for (const auto& b : map_.branches()) {
            extra_cuts.push_back(b.domain.lo);
            extra_cuts.push_back(b.domain.hi);
        }

    struct Atom {
        Interval img;
        Scalar uval;
        Scalar factor;  // derivative value, constant on img
    };
    std::vector<Atom> atoms;
    for (const auto& piece : u.pieces()) {
        std::vector<Scalar> cuts{piece.lo, piece.hi};
        for (const auto& c : extra_cuts)
            if (piece.lo < c && c < piece.hi) cuts.push_back(c);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](const Scalar& a, const Scalar& b) { return a == b; }),
                   cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            Interval dom{cuts[k], cuts[k + 1]};
            IntervalSet img = map_.image(IntervalSet::single(dom.lo, dom.hi));
            if (img.intervals().size() != 1)
                throw error("InducedAut: atom not contained in one branch");
            Interval j = img.intervals()[0];
            Scalar mid = (j.lo + j.hi) * Scalar(Rat(1, 2));
            atoms.push_back({j, piece.value, rn_at(rn_, mid, line)});
        }
    }

    if (p_.exact()) {
        std::vector<StepFunction::Piece> out;
        for (const auto& a : atoms) out.push_back({a.img.lo, a.img.hi, a.uval * a.factor});
        return StepFunction(std::move(out));
    }

    // factor^(1/p) with p = a/b means the b-th power followed by an a-th root
    Int pa = numerator(p_.p), pb = denominator(p_.p);
    bool all_exact = true;
    std::vector<StepFunction::Piece> exact_out;
    for (const auto& a : atoms) {
        if (!a.factor.is_rational()) {
            all_exact = false;
            break;
        }
        Rat powed = rat_pow(a.factor.as_rational(), static_cast<long>(pb));
        auto root = exact_nth_root(powed, static_cast<unsigned>(pa));
        if (!root) {
            all_exact = false;
            break;
        }
        exact_out.push_back({a.img.lo, a.img.hi, a.uval * Scalar(*root)});
    }
    if (all_exact) return StepFunction(std::move(exact_out));

    EnclosedStep es;
    for (const auto& a : atoms) {
        Enclosure f = a.factor.enclose(width);
        Enclosure powed(Rat(1), Rat(1));
        for (Int i = 0; i < pb; ++i) powed = powed * f;
        Enclosure rooted = p_root_enclose(powed, Rat(pa), width);
        es.pieces.push_back({a.img.lo, a.img.hi, a.uval.enclose(width) * rooted});
    }
    return es;
}

StepFunction InducedAut::apply(const StepFunction& u) const {
    auto r = apply_general(u);
    if (auto* s = std::get_if<StepFunction>(&r)) return std::move(*s);
    throw error("InducedAut: p-th root has no exact representation (use apply_general)");
}

InducedAut InducedAut::inverse() const { return InducedAut(map_.inverse(), mu_, p_); }

StepFunction InducedAut::apply_inverse(const StepFunction& u) const {
    return inverse().apply(u);
}

StepFunction InducedAut::apply_power(long k, const StepFunction& u) const {
    if (k == 0) return u;
    // compose the transformation first so rotations stay in closed form
    InducedAut pw(map_.power(k), mu_, p_);
    return pw.apply(u);
}

InducedAut InducedAut::compose(const InducedAut& other) const {
    if (!(p_.p == other.p_.p)) throw error("InducedAut: mismatched exponents");
    return InducedAut(map_.compose(other.map_), mu_, p_);
}

Enclosure InducedAut::support_inf_point(const Scalar& r, const Rat& width) const {
    if (map_.space().kind != SpaceKind::Unit)
        throw error("InducedAut: support reconstruction is a UNIT operation");
    if (!(Scalar(0) <= r && r < Scalar(1))) throw error("InducedAut: point outside [0,1)");
    InducedAut flat(map_, mu_, PExponent::one());
    auto hit = [&](const Rat& q) {
        StepFunction img = flat.apply(StepFunction::indicator(Scalar(0), Scalar(q)));
        return img.support().contains(r);
    };
    Rat lo(0), hi(1);
    while (hi - lo > width) {
        Rat midq = (lo + hi) / 2;
        if (hit(midq))
            hi = midq;
        else
            lo = midq;
    }
    return Enclosure(lo, hi);
}

PAMap InducedAut::reconstruct() const {
    if (map_.space().kind != SpaceKind::Unit)
        throw error("InducedAut: support reconstruction is a UNIT operation");
    PAMap candidate = map_.inverse();
    const Rat w(1, 1 << 20);
    for (const auto& b : candidate.branches()) {
        Scalar m = (b.domain.lo + b.domain.hi) * Scalar(Rat(1, 2));
        Enclosure box = support_inf_point(m, w);
        Scalar expect = candidate.apply(m);
        if (expect < Scalar(box.lo) || Scalar(box.hi) < expect)
            throw error("InducedAut: reconstructed map disagrees with support data");
    }
    return candidate;
}

}  // namespace lplat
