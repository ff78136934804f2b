#include "lplat/rokhlin.hpp"

#include <algorithm>

namespace lplat {

namespace {

Int rat_ceil(const Rat& x) {
    Int q = numerator(x) / denominator(x);
    if (Rat(q) < x) ++q;
    return q;
}

bool images_disjoint(const PAMap& sigma, const IntervalSet& B, int N) {
    IntervalSet cur = B;
    for (int k = 1; k <= N; ++k) {
        cur = sigma.image(cur);
        if (!cur.intersect(B).total_length().is_zero()) return false;
    }
    return true;
}

void require_aperiodic(const PAMap& sigma, int N) {
    if (!aperiodicity_check(sigma, N).aperiodic_up_to(N))
        throw error("rokhlin: map has a positive-measure periodic set within the requested depth");
}

}  // namespace

Scalar ReturnPartition::resolved_mass() const {
    Scalar total(0);
    for (const auto& p : pieces) total += p.part.length();
    return total;
}

IntervalSet disjoint_base(const PAMap& sigma, const IntervalSet& A, int N, const Rat& delta) {
    require_aperiodic(sigma, N);
    if (A.total_length().sign() <= 0) throw error("disjoint_base: empty input set");
    if (delta <= 0) throw error("disjoint_base: width floor must be positive");

    for (const auto& iv : A.intervals()) {
        Scalar len = iv.length();
        // a few anchor points guard against an unlucky periodic anchor
        for (const Rat& off : {Rat(0), Rat(1, 3), Rat(2, 3)}) {
            Scalar lo = iv.lo + len * Scalar(off);
            Scalar w = len - len * Scalar(off);
            while (Scalar(Rat(delta)) <= w) {
                IntervalSet cand = IntervalSet::single(lo, lo + w);
                if (images_disjoint(sigma, cand, N)) return cand;
                w = w * Scalar(Rat(1, 2));
            }
        }
    }
    throw error("disjoint_base: no base found above the width floor");
}

std::pair<IntervalSet, Scalar> covering_base(const PAMap& sigma, const IntervalSet& A, int N,
                                             const Rat& delta) {
    require_aperiodic(sigma, N);
    IntervalSet B;
    const int cap = 200;
    for (int it = 0; it < cap; ++it) {
        // uncovered part of A after the images sigma^k(B), |k| <= N
        IntervalSet covered = B;
        IntervalSet fwd = B, bwd = B;
        for (int k = 1; k <= N; ++k) {
            fwd = sigma.image(fwd);
            bwd = sigma.preimage(bwd);
            covered = covered.unite(fwd).unite(bwd);
        }
        IntervalSet uncovered = A.subtract(covered);
        Scalar res = uncovered.total_length();
        if ((it > 0 || A.total_length().is_zero()) && res <= Scalar(Rat(delta)))
            return {B, res};
        if (res.is_zero()) return {B, res};
        IntervalSet C = disjoint_base(sigma, uncovered, N, delta / 1024);
        B = B.unite(C);
        if (!images_disjoint(sigma, B, N))
            throw error("covering_base: union lost disjointness (unexpected)");
    }
    throw error("covering_base: iteration cap exceeded with residual above tolerance");
}

ReturnPartition first_return(const PAMap& sigma, const IntervalSet& B, int K_max) {
    // Each strip tracks an origin subinterval of B together with the affine
    // map origin -> current image accumulated so far.
    struct Strip {
        Interval origin;
        Rat slope;
        Scalar icpt;
    };
    auto forward = [](const Strip& s, const Interval& o) {
        Scalar a = o.lo * Scalar(s.slope) + s.icpt;
        Scalar b = o.hi * Scalar(s.slope) + s.icpt;
        return s.slope > 0 ? Interval{a, b} : Interval{b, a};
    };
    auto backward = [](const Strip& s, const Interval& img) {
        Scalar a = (img.lo - s.icpt) / Scalar(s.slope);
        Scalar b = (img.hi - s.icpt) / Scalar(s.slope);
        return s.slope > 0 ? Interval{a, b} : Interval{b, a};
    };

    ReturnPartition rp;
    rp.base = B;
    std::vector<Strip> strips;
    for (const auto& iv : B.intervals()) strips.push_back({iv, Rat(1), Scalar(0)});

    const bool line = sigma.is_line_translation();
    for (int k = 1; k <= K_max && !strips.empty(); ++k) {
        std::vector<Strip> next;
        for (const auto& s : strips) {
            Interval cur = forward(s, s.origin);
            // advance one step, splitting at branch boundaries
            std::vector<Strip> advanced;
            if (line) {
                advanced.push_back({s.origin, s.slope, s.icpt + sigma.translation_step()});
            } else {
                for (const auto& b : sigma.branches()) {
                    if (b.domain.hi <= cur.lo || b.domain.lo >= cur.hi) continue;
                    Interval part{max(cur.lo, b.domain.lo), min(cur.hi, b.domain.hi)};
                    Strip sub{backward(s, part), b.slope * s.slope,
                              s.icpt * Scalar(b.slope) + b.intercept};
                    advanced.push_back(sub);
                }
            }
            for (const auto& a : advanced) {
                Interval img = forward(a, a.origin);
                IntervalSet inside = IntervalSet::single(img.lo, img.hi).intersect(B);
                for (const auto& hit : inside.intervals())
                    rp.pieces.push_back({backward(a, hit), k});
                IntervalSet outside = IntervalSet::single(img.lo, img.hi).subtract(inside);
                for (const auto& miss : outside.intervals())
                    next.push_back({backward(a, miss), a.slope, a.icpt});
            }
        }
        strips = std::move(next);
    }
    std::vector<Interval> leftover;
    for (const auto& s : strips) leftover.push_back(s.origin);
    rp.residual = IntervalSet(std::move(leftover));
    std::sort(rp.pieces.begin(), rp.pieces.end(),
              [](const ReturnPartition::Piece& a, const ReturnPartition::Piece& b) {
                  return a.part.lo < b.part.lo;
              });
    return rp;
}

namespace {

// Exact tower for a wandering translation of the line: cut the support of f
// into blocks of length |r| and send block j to the tower level j*d mod n.
TowerResult translation_tower(const InducedAut& A, const StepFunction& f, int n) {
    const Scalar r = A.map().translation_step();
    Scalar ra = r.abs();
    long d = r.sign();  // block index moves by d each application

    IntervalSet supp = f.support();
    StepFunction g;
    if (!supp.intervals().empty()) {
        Scalar lo = supp.intervals().front().lo;
        Scalar hi = supp.intervals().back().hi;
        // block j = [lo + j|r|, lo + (j+1)|r|)
        for (long j = 0; Scalar(Rat(j)) * ra < hi - lo; ++j) {
            Interval block{lo + Scalar(Rat(j)) * ra, lo + Scalar(Rat(j + 1)) * ra};
            StepFunction fj = f.restrict_to(IntervalSet::single(block.lo, block.hi));
            if (fj.is_zero()) continue;
            long c = ((j * d) % n + n) % n;
            g = g + A.apply_power(-c, fj);
        }
    }
    TowerResult tr;
    tr.g = g;
    tr.h = StepFunction::zero();
    tr.n = n;
    return tr;
}

// Base of the exact rotation path: [0, w) with w the least distance of
// k*a to the integers over 1 <= k <= N; its first N images are disjoint
// by minimality and its return tiling covers the circle with no residual.
IntervalSet rotation_base(const Scalar& a, int N) {
    Scalar acc = a;
    Scalar best = acc.dist_to_int();
    for (int k = 2; k <= N; ++k) {
        acc += a;
        Scalar d = acc.dist_to_int();
        if (d < best) best = d;
    }
    return IntervalSet::single(Scalar(0), best);
}

void finalize_certificates(const InducedAut& A, const StepFunction& f, TowerResult& tr,
                           const Rat& eps) {
    const Measure& mu = A.measure();
    const int n = tr.n;
    std::vector<StepFunction> sg;
    sg.push_back(tr.g);
    for (int k = 1; k < n; ++k) sg.push_back(A.apply(sg.back()));
    tr.overlap = Scalar(0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Scalar o = norm1(sg[i].meet(sg[j]), mu);
            if (tr.overlap < o) tr.overlap = o;
        }
    StepFunction total = tr.h;
    for (const auto& s : sg) total = total + s;
    tr.deficiency = norm1((total - f).neg_part(), mu);
    tr.g_norm = norm1(tr.g, mu);
    tr.h_norm = norm1(tr.h, mu);

    if (!tr.overlap.is_zero() || !tr.deficiency.is_zero() || norm1(f, mu) < tr.g_norm ||
        Scalar(Rat(eps)) < tr.h_norm)
        throw error("functional_rokhlin: construction finished but a certificate failed");
}

}  // namespace

TowerResult functional_rokhlin(const InducedAut& A, const StepFunction& f, int n,
                               const Rat& eps) {
    if (n < 1) throw error("functional_rokhlin: n must be >= 1");
    if (eps <= 0) throw error("functional_rokhlin: eps must be positive");
    if (!f.neg_part().is_zero()) throw error("functional_rokhlin: f must be positive");
    if (!A.exponent().exact())
        throw error("functional_rokhlin: only the p = 1 reduction is implemented");
    const PAMap& sigma = A.map();
    const Measure& mu = A.measure();

    Scalar fnorm = norm1(f, mu);
    TowerResult tr;
    tr.n = n;
    if (fnorm.is_zero() || n == 1) {
        tr.g = f;
        tr.h = StepFunction::zero();
        finalize_certificates(A, f, tr, eps);
        return tr;
    }

    if (sigma.is_line_translation()) {
        if (sigma.translation_step().is_zero())
            throw error("functional_rokhlin: identity translation is not aperiodic");
        tr = translation_tower(A, f, n);
        finalize_certificates(A, f, tr, eps);
        return tr;
    }

    // target depth: return times above N make each column's skipped block
    // weigh at most ||f|| * eps / ||f|| overall
    Rat fn = fnorm.is_rational() ? fnorm.as_rational() : Rat(fnorm.enclose(Rat(1, 1024)).hi);
    auto rot = sigma.as_rotation();
    bool exact_cover = rot.has_value() && !rot->is_rational();
    Int Ni = rat_ceil(Rat(n) * fn / eps * (exact_cover ? 1 : 2)) + n;
    int N = static_cast<int>(Ni);
    require_aperiodic(sigma, N);

    IntervalSet B;
    if (exact_cover)
        B = rotation_base(*rot, N);
    else
        B = covering_base(sigma, IntervalSet::single(Scalar(0), Scalar(1)), N,
                          eps / (2 * (1 + rat_ceil(Rat(f.max_abs_value().enclose(Rat(1)).hi)))))
                .first;

    int K = 2 * N + 1;
    ReturnPartition rp = first_return(sigma, B, K);
    for (int attempt = 0; !rp.residual.total_length().is_zero() && exact_cover && attempt < 8;
         ++attempt) {
        K *= 2;
        rp = first_return(sigma, B, K);
    }

    std::vector<StepFunction> gm(n);
    StepFunction h;
    IntervalSet tower_support;
    for (const auto& piece : rp.pieces) {
        int ell = piece.k;
        int q = ell / n, p = ell % n;
        // level sets sigma^k(part) and the restrictions of f to them
        std::vector<IntervalSet> levels(ell);
        std::vector<StepFunction> fk(ell);
        IntervalSet cur = IntervalSet::single(piece.part.lo, piece.part.hi);
        for (int k = 0; k < ell; ++k) {
            levels[k] = cur;
            tower_support = tower_support.unite(cur);
            fk[k] = f.restrict_to(cur);
            cur = sigma.image(cur);
        }
        // pick the split index with the lightest skipped block
        int q0 = 0;
        Scalar best(-1);
        for (int cand = 0; cand <= q; ++cand) {
            Scalar w(0);
            for (int m = 0; m < p; ++m) w += norm1(fk[cand * n + m], mu);
            if (best.sign() < 0 || w < best) {
                best = w;
                q0 = cand;
            }
        }
        for (int m = 0; m < p; ++m) h = h + fk[q0 * n + m];
        for (int m = 0; m < n; ++m) {
            for (int k = 0; k < q0; ++k) gm[m] = gm[m] + fk[k * n + m];
            for (int k = q0; k < q; ++k) gm[m] = gm[m] + fk[k * n + p + m];
        }
    }
    // mass never resolved into the tower goes to h as well
    h = h + (f - f.restrict_to(tower_support));

    StepFunction g;
    for (int m = 0; m < n; ++m) g = g + A.apply_power(-m, gm[m]);
    tr.g = g;
    tr.h = h;
    finalize_certificates(A, f, tr, eps);
    return tr;
}

IntervalSet set_tower(const PAMap& sigma, int n, const Rat& eps) {
    if (sigma.space().kind != SpaceKind::Unit)
        throw error("set_tower: UNIT only (use functional_rokhlin with a window on LINE)");
    InducedAut A(sigma, Measure(Space(sigma.space())));
    TowerResult tr =
        functional_rokhlin(A, StepFunction::indicator(Scalar(0), Scalar(1)), n, eps);
    return tr.g.support();
}

Scalar rn_value(const InducedAut& A, const StepFunction& x, const StepFunction& y, int n) {
    const Measure& mu = A.measure();
    StepFunction ay = y.abs(), ax = x.abs();
    Scalar best(0);
    StepFunction cur = ay;
    StepFunction total = ay;
    for (int i = 1; i < n; ++i) {
        cur = A.apply(cur);
        Scalar o = norm1(cur.meet(ay), mu);
        if (best < o) best = o;
        total = total + cur;
    }
    Scalar defic = norm1((total - ax).neg_part(), mu);
    if (best < defic) best = defic;
    Scalar excess = norm1(ay, mu) - norm1(ax, mu);
    if (best < excess) best = excess;
    return best;
}

}  // namespace lplat
