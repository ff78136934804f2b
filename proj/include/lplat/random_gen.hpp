#pragma once

#include "lplat/pamap.hpp"

#include <algorithm>
#include <random>

namespace lplat {

// Seeded generators used by the randomized tests and the CLI experiments.

/// Random step function on [0,1) with dyadic breakpoints at depth `depth`.
inline StepFunction random_step(std::mt19937_64& rng, int depth = 4, int vmax = 5) {
    int n = 1 << depth;
    std::uniform_int_distribution<int> val(-vmax, vmax);
    std::vector<StepFunction::Piece> ps;
    for (int i = 0; i < n; ++i) {
        int v = val(rng);
        if (v == 0) continue;
        ps.push_back({Scalar(Rat(i, n)), Scalar(Rat(i + 1, n)), Scalar(Rat(v, 1 + (i % 3)))});
    }
    return StepFunction(std::move(ps));
}

/// Random invertible piecewise-affine map of [0,1): two random partitions
/// with matching piece counts, paired by a random permutation.  Slopes are
/// the induced length ratios, occasionally negated.
inline PAMap random_pamap(std::mt19937_64& rng, int pieces = 3, bool allow_negative = true) {
    const long grid = 64;
    auto partition = [&]() {
        std::uniform_int_distribution<long> cut(1, grid - 1);
        std::vector<long> cuts{0, grid};
        while (static_cast<int>(cuts.size()) < pieces + 1) {
            long c = cut(rng);
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        return cuts;
    };
    std::vector<long> doms = partition();
    std::vector<long> imgs = partition();
    std::vector<int> perm(pieces);
    for (int i = 0; i < pieces; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<Branch> bs;
    std::uniform_int_distribution<int> coin(0, 3);
    for (int i = 0; i < pieces; ++i) {
        Rat dlo(doms[i], grid), dhi(doms[i + 1], grid);
        Rat jlo(imgs[perm[i]], grid), jhi(imgs[perm[i] + 1], grid);
        Rat s = (jhi - jlo) / (dhi - dlo);
        if (allow_negative && coin(rng) == 0) {
            s = -s;
            bs.push_back({{Scalar(dlo), Scalar(dhi)}, s, Scalar(jlo - s * dhi)});
        } else {
            bs.push_back({{Scalar(dlo), Scalar(dhi)}, s, Scalar(jlo - s * dlo)});
        }
    }
    return PAMap::from_branches(Space::unit(), std::move(bs));
}

}  // namespace lplat
