#pragma once

#include "lplat/formula.hpp"
#include "lplat/pamap.hpp"

namespace lplat {

/// Parsed system description: measure, map, and norm exponent, plus the
/// declared irrational (when any) for reuse in CLI arguments.
struct SystemDesc {
    Measure mu;
    PAMap map;
    PExponent p;
    AlphaRef alpha;
};

/// Scalar literal: `a/b`, `a/b + c/d*alpha`, `alpha`, `2*alpha - 1`...
Scalar parse_scalar(const std::string& text, const AlphaRef& alpha);
/// `step{ [0,1/2): 1, [1/2,3/4): -2 }`; inverse of StepFunction::text().
StepFunction parse_step(const std::string& text, const AlphaRef& alpha);
/// `rot(s)`, `trans(s)`, or `map{ [a,b) -> slope s + c, ... }`; inverse of
/// PAMap::text().
PAMap parse_map(const std::string& text, const Space& space);
/// `surd(p,q,d,r)` for (p + q*sqrt(d))/r, or `cf(a0; a1, a2, ...)`.
AlphaRef parse_alpha(const std::string& text);

/// Key = value lines: optional `alpha`, `space` (unit | line), optional
/// `density` (explicit pieces; background density 1 elsewhere), `map`,
/// optional `p`.
/// Comments start with '#'.  Errors carry line and column.
SystemDesc parse_system(const std::string& text);
SystemDesc load_system(const std::string& path);

}  // namespace lplat
