#pragma once

#include "lplat/formula.hpp"
#include "lplat/induced.hpp"

#include <map>
#include <optional>

namespace lplat {

using Valuation = std::map<std::string, StepFunction>;
using Value = std::variant<Scalar, Enclosure>;

StepFunction eval_term(const Term& t, const InducedAut& A, const Valuation& val);

/// Quantifier-free evaluation; exact for p = 1, outward-rounded enclosures
/// otherwise.
Value eval_qf(const Formula& f, const InducedAut& A, const Valuation& val);

/// Finite candidate family for quantifier search: scaled indicators of
/// dyadic intervals at refinement level `depth`, each coefficient drawn
/// from `grid`, filtered by the norm cap, plus zero and any injected
/// witnesses.  (The full product family over all atoms is exponential and
/// is deliberately not enumerated.)
struct SearchStrategy {
    int depth = 3;
    std::vector<Rat> grid = {Rat(1), Rat(1, 2), Rat(2)};
    Rat norm_cap = 4;
    std::vector<StepFunction> injected;

    std::vector<StepFunction> candidates(const InducedAut& A) const;
};

struct BoundedValue {
    enum class Kind { Exact, LowerBound, UpperBound };
    Kind kind;
    Value value;
    std::string witness;  // assignment text for the outermost quantifier
};

/// Search-bounded quantifier semantics: SUP yields a certified lower bound
/// (max over candidates, with witness), INF a certified upper bound.  With
/// mixed nesting the tag follows the outermost quantifier.
BoundedValue eval_quantified(const Formula& f, const InducedAut& A,
                             const SearchStrategy& strategy);

struct AxiomReport {
    struct Entry {
        std::string name;
        Scalar value;
        bool pass;
        std::string note;
    };
    std::vector<Entry> entries;
    bool all_pass = true;
};

/// Evaluates the automorphism axiom matrices (must be exactly 0) on gridded
/// instances, and the Rokhlin axioms for each n via tower witnesses.
AxiomReport axiom_suite(const InducedAut& A, int depth, const std::vector<int>& n_list,
                        const Rat& eps = Rat(1, 20));

/// Quantifier-free Rokhlin matrix R_n as a formula with free variables x, y.
FormulaPtr rokhlin_axiom_matrix(int n);

}  // namespace lplat
