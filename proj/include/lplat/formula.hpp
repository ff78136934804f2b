#pragma once

#include "lplat/scalar.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace lplat {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Lattice term.  The official signature is {0, neg, avg, abs} plus the
/// automorphism; the remaining constructors are definable sugar and are
/// flagged as such.
struct Term {
    enum class Kind {
        Zero,
        Var,
        Neg,
        Avg,
        Abs,
        Add,
        Scale,
        Join,
        Meet,
        Pos,
        NegPart,
        Restrict,
        SigmaPow
    };

    Kind kind;
    std::string var;     // Var
    Rat scale;           // Scale
    long sigma_exp = 0;  // SigmaPow
    std::vector<TermPtr> args;

    bool is_sugar() const {
        switch (kind) {
            case Kind::Add:
            case Kind::Scale:
            case Kind::Join:
            case Kind::Meet:
            case Kind::Pos:
            case Kind::NegPart:
            case Kind::Restrict:
                return true;
            default:
                return false;
        }
    }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Real-valued formula over terms.
struct Formula {
    enum class Kind { Norm, Const, Plus, Minus, TimesConst, Max, Min, Monus, Rabs, Sup, Inf };

    Kind kind;
    Rat q;            // Const, TimesConst
    std::string var;  // Sup, Inf
    TermPtr term;     // Norm
    std::vector<FormulaPtr> args;

    bool quantifier_free() const;
    std::set<std::string> free_vars() const;
};

struct ParseError : error {
    int line;
    int column;
    ParseError(const std::string& msg, int l, int c);
};

FormulaPtr parse_formula(const std::string& text);
TermPtr parse_term(const std::string& text);

std::string pretty(const Formula& f);
std::string pretty(const Term& t);

bool same_formula(const Formula& a, const Formula& b);
bool same_term(const Term& a, const Term& b);

}  // namespace lplat
