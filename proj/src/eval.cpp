#include "lplat/eval.hpp"
#include "lplat/rokhlin.hpp"

#include <algorithm>

namespace lplat {

StepFunction eval_term(const Term& t, const InducedAut& A, const Valuation& val) {
    auto sub = [&](std::size_t i) { return eval_term(*t.args[i], A, val); };
    switch (t.kind) {
        case Term::Kind::Zero:
            return StepFunction::zero();
        case Term::Kind::Var: {
            auto it = val.find(t.var);
            if (it == val.end()) throw error("eval: unassigned variable " + t.var);
            return it->second;
        }
        case Term::Kind::Neg:
            return -sub(0);
        case Term::Kind::Avg:
            return sub(0).avg(sub(1));
        case Term::Kind::Abs:
            return sub(0).abs();
        case Term::Kind::Add:
            return sub(0) + sub(1);
        case Term::Kind::Scale:
            return sub(0).scale(t.scale);
        case Term::Kind::Join:
            return sub(0).join(sub(1));
        case Term::Kind::Meet:
            return sub(0).meet(sub(1));
        case Term::Kind::Pos:
            return sub(0).pos();
        case Term::Kind::NegPart:
            return sub(0).neg_part();
        case Term::Kind::Restrict:
            return sub(0).restrict_to(sub(1));
        case Term::Kind::SigmaPow:
            return A.apply_power(t.sigma_exp, sub(0));
    }
    throw error("eval: bad term");
}

namespace {

Enclosure widen(const Value& v) {
    if (const auto* e = std::get_if<Enclosure>(&v)) return *e;
    const Scalar& s = std::get<Scalar>(v);
    if (s.is_rational()) return Enclosure(s.as_rational());
    return s.enclose(Rat(1, Int(1) << 40));
}

bool both_exact(const Value& a, const Value& b) {
    return std::holds_alternative<Scalar>(a) && std::holds_alternative<Scalar>(b);
}

Value vmax(const Value& a, const Value& b) {
    if (both_exact(a, b)) return max(std::get<Scalar>(a), std::get<Scalar>(b));
    return max(widen(a), widen(b));
}

Value vmin(const Value& a, const Value& b) {
    if (both_exact(a, b)) return min(std::get<Scalar>(a), std::get<Scalar>(b));
    return min(widen(a), widen(b));
}

Value vadd(const Value& a, const Value& b) {
    if (both_exact(a, b)) return std::get<Scalar>(a) + std::get<Scalar>(b);
    return widen(a) + widen(b);
}

Value vsub(const Value& a, const Value& b) {
    if (both_exact(a, b)) return std::get<Scalar>(a) - std::get<Scalar>(b);
    return widen(a) - widen(b);
}

Value vabs(const Value& v) {
    if (const auto* s = std::get_if<Scalar>(&v)) return s->abs();
    Enclosure e = std::get<Enclosure>(v);
    if (e.lo >= 0) return e;
    if (e.hi <= 0) return -e;
    return Enclosure(Rat(0), std::max(Rat(-e.lo), e.hi));
}

Value vscale(const Rat& q, const Value& v) {
    if (const auto* s = std::get_if<Scalar>(&v)) return *s * Scalar(q);
    return std::get<Enclosure>(v) * q;
}

Value vmonus(const Value& a, const Value& b) { return vmax(vsub(a, b), Value(Scalar(0))); }

// upper comparison used to pick the best candidate deterministically
bool value_improves(const Value& cand, const Value& best, bool maximize) {
    Enclosure c = widen(cand), b = widen(best);
    Rat cm = (c.lo + c.hi) / 2, bm = (b.lo + b.hi) / 2;
    return maximize ? cm > bm : cm < bm;
}

}  // namespace

Value eval_qf(const Formula& f, const InducedAut& A, const Valuation& val) {
    switch (f.kind) {
        case Formula::Kind::Norm: {
            StepFunction u = eval_term(*f.term, A, val);
            auto r = norm_p(u, A.measure(), A.exponent());
            if (auto* s = std::get_if<Scalar>(&r)) return *s;
            return std::get<Enclosure>(r);
        }
        case Formula::Kind::Const:
            return Scalar(f.q);
        case Formula::Kind::Plus:
            return vadd(eval_qf(*f.args[0], A, val), eval_qf(*f.args[1], A, val));
        case Formula::Kind::Minus:
            return vsub(eval_qf(*f.args[0], A, val), eval_qf(*f.args[1], A, val));
        case Formula::Kind::TimesConst:
            return vscale(f.q, eval_qf(*f.args[0], A, val));
        case Formula::Kind::Max:
        case Formula::Kind::Min: {
            Value acc = eval_qf(*f.args[0], A, val);
            for (std::size_t i = 1; i < f.args.size(); ++i) {
                Value next = eval_qf(*f.args[i], A, val);
                acc = f.kind == Formula::Kind::Max ? vmax(acc, next) : vmin(acc, next);
            }
            return acc;
        }
        case Formula::Kind::Monus:
            return vmonus(eval_qf(*f.args[0], A, val), eval_qf(*f.args[1], A, val));
        case Formula::Kind::Rabs:
            return vabs(eval_qf(*f.args[0], A, val));
        case Formula::Kind::Sup:
        case Formula::Kind::Inf:
            throw error("eval_qf: formula has quantifiers");
    }
    throw error("eval_qf: bad formula");
}

std::vector<StepFunction> SearchStrategy::candidates(const InducedAut& A) const {
    std::vector<StepFunction> out;
    out.push_back(StepFunction::zero());
    for (const auto& w : injected) out.push_back(w);
    long atoms = 1L << depth;
    for (long j = 0; j < atoms; ++j)
        for (long k = j + 1; k <= atoms; ++k)
            for (const Rat& c : grid) {
                if (c == 0) continue;
                StepFunction cand = StepFunction::indicator(Scalar(Rat(j, atoms)),
                                                            Scalar(Rat(k, atoms)))
                                        .scale(c);
                if (norm1(cand, A.measure()) <= Scalar(norm_cap)) out.push_back(cand);
            }
    return out;
}

namespace {

BoundedValue eval_search(const Formula& f, const InducedAut& A,
                         const std::vector<StepFunction>& cands, Valuation& val) {
    if (f.quantifier_free()) return {BoundedValue::Kind::Exact, eval_qf(f, A, val), ""};

    if (f.kind == Formula::Kind::Sup || f.kind == Formula::Kind::Inf) {
        if (cands.empty()) throw error("eval_quantified: empty candidate set");
        bool maximize = f.kind == Formula::Kind::Sup;
        std::optional<Value> best;
        std::string witness;
        for (const auto& cand : cands) {
            val[f.var] = cand;
            BoundedValue sub = eval_search(*f.args[0], A, cands, val);
            if (!best || value_improves(sub.value, *best, maximize)) {
                best = sub.value;
                witness = cand.text();
            }
        }
        val.erase(f.var);
        return {maximize ? BoundedValue::Kind::LowerBound : BoundedValue::Kind::UpperBound,
                *best, witness};
    }

    // connective above at least one quantifier: combine children, tag with
    // the first one-sided child
    std::vector<BoundedValue> sub;
    for (const auto& a : f.args) sub.push_back(eval_search(*a, A, cands, val));
    BoundedValue::Kind kind = BoundedValue::Kind::Exact;
    std::string witness;
    for (const auto& s : sub)
        if (s.kind != BoundedValue::Kind::Exact) {
            kind = s.kind;
            witness = s.witness;
            break;
        }
    Value v = sub[0].value;
    switch (f.kind) {
        case Formula::Kind::Plus:
            v = vadd(sub[0].value, sub[1].value);
            break;
        case Formula::Kind::Minus:
            v = vsub(sub[0].value, sub[1].value);
            break;
        case Formula::Kind::TimesConst:
            v = vscale(f.q, sub[0].value);
            break;
        case Formula::Kind::Max:
            for (std::size_t i = 1; i < sub.size(); ++i) v = vmax(v, sub[i].value);
            break;
        case Formula::Kind::Min:
            for (std::size_t i = 1; i < sub.size(); ++i) v = vmin(v, sub[i].value);
            break;
        case Formula::Kind::Monus:
            v = vmonus(sub[0].value, sub[1].value);
            break;
        case Formula::Kind::Rabs:
            v = vabs(sub[0].value);
            break;
        default:
            throw error("eval_quantified: bad connective");
    }
    return {kind, v, witness};
}

TermPtr mkt(Term t) { return std::make_shared<Term>(std::move(t)); }
FormulaPtr mkf(Formula f) { return std::make_shared<Formula>(std::move(f)); }

TermPtr tvar(const std::string& v) { return mkt({Term::Kind::Var, v, Rat(), 0, {}}); }
TermPtr tabs(TermPtr a) { return mkt({Term::Kind::Abs, "", Rat(), 0, {std::move(a)}}); }
TermPtr tneg(TermPtr a) { return mkt({Term::Kind::Neg, "", Rat(), 0, {std::move(a)}}); }
TermPtr tadd(TermPtr a, TermPtr b) {
    return mkt({Term::Kind::Add, "", Rat(), 0, {std::move(a), std::move(b)}});
}
TermPtr tmeet(TermPtr a, TermPtr b) {
    return mkt({Term::Kind::Meet, "", Rat(), 0, {std::move(a), std::move(b)}});
}
TermPtr tnegpart(TermPtr a) {
    return mkt({Term::Kind::NegPart, "", Rat(), 0, {std::move(a)}});
}
TermPtr tsig(long k, TermPtr a) {
    return mkt({Term::Kind::SigmaPow, "", Rat(), k, {std::move(a)}});
}
FormulaPtr fnorm(TermPtr t) {
    return mkf({Formula::Kind::Norm, Rat(), "", std::move(t), {}});
}

}  // namespace

BoundedValue eval_quantified(const Formula& f, const InducedAut& A,
                             const SearchStrategy& strategy) {
    Valuation val;
    std::vector<StepFunction> cands = strategy.candidates(A);
    return eval_search(f, A, cands, val);
}

FormulaPtr rokhlin_axiom_matrix(int n) {
    if (n < 1) throw error("rokhlin_axiom_matrix: n must be >= 1");
    std::vector<FormulaPtr> parts;
    for (int i = 1; i < n; ++i)
        parts.push_back(fnorm(tmeet(tsig(i, tabs(tvar("y"))), tabs(tvar("y")))));
    TermPtr sum = tabs(tvar("y"));
    for (int k = 1; k < n; ++k) sum = tadd(std::move(sum), tsig(k, tabs(tvar("y"))));
    parts.push_back(fnorm(tnegpart(tadd(std::move(sum), tneg(tabs(tvar("x")))))));
    parts.push_back(mkf({Formula::Kind::Monus, Rat(), "", nullptr,
                         {fnorm(tvar("y")), fnorm(tvar("x"))}}));
    if (parts.size() == 1) return parts[0];
    return mkf({Formula::Kind::Max, Rat(), "", nullptr, std::move(parts)});
}

AxiomReport axiom_suite(const InducedAut& A, int depth, const std::vector<int>& n_list,
                        const Rat& eps) {
    AxiomReport rep;
    auto scalar_of = [](const Value& v) {
        if (const auto* s = std::get_if<Scalar>(&v)) return *s;
        return Scalar(std::get<Enclosure>(v).hi);
    };
    auto add_entry = [&](std::string name, Scalar value, bool pass, std::string note = "") {
        rep.all_pass = rep.all_pass && pass;
        rep.entries.push_back({std::move(name), std::move(value), pass, std::move(note)});
    };

    SearchStrategy st;
    st.depth = depth;
    st.grid = {Rat(1), Rat(-1, 2), Rat(3, 2)};
    std::vector<StepFunction> cands = st.candidates(A);
    if (cands.size() > 12) cands.resize(12);  // pair instances grow quadratically

    // isometry: | ||s(x)|| - ||x|| | on every instance
    FormulaPtr iso = parse_formula("rabs(norm(s(x)) - norm(x))");
    Scalar worst(0);
    for (const auto& u : cands) {
        Valuation v{{"x", u}};
        Scalar r = scalar_of(eval_qf(*iso, A, v));
        if (worst < r) worst = r;
    }
    add_entry("isometry", worst, worst.is_zero());

    // morphicity of the official connectives
    const std::vector<std::pair<std::string, std::string>> morph = {
        {"morphicity:neg", "norm(add(s(neg(x)), neg(neg(s(x)))))"},
        {"morphicity:abs", "norm(add(s(abs(x)), neg(abs(s(x)))))"},
        {"morphicity:avg", "norm(add(s(avg(x, y)), neg(avg(s(x), s(y)))))"},
    };
    for (const auto& [name, text] : morph) {
        FormulaPtr f = parse_formula(text);
        bool two = f->free_vars().count("y") > 0;
        Scalar w(0);
        for (const auto& u : cands) {
            if (two) {
                for (const auto& vv : cands) {
                    Valuation v{{"x", u}, {"y", vv}};
                    Scalar r = scalar_of(eval_qf(*f, A, v));
                    if (w < r) w = r;
                }
            } else {
                Valuation v{{"x", u}};
                Scalar r = scalar_of(eval_qf(*f, A, v));
                if (w < r) w = r;
            }
        }
        add_entry(name, w, w.is_zero());
    }

    // surjectivity: for each x the preimage is the witnessing y
    FormulaPtr surj = parse_formula("norm(add(x, neg(s(y))))");
    Scalar wsurj(0);
    for (const auto& u : cands) {
        Scalar best(-1);
        for (const auto& y : {A.apply_inverse(u), StepFunction::zero()}) {
            Valuation v{{"x", u}, {"y", y}};
            Scalar r = scalar_of(eval_qf(*surj, A, v));
            if (best.sign() < 0 || r < best) best = r;
        }
        if (wsurj < best) wsurj = best;
    }
    add_entry("surjectivity", wsurj, wsurj.is_zero());

    // Rokhlin axioms via tower witnesses
    StepFunction one = StepFunction::indicator(Scalar(0), Scalar(1));
    for (int n : n_list) {
        std::string name = "rokhlin:R_" + std::to_string(n);
        try {
            TowerResult tr = functional_rokhlin(A, one, n, eps);
            Scalar v = rn_value(A, one, tr.g, n);
            add_entry(name, v, v <= Scalar(eps), "tower witness");
        } catch (const error& e) {
            // no tower: exhaustive grid floor over the strategy candidates
            Scalar floor(-1);
            for (const auto& y : cands) {
                Scalar v = rn_value(A, one, y, n);
                if (floor.sign() < 0 || v < floor) floor = v;
            }
            add_entry(name, floor, false, std::string("no witness: ") + e.what());
        }
    }
    return rep;
}

}  // namespace lplat
