#include "lplat/formula.hpp"

#include <cctype>
#include <sstream>

namespace lplat {

ParseError::ParseError(const std::string& msg, int l, int c)
    : error(msg + " (line " + std::to_string(l) + ", column " + std::to_string(c) + ")"),
      line(l),
      column(c) {}

bool Formula::quantifier_free() const {
    if (kind == Kind::Sup || kind == Kind::Inf) return false;
    for (const auto& a : args)
        if (!a->quantifier_free()) return false;
    return true;
}

namespace {

void term_vars(const Term& t, std::set<std::string>& out) {
    if (t.kind == Term::Kind::Var) out.insert(t.var);
    for (const auto& a : t.args) term_vars(*a, out);
}

void formula_vars(const Formula& f, std::set<std::string>& out) {
    if (f.term) term_vars(*f.term, out);
    for (const auto& a : f.args) formula_vars(*a, out);
    if (f.kind == Formula::Kind::Sup || f.kind == Formula::Kind::Inf) out.erase(f.var);
}

}  // namespace

std::set<std::string> Formula::free_vars() const {
    std::set<std::string> out;
    formula_vars(*this, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            if (text[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos < text.size(); ++i, ++pos) ++col;
    }

    bool eat(char c) {
        if (peek() == c) {
            advance(1);
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    bool at_ident() {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            advance(1);
        if (start == pos) fail("expected identifier");
        return text.substr(start, pos - start);
    }

    bool at_number() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
        if (c == '-') {
            std::size_t save = pos;
            ++save;
            while (save < text.size() && std::isspace(static_cast<unsigned char>(text[save])))
                ++save;
            return save < text.size() && std::isdigit(static_cast<unsigned char>(text[save]));
        }
        return false;
    }

    Rat number() {
        skip_ws();
        bool negative = eat('-');
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            advance(1);
        if (start == pos) fail("expected number");
        Int num(text.substr(start, pos - start));
        Int den(1);
        if (pos < text.size() && text[pos] == '/') {
            advance(1);
            std::size_t ds = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                advance(1);
            if (ds == pos) fail("expected denominator");
            den = Int(text.substr(ds, pos - ds));
            if (den == 0) fail("zero denominator");
        }
        Rat r(num, den);
        return negative ? -r : r;
    }

    long integer() {
        skip_ws();
        bool negative = eat('-');
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            advance(1);
        if (start == pos) fail("expected integer");
        long v = std::stol(text.substr(start, pos - start));
        return negative ? -v : v;
    }

    bool done() {
        skip_ws();
        return pos >= text.size();
    }
};

const std::set<std::string> kReserved = {"neg",  "avg",     "abs",  "add",  "join", "meet",
                                         "pos",  "negpart", "restrict", "s",    "norm", "max",
                                         "min",  "monus",   "rabs", "sup",  "inf"};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    FormulaPtr formula() {
        FormulaPtr f = formula_sum({});
        if (!lex_.done()) lex_.fail("trailing input");
        return f;
    }

    TermPtr term_only() {
        TermPtr t = term();
        if (!lex_.done()) lex_.fail("trailing input");
        return t;
    }

private:
    Lexer lex_;

    static FormulaPtr mk(Formula f) { return std::make_shared<Formula>(std::move(f)); }
    static TermPtr mkt(Term t) { return std::make_shared<Term>(std::move(t)); }

    FormulaPtr formula_sum(std::set<std::string> bound) {
        FormulaPtr left = formula_primary(bound);
        while (true) {
            if (lex_.eat('+')) {
                FormulaPtr right = formula_primary(bound);
                left = mk({Formula::Kind::Plus, Rat(), "", nullptr, {left, right}});
            } else if (lex_.peek() == '-' && !lex_.at_number()) {
                lex_.eat('-');
                FormulaPtr right = formula_primary(bound);
                left = mk({Formula::Kind::Minus, Rat(), "", nullptr, {left, right}});
            } else if (lex_.peek() == '-') {
                // "F - 3" style: minus followed by a number literal
                lex_.eat('-');
                FormulaPtr right = formula_primary(bound);
                left = mk({Formula::Kind::Minus, Rat(), "", nullptr, {left, right}});
            } else {
                return left;
            }
        }
    }

    FormulaPtr formula_primary(std::set<std::string>& bound) {
        if (lex_.eat('(')) {
            FormulaPtr f = formula_sum(bound);
            lex_.expect(')');
            return f;
        }
        if (lex_.at_number()) {
            Rat q = lex_.number();
            if (lex_.eat('*')) {
                FormulaPtr f = formula_primary(bound);
                return mk({Formula::Kind::TimesConst, q, "", nullptr, {f}});
            }
            return mk({Formula::Kind::Const, q, "", nullptr, {}});
        }
        if (!lex_.at_ident()) lex_.fail("expected formula");
        std::string name = lex_.ident();
        if (name == "norm") {
            lex_.expect('(');
            TermPtr t = term_scoped(bound);
            lex_.expect(')');
            return mk({Formula::Kind::Norm, Rat(), "", t, {}});
        }
        if (name == "max" || name == "min") {
            lex_.expect('(');
            std::vector<FormulaPtr> args;
            args.push_back(formula_sum(bound));
            while (lex_.eat(',')) args.push_back(formula_sum(bound));
            lex_.expect(')');
            return mk({name == "max" ? Formula::Kind::Max : Formula::Kind::Min, Rat(), "",
                       nullptr, std::move(args)});
        }
        if (name == "monus") {
            lex_.expect('(');
            FormulaPtr a = formula_sum(bound);
            lex_.expect(',');
            FormulaPtr b = formula_sum(bound);
            lex_.expect(')');
            return mk({Formula::Kind::Monus, Rat(), "", nullptr, {a, b}});
        }
        if (name == "rabs") {
            lex_.expect('(');
            FormulaPtr a = formula_sum(bound);
            lex_.expect(')');
            return mk({Formula::Kind::Rabs, Rat(), "", nullptr, {a}});
        }
        if (name == "sup" || name == "inf") {
            std::string v = lex_.ident();
            if (kReserved.count(v)) lex_.fail("reserved word used as variable: " + v);
            if (bound.count(v)) lex_.fail("variable bound twice on a path: " + v);
            lex_.expect('.');
            bound.insert(v);
            FormulaPtr body = formula_sum(bound);
            bound.erase(v);
            return mk({name == "sup" ? Formula::Kind::Sup : Formula::Kind::Inf, Rat(), v,
                       nullptr, {body}});
        }
        lex_.fail("unknown formula head: " + name);
    }

    TermPtr term_scoped(const std::set<std::string>& bound) {
        (void)bound;  // free variables are permitted and reported by free_vars()
        return term();
    }

    TermPtr term() {
        if (lex_.at_number()) {
            Rat q = lex_.number();
            if (q == 0 && lex_.peek() != '*')
                return mkt({Term::Kind::Zero, "", Rat(), 0, {}});
            lex_.expect('*');
            TermPtr sub = term();
            return mkt({Term::Kind::Scale, "", q, 0, {sub}});
        }
        if (!lex_.at_ident()) lex_.fail("expected term");
        std::string name = lex_.ident();
        auto unary = [&](Term::Kind k) {
            lex_.expect('(');
            TermPtr a = term();
            lex_.expect(')');
            return mkt({k, "", Rat(), 0, {a}});
        };
        auto binary = [&](Term::Kind k) {
            lex_.expect('(');
            TermPtr a = term();
            lex_.expect(',');
            TermPtr b = term();
            lex_.expect(')');
            return mkt({k, "", Rat(), 0, {a, b}});
        };
        if (name == "neg") return unary(Term::Kind::Neg);
        if (name == "abs") return unary(Term::Kind::Abs);
        if (name == "pos") return unary(Term::Kind::Pos);
        if (name == "negpart") return unary(Term::Kind::NegPart);
        if (name == "avg") return binary(Term::Kind::Avg);
        if (name == "add") return binary(Term::Kind::Add);
        if (name == "join") return binary(Term::Kind::Join);
        if (name == "meet") return binary(Term::Kind::Meet);
        if (name == "restrict") return binary(Term::Kind::Restrict);
        if (name == "s") {
            long k = 1;
            if (lex_.eat('^')) k = lex_.integer();
            lex_.expect('(');
            TermPtr a = term();
            lex_.expect(')');
            return mkt({Term::Kind::SigmaPow, "", Rat(), k, {a}});
        }
        if (kReserved.count(name)) lex_.fail("reserved word used as variable: " + name);
        return mkt({Term::Kind::Var, name, Rat(), 0, {}});
    }
};

std::string rat_text(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).formula(); }
TermPtr parse_term(const std::string& text) { return Parser(text).term_only(); }

std::string pretty(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Zero:
            return "0";
        case Term::Kind::Var:
            return t.var;
        case Term::Kind::Neg:
            return "neg(" + pretty(*t.args[0]) + ")";
        case Term::Kind::Avg:
            return "avg(" + pretty(*t.args[0]) + ", " + pretty(*t.args[1]) + ")";
        case Term::Kind::Abs:
            return "abs(" + pretty(*t.args[0]) + ")";
        case Term::Kind::Add:
            return "add(" + pretty(*t.args[0]) + ", " + pretty(*t.args[1]) + ")";
        case Term::Kind::Scale:
            return rat_text(t.scale) + "*" + pretty(*t.args[0]);
        case Term::Kind::Join:
            return "join(" + pretty(*t.args[0]) + ", " + pretty(*t.args[1]) + ")";
        case Term::Kind::Meet:
            return "meet(" + pretty(*t.args[0]) + ", " + pretty(*t.args[1]) + ")";
        case Term::Kind::Pos:
            return "pos(" + pretty(*t.args[0]) + ")";
        case Term::Kind::NegPart:
            return "negpart(" + pretty(*t.args[0]) + ")";
        case Term::Kind::Restrict:
            return "restrict(" + pretty(*t.args[0]) + ", " + pretty(*t.args[1]) + ")";
        case Term::Kind::SigmaPow:
            if (t.sigma_exp == 1) return "s(" + pretty(*t.args[0]) + ")";
            return "s^" + std::to_string(t.sigma_exp) + "(" + pretty(*t.args[0]) + ")";
    }
    throw error("pretty: bad term");
}

std::string pretty(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Norm:
            return "norm(" + pretty(*f.term) + ")";
        case Formula::Kind::Const:
            return rat_text(f.q);
        case Formula::Kind::Plus:
            return "(" + pretty(*f.args[0]) + " + " + pretty(*f.args[1]) + ")";
        case Formula::Kind::Minus:
            return "(" + pretty(*f.args[0]) + " - " + pretty(*f.args[1]) + ")";
        case Formula::Kind::TimesConst:
            return rat_text(f.q) + "*(" + pretty(*f.args[0]) + ")";
        case Formula::Kind::Max:
        case Formula::Kind::Min: {
            std::string out = f.kind == Formula::Kind::Max ? "max(" : "min(";
            for (std::size_t i = 0; i < f.args.size(); ++i)
                out += (i ? ", " : "") + pretty(*f.args[i]);
            return out + ")";
        }
        case Formula::Kind::Monus:
            return "monus(" + pretty(*f.args[0]) + ", " + pretty(*f.args[1]) + ")";
        case Formula::Kind::Rabs:
            return "rabs(" + pretty(*f.args[0]) + ")";
        case Formula::Kind::Sup:
            return "sup " + f.var + ". " + pretty(*f.args[0]);
        case Formula::Kind::Inf:
            return "inf " + f.var + ". " + pretty(*f.args[0]);
    }
    throw error("pretty: bad formula");
}

bool same_term(const Term& a, const Term& b) {
    if (a.kind != b.kind || a.var != b.var || a.scale != b.scale ||
        a.sigma_exp != b.sigma_exp || a.args.size() != b.args.size())
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_term(*a.args[i], *b.args[i])) return false;
    return true;
}

bool same_formula(const Formula& a, const Formula& b) {
    if (a.kind != b.kind || a.q != b.q || a.var != b.var || a.args.size() != b.args.size())
        return false;
    if ((a.term == nullptr) != (b.term == nullptr)) return false;
    if (a.term && !same_term(*a.term, *b.term)) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_formula(*a.args[i], *b.args[i])) return false;
    return true;
}

}  // namespace lplat
