#include "lplat/sysfile.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace lplat {

namespace {

// Character cursor with line/column tracking, shared by all the literal
// parsers.  Whitespace is free between tokens.
class Cursor {
public:
    explicit Cursor(const std::string& text) : s_(text) {}

    void skip_ws() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {  // comment to end of line
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() != c) return false;
        advance();
        return true;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    bool eat_word(const std::string& w) {
        skip_ws();
        if (s_.compare(pos_, w.size(), w) != 0) return false;
        size_t end = pos_ + w.size();
        if (end < s_.size() &&
            (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
            return false;
        for (size_t i = 0; i < w.size(); ++i) advance();
        return true;
    }

    std::string ident() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_])))
            fail("expected identifier");
        std::string out;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            out += s_[pos_];
            advance();
        }
        return out;
    }

    bool at_digit() {
        skip_ws();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    Int natural() {
        skip_ws();
        if (!at_digit()) fail("expected number");
        std::string digits;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            digits += s_[pos_];
            advance();
        }
        return Int(digits);
    }

    Int integer() {
        skip_ws();
        bool negated = eat('-');
        Int n = natural();
        return negated ? Int(-n) : n;
    }

    Rat rational() {
        Int num = integer();
        if (eat('/')) {
            Int den = natural();
            if (den == 0) fail("zero denominator");
            return Rat(num, den);
        }
        return Rat(num);
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

    // Scalar literal: sum of terms `q`, `q*alpha`, `alpha`.
    Scalar scalar(const AlphaRef& alpha) {
        Scalar acc = scalar_term(alpha, false);
        while (true) {
            if (eat('+')) {
                acc += scalar_term(alpha, false);
            } else if (peek() == '-') {
                advance_minus();
                acc -= scalar_term(alpha, true);
            } else {
                return acc;
            }
        }
    }

    int line() const { return line_; }
    int column() const { return col_; }

    std::string rest_of_line() {
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != '#') {
            out += s_[pos_];
            advance();
        }
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
        if (pos_ < s_.size()) advance();  // the newline itself
        return out;
    }

private:
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void advance_minus() {
        skip_ws();
        advance();  // the '-' already peeked
    }

    Scalar scalar_term(const AlphaRef& alpha, bool after_minus) {
        auto need_alpha = [&]() -> Scalar {
            if (!alpha) fail("alpha used but not declared");
            return Scalar::alpha(alpha);
        };
        if (eat_word("alpha")) return need_alpha();
        (void)after_minus;  // sign handling is uniform: rational() accepts '-'
        Rat q = rational();
        if (eat('*')) {
            if (!eat_word("alpha")) fail("expected alpha after '*'");
            return need_alpha() * Scalar(q);
        }
        return Scalar(q);
    }

    const std::string& s_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

Interval interval(Cursor& c, const AlphaRef& alpha) {
    c.expect('[');
    Scalar lo = c.scalar(alpha);
    c.expect(',');
    Scalar hi = c.scalar(alpha);
    c.expect(')');
    return {lo, hi};
}

StepFunction step_literal(Cursor& c, const AlphaRef& alpha) {
    if (!c.eat_word("step")) c.fail("expected 'step'");
    c.expect('{');
    StepFunction out;
    if (c.eat('}')) return out;
    do {
        Interval iv = interval(c, alpha);
        c.expect(':');
        Scalar v = c.scalar(alpha);
        out = out + StepFunction::indicator(iv.lo, iv.hi).scale(v);
    } while (c.eat(','));
    c.expect('}');
    return out;
}

PAMap map_literal(Cursor& c, const Space& space, const AlphaRef& alpha) {
    if (c.eat_word("rot")) {
        c.expect('(');
        Scalar s = c.scalar(alpha);
        c.expect(')');
        return PAMap::rotation(s, space);
    }
    if (c.eat_word("trans")) {
        c.expect('(');
        Scalar s = c.scalar(alpha);
        c.expect(')');
        return PAMap::translation(s, space);
    }
    if (!c.eat_word("map")) c.fail("expected 'rot', 'trans' or 'map'");
    c.expect('{');
    std::vector<Branch> branches;
    do {
        Interval dom = interval(c, alpha);
        c.expect('-');
        c.expect('>');
        if (!c.eat_word("slope")) c.fail("expected 'slope'");
        Rat slope = c.rational();
        c.expect('+');
        Scalar intercept = c.scalar(alpha);
        branches.push_back({dom, slope, intercept});
    } while (c.eat(','));
    c.expect('}');
    return PAMap::from_branches(space, std::move(branches));
}

AlphaRef alpha_literal(Cursor& c) {
    if (c.eat_word("surd")) {
        c.expect('(');
        Int p = c.integer();
        c.expect(',');
        Int q = c.integer();
        c.expect(',');
        Int d = c.integer();
        c.expect(',');
        Int r = c.integer();
        c.expect(')');
        return AlphaSpec::surd(p, q, d, r);
    }
    if (c.eat_word("cf")) {
        c.expect('(');
        std::vector<Int> qs{c.integer()};
        c.expect(';');
        do qs.push_back(c.integer());
        while (c.eat(','));
        c.expect(')');
        return AlphaSpec::continued_fraction(std::move(qs));
    }
    c.fail("expected 'surd' or 'cf'");
}

void expect_end(Cursor& c) {
    if (!c.done()) c.fail("trailing input");
}

}  // namespace

Scalar parse_scalar(const std::string& text, const AlphaRef& alpha) {
    Cursor c(text);
    Scalar s = c.scalar(alpha);
    expect_end(c);
    return s;
}

StepFunction parse_step(const std::string& text, const AlphaRef& alpha) {
    Cursor c(text);
    StepFunction f = step_literal(c, alpha);
    expect_end(c);
    return f;
}

PAMap parse_map(const std::string& text, const Space& space) {
    Cursor c(text);
    PAMap m = map_literal(c, space, space.alpha);
    expect_end(c);
    return m;
}

AlphaRef parse_alpha(const std::string& text) {
    Cursor c(text);
    AlphaRef a = alpha_literal(c);
    expect_end(c);
    return a;
}

SystemDesc parse_system(const std::string& text) {
    Cursor c(text);
    AlphaRef alpha;
    std::optional<SpaceKind> kind;
    std::optional<std::string> density_src;
    std::optional<std::string> map_src;
    PExponent p = PExponent::one();
    int density_line = 1, map_line = 1;

    while (!c.done()) {
        std::string key = c.ident();
        c.expect('=');
        if (key == "alpha") {
            alpha = alpha_literal(c);
        } else if (key == "space") {
            std::string k = c.ident();
            if (k == "unit") kind = SpaceKind::Unit;
            else if (k == "line") kind = SpaceKind::Line;
            else c.fail("space must be 'unit' or 'line'");
        } else if (key == "p") {
            Rat q = c.rational();
            if (q < 1) c.fail("p must be >= 1");
            p = PExponent{q};
        } else if (key == "density") {
            density_line = c.line();
            density_src = c.rest_of_line();
        } else if (key == "map") {
            map_line = c.line();
            map_src = c.rest_of_line();
        } else {
            c.fail("unknown key: " + key);
        }
    }
    if (!kind) throw ParseError("missing 'space' declaration", 1, 1);
    if (!map_src) throw ParseError("missing 'map' declaration", 1, 1);
    Space space = *kind == SpaceKind::Unit ? Space::unit(alpha) : Space::line(alpha);

    StepFunction density;
    if (density_src) {
        try {
            density = parse_step(*density_src, alpha);
        } catch (ParseError& e) {
            throw ParseError(std::string("density: ") + e.what(), density_line, e.column);
        }
    }
    PAMap map = [&] {
        try {
            return parse_map(*map_src, space);
        } catch (ParseError& e) {
            throw ParseError(std::string("map: ") + e.what(), map_line, e.column);
        }
    }();
    // Validation beyond parsing: PAMap::from_branches already enforces
    // bijectivity and the Measure constructor rejects non-positive density.
    Measure mu = [&] {
        try {
            return Measure(space, density);
        } catch (const error& e) {
            throw ParseError(e.what(), density_line, 1);
        }
    }();
    return SystemDesc{std::move(mu), std::move(map), p, alpha};
}

SystemDesc load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open system file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_system(ss.str());
    } catch (ParseError& e) {
        std::ostringstream msg;
        msg << path << ":" << e.line << ":" << e.column << ": " << e.what();
        throw error(msg.str());
    }
}

}  // namespace lplat
