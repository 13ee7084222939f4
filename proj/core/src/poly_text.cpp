#include "germflow/poly_text.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <optional>

namespace germflow {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool done() const { return pos >= text.size(); }
    char peek() const { return done() ? '\0' : text[pos]; }

    char advance() {
        const char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }
};

double parse_number(Cursor& cur) {
    cur.skip_ws();
    const std::size_t start = cur.pos;
    const int line = cur.line, col = cur.col;
    if (cur.peek() == '+' || cur.peek() == '-') cur.advance();
    bool digits = false;
    while (std::isdigit(static_cast<unsigned char>(cur.peek()))) { cur.advance(); digits = true; }
    if (cur.peek() == '.') {
        cur.advance();
        while (std::isdigit(static_cast<unsigned char>(cur.peek()))) { cur.advance(); digits = true; }
    }
    if (!digits) throw ParseError("expected a number", line, col);
    if (cur.peek() == 'e' || cur.peek() == 'E') {
        cur.advance();
        if (cur.peek() == '+' || cur.peek() == '-') cur.advance();
        if (!std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.fail("malformed exponent in number");
        while (std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.advance();
    }
    return std::strtod(cur.text.substr(start, cur.pos - start).c_str(), nullptr);
}

int parse_uint(Cursor& cur, const char* what) {
    cur.skip_ws();
    const int line = cur.line, col = cur.col;
    if (!std::isdigit(static_cast<unsigned char>(cur.peek())))
        throw ParseError(std::string("expected ") + what, line, col);
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        v = v * 10 + (cur.advance() - '0');
        if (v > 1'000'000) throw ParseError("exponent too large", line, col);
    }
    return static_cast<int>(v);
}

// Returns the 1-based variable index, or nullopt if the next token is not a
// variable name.
std::optional<int> try_parse_var(Cursor& cur) {
    cur.skip_ws();
    const char c = cur.peek();
    if (c != 'x' && c != 'y' && c != 'z' && c != 'w') return std::nullopt;
    const int line = cur.line, col = cur.col;
    cur.advance();
    if (c == 'x' && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        const int idx = parse_uint(cur, "variable index");
        if (idx < 1) throw ParseError("variable index must be >= 1", line, col);
        return idx;
    }
    switch (c) {
        case 'x': return 1;
        case 'y': return 2;
        case 'z': return 3;
        default: return 4;  // 'w'
    }
}

struct Term {
    Scalar coeff{1.0, 0.0};
    std::map<int, int> powers;  // 1-based variable index -> exponent
};

Term parse_term(Cursor& cur) {
    Term term;
    bool first = true;
    while (true) {
        cur.skip_ws();
        if (auto var = try_parse_var(cur)) {
            int power = 1;
            cur.skip_ws();
            if (cur.peek() == '^') {
                cur.advance();
                cur.skip_ws();
                if (cur.peek() == '^') cur.fail("unexpected '^'");
                power = parse_uint(cur, "an exponent after '^'");
            }
            term.powers[*var] += power;
        } else if (cur.peek() == '(') {
            cur.advance();
            const double re = parse_number(cur);
            cur.skip_ws();
            if (cur.peek() != ',') cur.fail("expected ',' in complex coefficient");
            cur.advance();
            const double im = parse_number(cur);
            cur.skip_ws();
            if (cur.peek() != ')') cur.fail("expected ')' after complex coefficient");
            cur.advance();
            term.coeff *= Scalar{re, im};
        } else if (std::isdigit(static_cast<unsigned char>(cur.peek())) || cur.peek() == '.') {
            term.coeff *= parse_number(cur);
        } else {
            if (first) cur.fail("expected a term");
            cur.fail("expected a factor after '*'");
        }
        first = false;
        cur.skip_ws();
        if (cur.peek() == '*') {
            cur.advance();
            continue;
        }
        return term;
    }
}

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, int nvars) {
    Cursor cur{text};
    std::vector<std::pair<double, Term>> signed_terms;  // sign, term
    cur.skip_ws();
    if (cur.done()) cur.fail("empty polynomial");
    double sign = 1.0;
    if (cur.peek() == '+' || cur.peek() == '-') sign = (cur.advance() == '-') ? -1.0 : 1.0;
    signed_terms.emplace_back(sign, parse_term(cur));
    while (true) {
        cur.skip_ws();
        if (cur.done()) break;
        const char c = cur.peek();
        if (c != '+' && c != '-') cur.fail(std::string("unexpected character '") + c + "'");
        cur.advance();
        signed_terms.emplace_back(c == '-' ? -1.0 : 1.0, parse_term(cur));
    }

    int max_var = 0;
    for (const auto& [s, t] : signed_terms)
        for (const auto& [idx, pow] : t.powers) max_var = std::max(max_var, idx);
    if (nvars == 0) nvars = std::max(max_var, 1);
    if (max_var > nvars)
        throw ParseError("variable x" + std::to_string(max_var) + " exceeds arity " + std::to_string(nvars), 1, 1);

    Polynomial::TermMap terms;
    for (const auto& [s, t] : signed_terms) {
        Polynomial::Exponents e(nvars, 0);
        for (const auto& [idx, pow] : t.powers) e[idx - 1] += pow;
        terms[std::move(e)] += s * t.coeff;
    }
    return Polynomial(nvars, std::move(terms));
}

std::string print_polynomial(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        Scalar coeff = c;
        if (c.imag() == 0.0) {
            if (first) {
                if (c.real() < 0.0) out += "-";
            } else {
                out += c.real() < 0.0 ? " - " : " + ";
            }
            coeff = std::abs(c.real());
        } else if (!first) {
            out += " + ";
        }
        if (coeff.imag() == 0.0) {
            append_double(out, coeff.real());
        } else {
            out += "(";
            append_double(out, coeff.real());
            out += ", ";
            append_double(out, coeff.imag());
            out += ")";
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            out += " * x" + std::to_string(i + 1);
            if (e[i] > 1) out += "^" + std::to_string(e[i]);
        }
        first = false;
    }
    return out;
}

}  // namespace germflow
