#include "foalt/sexpr.hpp"

#include <cctype>

namespace foalt {

std::string SExpr::str() const {
    if (!isList) return atom;
    std::string s = "(";
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? " " : "") + items[i].str();
    return s + ")";
}

namespace {
struct Reader {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char get() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }
    void skip() {
        while (!eof()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                get();
            } else if (c == ';') {
                while (!eof() && peek() != '\n') get();
            } else {
                break;
            }
        }
    }
    SExpr read() {
        skip();
        if (eof()) throw ParseError(line, col, "unexpected end of input");
        SExpr e;
        e.line = line;
        e.col = col;
        char c = peek();
        if (c == '(') {
            get();
            e.isList = true;
            for (;;) {
                skip();
                if (eof()) throw ParseError(e, "unclosed parenthesis");
                if (peek() == ')') {
                    get();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        if (c == ')') throw ParseError(line, col, "unexpected ')'");
        if (c == '|') {
            get();
            while (!eof() && peek() != '|') e.atom += get();
            if (eof()) throw ParseError(e, "unterminated quoted symbol");
            get();
            return e;
        }
        while (!eof()) {
            c = peek();
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') break;
            e.atom += get();
        }
        return e;
    }
};
}  // namespace

std::vector<SExpr> parseSExprs(const std::string& text) {
    Reader r{text};
    std::vector<SExpr> out;
    for (;;) {
        r.skip();
        if (r.eof()) break;
        out.push_back(r.read());
    }
    return out;
}

SExpr parseSExpr(const std::string& text) {
    auto all = parseSExprs(text);
    if (all.size() != 1) throw ParseError(1, 1, "expected exactly one expression");
    return all[0];
}

}  // namespace foalt
