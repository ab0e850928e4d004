// S-expression reader with source positions.
#pragma once

#include <string>
#include <vector>

#include "foalt/logic.hpp"

namespace foalt {

struct SExpr {
    bool isList = false;
    std::string atom;
    std::vector<SExpr> items;
    int line = 0;
    int col = 0;

    bool isAtom() const { return !isList; }
    bool is(const std::string& a) const { return !isList && atom == a; }
    std::string where() const { return std::to_string(line) + ":" + std::to_string(col); }
    std::string str() const;
};

// Errors carry "line:col: message".
class ParseError : public Error {
public:
    ParseError(const SExpr& at, const std::string& msg) : Error(at.where() + ": " + msg) {}
    ParseError(int line, int col, const std::string& msg)
        : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg) {}
};

std::vector<SExpr> parseSExprs(const std::string& text);
SExpr parseSExpr(const std::string& text);

}  // namespace foalt
