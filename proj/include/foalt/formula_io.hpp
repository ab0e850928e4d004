// Formula concrete syntax: the SMT-LIB 2 term grammar with predicate atoms
// as uninterpreted applications.
#pragma once

#include <map>
#include <string>

#include "foalt/logic.hpp"
#include "foalt/sexpr.hpp"

namespace foalt {

struct Scope {
    std::map<std::string, Var> vars;
    std::map<std::string, Pred> preds;
    // v0, v1, ... denote canonical Id values unless shadowed by a variable.
    bool idConstants = true;
};

// Accepts integers, decimals, a/b and a leading minus.
Rational parseRational(const std::string& s);
std::string rationalToDecimalOrFraction(const Rational& q);

Term parseTerm(const SExpr& e, const Scope& scope);
Formula parseFormula(const SExpr& e, const Scope& scope);
Formula parseFormula(const std::string& text, const Scope& scope);

}  // namespace foalt
