// Data theories: ground evaluation, satisfiability of quantifier-free
// formulas, and quantifier elimination with witness terms.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foalt/logic.hpp"

namespace foalt {

enum class TheoryId : std::uint8_t { EQ, LRA };
const char* theoryName(TheoryId t);
TheoryId theoryFromName(const std::string& s);
Sort dataSort(TheoryId t);

// Id values are the canonical universe v0, v1, ... stored as the integer k.
using Valuation = std::map<Var, Rational, VarLess>;
using Interpretation = std::map<Pred, std::set<std::vector<Rational>>>;

Term valueTerm(Sort s, const Rational& v);
std::string valueString(Sort s, const Rational& v);

// ---------------------------------------------------------------------------
// Witness terms

struct ExtendedTerm;
using ExtTermPtr = std::shared_ptr<const ExtendedTerm>;

struct ExtendedTerm {
    enum class Kind : std::uint8_t { Plain, MinusInf, PlusInf, EpsAbove, EpsBelow, Cond };
    Kind kind = Kind::Plain;
    Term term = nullptr;      // Plain, EpsAbove, EpsBelow
    Formula cond = nullptr;   // Cond
    ExtTermPtr then, els;     // Cond

    static ExtendedTerm plain(Term t);
    static ExtendedTerm minusInfinity();
    static ExtendedTerm plusInfinity();
    static ExtendedTerm epsilonAbove(Term t);
    static ExtendedTerm epsilonBelow(Term t);
    static ExtendedTerm conditional(Formula c, ExtendedTerm a, ExtendedTerm b);

    bool isPlain() const { return kind == Kind::Plain; }
    bool isVirtual() const;  // contains an infinity or epsilon anywhere
    VarSet vars() const;
    std::string str() const;
};

// ---------------------------------------------------------------------------
// Evaluation

// Value of a term under a valuation. fresh(t1..tk) is the least canonical
// value different from every ti.
Rational evalTerm(Term t, const Valuation& nu);

// Quantifiers range over `domain` when given. Without a domain, quantified
// subformulas must be predicate-free and are decided by elimination.
bool evaluate(Formula f, const Valuation& nu, const Interpretation* interp = nullptr,
              const std::vector<Rational>* domain = nullptr);

// ---------------------------------------------------------------------------
// Quantifier-free satisfiability

struct SatResult {
    bool sat = false;
    Valuation model;                  // on the free variables, when sat
    std::map<Formula, bool> predAtoms;  // truth of predicate atoms, when sat
};

// Complete for quantifier-free EQ/LRA formulas with predicate atoms read as
// booleans under congruence.
SatResult checkSatQf(Formula f);
bool isSatQf(Formula f);
bool entailsQf(Formula a, Formula b);
bool equivalentQf(Formula a, Formula b);

// ---------------------------------------------------------------------------
// Quantifier elimination

struct QeResult {
    Formula formula;
    ExtendedTerm witness;
};

// phi quantifier-free; predicate atoms may occur but not mention x.
QeResult qeExists(Var x, Formula phi);
// t with a top-level conjunct x = t, or null.
Term equalityDefinition(Var x, Formula phi);
Formula qeFormula(Var x, Formula phi);
ExtendedTerm witnessForUniversal(Var x, Formula matrix);
Formula substituteVirtual(Formula phi, Var x, const ExtendedTerm& tau);

// Eliminates every quantifier of a formula whose quantified variables do
// not occur in predicate atoms.
Formula eliminateQuantifiers(Formula f);

struct QeStats {
    std::uint64_t satCalls = 0;
    std::uint64_t qeCalls = 0;
};
QeStats& qeStats();

}  // namespace foalt
