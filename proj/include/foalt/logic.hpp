// Multisorted first-order formulas and terms.
//
// Nodes are hash-consed and immutable: two structurally equal terms or
// formulas are the same pointer. Formulas are kept in negation normal form,
// negation only ever wraps an equality or a predicate atom.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace foalt {

using Rational = mpq_class;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Sort : std::uint8_t { Bool, Real, Id };
const char* sortName(Sort s);
Sort sortFromName(const std::string& name);

// ---------------------------------------------------------------------------
// Variables and predicate symbols

struct VarNode {
    std::string name;
    Sort sort;
    int stamp;  // -1 when not time-stamped
    std::uint32_t id;
    std::string display() const;
};
using Var = const VarNode*;

Var mkVar(const std::string& name, Sort sort, int stamp = -1);
// A variable whose name has never been handed out before.
Var freshVar(const std::string& base, Sort sort);

struct VarLess {
    bool operator()(Var a, Var b) const;
};
using VarSet = std::set<Var, VarLess>;

struct PredNode {
    std::string name;
    std::vector<Sort> argSorts;
    int stamp;
    std::uint32_t id;
    std::size_t arity() const { return argSorts.size(); }
    std::string display() const;
};
using Pred = const PredNode*;

Pred mkPred(const std::string& name, const std::vector<Sort>& argSorts, int stamp = -1);

// ---------------------------------------------------------------------------
// Terms. Every Real term is a linear combination; Id terms are variables,
// canonical constants v0, v1, ... or fresh-distinct(args).

enum class TermKind : std::uint8_t { Lin, IdVar, IdConst, Fresh };

struct TermNode {
    TermKind kind;
    Sort sort;
    std::vector<std::pair<Var, Rational>> mons;  // Lin, sorted by VarLess
    Rational constant;                           // Lin
    std::uint32_t index = 0;                     // IdConst
    Var var = nullptr;                           // IdVar
    std::vector<const TermNode*> args;           // Fresh
    std::vector<Var> fv;
    std::size_t hash = 0;
    std::uint32_t id = 0;
};
using Term = const TermNode*;

Term tVar(Var v);
Term tNum(const Rational& q);
Term tIdConst(std::uint32_t k);
Term tFresh(std::vector<Term> args);
Term tAdd(Term a, Term b);
Term tSub(Term a, Term b);
Term tScale(const Rational& c, Term a);
Term tLin(const std::vector<std::pair<Var, Rational>>& mons, const Rational& c);
Rational coefficient(Term t, Var v);
bool termHasVar(Term t, Var v);
bool isGround(Term t);

// ---------------------------------------------------------------------------
// Formulas

enum class FKind : std::uint8_t { True, False, EqId, Lin, Pred, Not, And, Or, Exists, Forall };
// Linear atoms are `lhs rel 0`.
enum class Rel : std::uint8_t { Lt, Le, Eq };

struct FormulaNode {
    FKind kind;
    Rel rel = Rel::Eq;
    Term lhs = nullptr;
    Term rhs = nullptr;
    Pred pred = nullptr;
    std::vector<Term> args;
    std::vector<const FormulaNode*> kids;
    Var bound = nullptr;
    std::vector<Var> fv;
    std::uint64_t treeSize = 1;
    bool quantFree = true;
    bool predFree = true;
    std::size_t hash = 0;
    std::uint32_t id = 0;

    bool isAtom() const { return kind == FKind::EqId || kind == FKind::Lin || kind == FKind::Pred; }
    bool isLiteral() const { return isAtom() || kind == FKind::Not; }
    bool isQuant() const { return kind == FKind::Exists || kind == FKind::Forall; }
    const FormulaNode* body() const { return kids[0]; }
};
using Formula = const FormulaNode*;

Formula fTrue();
Formula fFalse();
Formula fBool(bool b);
Formula fEq(Term a, Term b);
Formula fLt(Term a, Term b);
Formula fLe(Term a, Term b);
Formula fGt(Term a, Term b);
Formula fGe(Term a, Term b);
Formula fLinAtom(Rel rel, Term t);
Formula fPred(Pred p, std::vector<Term> args);
Formula fNot(Formula f);
Formula fAnd(std::vector<Formula> fs);
Formula fOr(std::vector<Formula> fs);
Formula fAnd(Formula a, Formula b);
Formula fOr(Formula a, Formula b);
Formula fImplies(Formula a, Formula b);
Formula fExists(Var v, Formula body);
Formula fForall(Var v, Formula body);
Formula fQuant(bool universal, Var v, Formula body);
Formula fExistsAll(const std::vector<Var>& vs, Formula body);

// The same node kind with new children; re-simplifies.
Formula rebuild(Formula f, std::vector<Formula> kids);

// ---------------------------------------------------------------------------
// Structural operations

VarSet freeVars(Formula f);
VarSet freeVars(Term t);
bool hasFreeVar(Formula f, Var v);

using Subst = std::map<Var, Term, VarLess>;
Term substitute(Term t, const Subst& s);
// Capture-avoiding simultaneous substitution of free occurrences.
Formula substitute(Formula f, const Subst& s);

// Replaces every atom for which `fn` returns non-null. Quantifiers are kept.
Formula mapAtoms(Formula f, const std::function<Formula(Formula)>& fn);
Formula mapPreds(Formula f, const std::function<Pred(Pred)>& fn);

struct QVar {
    bool universal;
    Var var;
};
struct PrenexFormula {
    std::vector<QVar> prefix;
    Formula matrix;
    Formula toFormula() const;
};
PrenexFormula prenex(Formula f);

bool isPositive(Formula f);
bool isPositive(Formula f, const std::set<Pred>& preds);
Formula dual(Formula f);
// x in `inputs` becomes x@i, every unstamped predicate q becomes q@i.
Formula stamp(Formula f, int i, const std::vector<Var>& inputs);
Formula unstampPreds(Formula f);

bool isQuantifierFree(Formula f);
bool hasPredicates(Formula f);
std::vector<Formula> predAtoms(Formula f);  // distinct, first-occurrence order
std::set<Pred> predSymbols(Formula f);
std::vector<Formula> conjuncts(Formula f);

// Bound variables renamed to z0, z1, ... in binding order.
Formula alphaNormalize(Formula f);
bool alphaEquivalent(Formula a, Formula b);
// Children of every conjunction/disjunction sorted by printed form.
Formula acNormalize(Formula f);

std::uint64_t formulaSize(Formula f);

std::string toString(Term t);
std::string toString(Formula f);
std::string quoteSymbol(const std::string& s);

}  // namespace foalt
