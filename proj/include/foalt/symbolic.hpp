// Symbolic execution along an event sequence: path and acceptance formulas,
// the instantiated formula Theta with a shared quantifier prefix, and its
// predicate-free form Upsilon.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foalt/automaton.hpp"
#include "foalt/logic.hpp"

namespace foalt {

using EventSequence = std::vector<std::string>;

std::string eventSequenceString(const EventSequence& alpha);
// "a1.a2" or "a1 a2"; "" and "eps" denote the empty sequence.
EventSequence parseEventSequence(const std::string& s);

// Literal path and acceptance formulas over the rules present in `a`.
// Missing rules are not constrained here; apply materializeRules first for
// the dead-state reading used everywhere else.
Formula pathFormula(const Foaa& a, const EventSequence& alpha);
Formula acceptanceFormula(const Foaa& a, const EventSequence& alpha);

// ∀y. q@k(y) → ψ@(k+1) for every rule over event `e`, and ∀y. ¬q@k(y) for
// states without one. Used by unfolding consecution and interpolant checks.
Formula stepAxioms(const Foaa& a, const std::string& e, int from);
// ⋀_{q ∉ F} ∀y. q@k(y) → ⊥
Formula finalAxioms(const Foaa& a, int k);
// Replaces non-final q@k atoms by false and final ones by true.
Formula applyFinality(const Foaa& a, Formula f, int k);

struct SymbolicPath {
    EventSequence alpha;
    std::vector<QVar> prefix;
    std::vector<int> xi;  // step at which each prefix variable entered
    // parts[0]: matrix of ι@0; parts[k], 1 <= k <= n: ⋀ (a → inst(a)) over
    // the distinct q@(k-1) atoms a; parts[n+1]: ⋀ ¬a over non-final q@n atoms.
    std::vector<Formula> parts;
    std::vector<std::vector<Formula>> atoms;  // distinct q@k atoms per step
    std::map<Formula, Formula> instance;      // q@k atom -> instance matrix
    Formula thetaMatrix = nullptr;
    Formula upsilonMatrix = nullptr;

    std::size_t length() const { return alpha.size(); }
    Formula theta() const;
    Formula upsilon() const;
    PrenexFormula thetaPrenex() const { return {prefix, thetaMatrix}; }
    PrenexFormula upsilonPrenex() const { return {prefix, upsilonMatrix}; }
    // Input variables x@k for 1 <= k <= n.
    std::vector<Var> inputs(const Foaa& a) const;
};

struct SymbolicOptions {
    // Replace x@k by the given ground terms (used for membership).
    const std::map<Var, Term, VarLess>* dataWord = nullptr;
};

SymbolicPath buildSymbolic(const Foaa& a, const EventSequence& alpha, const SymbolicOptions& opt = {});

// Quantifier-free formula equivalent to the quantified Υ(α).
Formula eliminateUpsilon(const SymbolicPath& sp);

struct SequenceCheck {
    bool accepting = false;
    DataWord word;  // when accepting
};
SequenceCheck checkEventSequence(const Foaa& a, const EventSequence& alpha);

bool member(const Foaa& a, const DataWord& w);

}  // namespace foalt
