// Seeded random instances for property tests and `foalt gen`.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "foalt/automaton.hpp"
#include "foalt/frontends.hpp"
#include "foalt/symbolic.hpp"

namespace foalt {

using Rng = std::mt19937_64;

struct EqGenOptions {
    std::size_t maxStates = 3;
    std::size_t maxArity = 2;
    std::vector<std::string> events{"a", "b"};
    std::size_t constants = 3;  // v0 .. v(constants-1)
    int maxDepth = 2;
    double missingRuleProb = 0.0;
};

// EQ automaton with one input x. Every quantifier is guarded,
// ∃z.(z=t1 ∨ z=t2) ∧ φ or ∀z.(z≠t1 ∧ z≠t2) ∨ φ, so acceptance does not
// depend on values outside the constants and the word.
Foaa randomEqAutomaton(Rng& rng, const EqGenOptions& opt = {});
// Positive formula in the same guarded fragment over the given scope.
Formula randomGuardedPositive(Rng& rng, const std::vector<Pred>& preds, const std::vector<Var>& scope, int depth,
                              std::size_t constants);

DataWord randomIdDataWord(Rng& rng, const Foaa& a, std::size_t maxLen, std::size_t values);
EventSequence randomEventSequence(Rng& rng, const std::vector<std::string>& events, std::size_t maxLen);

// Quantifier-free predicate-free formulas in negation normal form.
Formula randomLraQf(Rng& rng, const std::vector<Var>& vars, int depth);
Formula randomEqQf(Rng& rng, const std::vector<Var>& vars, int depth, std::size_t constants);
// Unrestricted quantifiers and predicate atoms (arguments of sort Id).
Formula randomEqFormula(Rng& rng, const std::vector<Pred>& preds, const std::vector<Var>& scope, int depth,
                        std::size_t constants, bool positive);

// At most 3 states, 1-2 clocks, at most 4 edges over events a, b.
TimedAutomaton randomTimed(Rng& rng);
// Strictly increasing positive timestamps in steps of 1/2.
TimedWord randomTimedWord(Rng& rng, const TimedAutomaton& ta, std::size_t maxLen);

// 1-3 states, 2 registers.
RegisterAutomaton randomRegister(Rng& rng, std::size_t values = 3);
IdWord randomIdWord(Rng& rng, std::size_t maxLen, std::size_t values);

}  // namespace foalt
