// Witness terms for spurious event sequences and generalized Lyndon
// interpolants (GLIs) computed from them.
#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "foalt/automaton.hpp"
#include "foalt/symbolic.hpp"
#include "foalt/theory.hpp"

namespace foalt {

struct WitnessAssignment {
    // One entry per universal prefix variable, in prefix order. Each term may
    // mention outer prefix variables.
    std::vector<std::pair<Var, ExtendedTerm>> entries;

    const ExtendedTerm* find(Var v) const;
    std::size_t size() const { return entries.size(); }
};

// Throws when Υ(α) is satisfiable.
WitnessAssignment computeWitnesses(const SymbolicPath& sp);

// Witnesses with outer universals substituted away, so every term only
// mentions existential prefix variables and inputs.
WitnessAssignment composeWitnesses(const SymbolicPath& sp, const WitnessAssignment& wa);

// Matrix of Θ (or Υ) with all universal witnesses substituted.
Formula substituteWitnesses(Formula matrix, const WitnessAssignment& composed);

// True when every witness only mentions inputs up to the step of its
// quantifier and existential prefix variables.
bool witnessesRespectSteps(const SymbolicPath& sp, const WitnessAssignment& composed);

// Strongest consequence of a quantifier-free φ over the kept predicates and
// variables. Variables that occur inside predicate atoms and have no
// definition are left in place.
Formula project(Formula phi, const std::set<Pred>& keepPreds, const VarSet& keepVars);

struct Gli {
    enum class Kind {
        // Quantifier-free I_k from projecting the witness-substituted Θ matrix.
        Chain,
        // Sentences I_k = ∀ later inputs. ⋁_q ∃d. q@k(d) ∧ R_q(d): some
        // configuration at step k rejects every continuation along α.
        Rejection,
    };
    Kind kind = Kind::Chain;
    std::vector<Formula> I;
    std::shared_ptr<const SymbolicPath> path;
    WitnessAssignment witnesses;  // composed; Chain only

    struct Piece {
        Pred pred;
        std::vector<Var> params;
        Formula reject;  // R_q
    };
    struct Level {
        std::vector<Var> laterInputs;
        std::vector<Piece> pieces;
    };
    std::vector<Level> levels;  // Rejection only

    std::size_t length() const { return I.empty() ? 0 : I.size() - 1; }
};

Gli computeGli(const Foaa& a, const SymbolicPath& sp, const WitnessAssignment& wa);
// Computes witnesses and the GLI for a spurious α.
Gli interpolate(const Foaa& a, const EventSequence& alpha);

enum class Validity { Valid, Invalid, Unknown };
struct GliCheck {
    Validity status = Validity::Valid;
    std::string reason;
    bool ok() const { return status == Validity::Valid; }
};
GliCheck validateGli(const Foaa& a, const EventSequence& alpha, const Gli& g);

// J_k: I_k with time stamps removed and its free variables existentially
// closed; a sentence over the unstamped state predicates.
Formula closeInterpolant(const Gli& g, std::size_t k);

}  // namespace foalt
