// Reference semantics over a finite domain: minimal models of positive
// formulas and explicit alternating executions over data words.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "foalt/automaton.hpp"
#include "foalt/theory.hpp"

namespace foalt {

using BoundedDomain = std::vector<Rational>;
// Canonical Id values v0..v(n-1).
BoundedDomain idDomain(std::size_t n);

struct Config {
    Pred pred;
    std::vector<Rational> args;
    bool operator<(const Config& o) const;
    bool operator==(const Config& o) const { return pred == o.pred && args == o.args; }
    std::string str() const;
};
using Cube = std::set<Config>;

inline constexpr std::size_t kOracleCap = std::size_t(1) << 20;

// ⊆-minimal models of a positive formula, quantifiers ranging over dom and
// free variables read from nu. Computed by grounding into a monotone DNF.
std::vector<Cube> minimalModels(Formula phi, const Valuation& nu, const BoundedDomain& dom,
                                std::size_t cap = kOracleCap);
// Same set by enumerating every interpretation of the ground atoms over dom.
// Rejects more than log2(cap) ground atoms.
std::vector<Cube> minimalModelsByEnumeration(Formula phi, const Valuation& nu, const BoundedDomain& dom,
                                             std::size_t cap = kOracleCap);

// Level-by-level execution forests: some initial minimal cube whose every
// configuration has a run along w where each node picks a minimal cube of
// its rule body and every length-n frontier configuration is final.
bool acceptsExplicit(const Foaa& a, const DataWord& w, const BoundedDomain& dom);
// Same acceptance but every step may use any model of the rule body, not
// only minimal ones.
bool acceptsAllModels(const Foaa& a, const DataWord& w, const BoundedDomain& dom);

}  // namespace foalt
