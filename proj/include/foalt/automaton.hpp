// First-order alternating automata, their text format and boolean closure.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "foalt/logic.hpp"
#include "foalt/theory.hpp"

namespace foalt {

struct StateDecl {
    Pred pred;
    bool final = false;
};

struct Rule {
    std::vector<Var> params;
    Formula body;
};

struct Foaa {
    TheoryId theory = TheoryId::LRA;
    std::vector<std::string> events;
    std::vector<Var> inputVars;
    std::vector<StateDecl> states;
    Formula initial = nullptr;
    // Keyed by (state name, event).
    std::map<std::pair<std::string, std::string>, Rule> rules;

    const StateDecl* state(const std::string& name) const;
    bool isFinal(Pred p) const;  // p may be stamped
    const Rule* rule(const std::string& state, const std::string& event) const;
    bool hasEvent(const std::string& e) const;
    std::set<Pred> predSet() const;
    Sort sort() const { return dataSort(theory); }
    // Sum of the sizes of the initial formula and all rule bodies.
    std::uint64_t size() const;
};

struct Diagnostic {
    std::string message;
    int line = 0;
    int col = 0;
    std::string str() const;
};

Foaa parseFoaa(const std::string& text);
std::string printFoaa(const Foaa& a);
Foaa loadFoaa(const std::string& path);

std::vector<Diagnostic> validate(const Foaa& a);

// Adds explicit `false` bodies for every missing (state, event) pair.
Foaa materializeRules(const Foaa& a);

Foaa intersect(const Foaa& a1, const Foaa& a2);
Foaa unite(const Foaa& a1, const Foaa& a2);
Foaa complement(const Foaa& a);

// ---------------------------------------------------------------------------
// Data words

struct Letter {
    std::string event;
    Valuation values;  // over the unstamped input variables
};
using DataWord = std::vector<Letter>;

// `a{x=1.5};b{x=0}`; the empty word is "" or "eps".
DataWord parseDataWord(const std::string& text, const Foaa& a);
std::string printDataWord(const DataWord& w, const Foaa& a);

std::string readFile(const std::string& path);

}  // namespace foalt
