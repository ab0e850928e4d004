// Timed and register automata, their translations into Foaa, reference
// simulators and language inclusion through emptiness.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "foalt/automaton.hpp"
#include "foalt/emptiness.hpp"

namespace foalt {

// ---------------------------------------------------------------------------
// Timed automata

// x <= c | x >= c | not δ | δ1 and ... and δn (empty conjunction is true)
struct ClockConstraint {
    enum class Kind { Le, Ge, Not, And } kind = Kind::And;
    std::size_t clock = 0;
    Rational bound;
    std::vector<ClockConstraint> kids;

    static ClockConstraint le(std::size_t x, const Rational& c) { return {Kind::Le, x, c, {}}; }
    static ClockConstraint ge(std::size_t x, const Rational& c) { return {Kind::Ge, x, c, {}}; }
    static ClockConstraint negate(ClockConstraint d) { return {Kind::Not, 0, 0, {std::move(d)}}; }
    static ClockConstraint conj(std::vector<ClockConstraint> ds) { return {Kind::And, 0, 0, std::move(ds)}; }
    static ClockConstraint top() { return conj({}); }

    bool holds(const std::vector<Rational>& clocks) const;
};

struct TimedEdge {
    std::size_t from = 0;
    std::string event;
    std::size_t to = 0;
    std::vector<bool> reset;  // per clock
    ClockConstraint guard;
};

struct TimedAutomaton {
    std::vector<std::string> events;
    std::vector<std::string> states;
    std::vector<bool> initial;
    std::vector<bool> final;
    std::vector<std::string> clocks;
    std::vector<TimedEdge> edges;

    std::size_t stateIndex(const std::string& s) const;
};

struct TimedLetter {
    std::string event;
    Rational time;
};
using TimedWord = std::vector<TimedLetter>;

// `a@1.5;b@2`; "" or "eps" is the empty word.
TimedWord parseTimedWord(const std::string& text);
std::string printTimedWord(const TimedWord& w);
// The data word over the single input variable t.
DataWord toDataWord(const TimedWord& w);
// Reads the t values back; fails on letters without t.
TimedWord fromDataWord(const DataWord& w);

TimedAutomaton parseTimed(const std::string& text);
std::string printTimed(const TimedAutomaton& t);

Foaa fromTimed(const TimedAutomaton& t);
// Throws on timestamps that are not strictly increasing and positive.
bool simulateTimed(const TimedAutomaton& t, const TimedWord& w);

// ---------------------------------------------------------------------------
// Register automata

struct RegisterTransition {
    std::size_t from = 0;
    std::size_t reg = 0;  // 0-based
    std::size_t to = 0;
};

struct RegisterAutomaton {
    std::size_t registers = 1;
    std::vector<std::string> states;
    std::size_t initial = 0;
    std::vector<bool> final;
    std::vector<std::optional<std::uint32_t>> init;  // Id constant index or # (nullopt)
    std::vector<RegisterTransition> trans;
};

// Id constant standing for the blank register content #. Words must not use it.
inline constexpr std::uint32_t kBlankIndex = 1000000;

using IdWord = std::vector<std::uint32_t>;
// `v0 v1 v0` or `v0;v1;v0`; "" or "eps" is the empty word.
IdWord parseIdWord(const std::string& text);
std::string printIdWord(const IdWord& w);
// Letters (a, {x = v}).
DataWord toDataWord(const IdWord& w);

RegisterAutomaton parseRegister(const std::string& text);
std::string printRegister(const RegisterAutomaton& r);

Foaa fromRegister(const RegisterAutomaton& r);
bool simulateRegister(const RegisterAutomaton& r, const IdWord& w);

// ---------------------------------------------------------------------------

// Emptiness of ⋂ lhs ∩ complement(rhs). A NonEmpty witness is re-checked by
// membership in every operand; a failed re-check yields Unknown.
Verdict inclusion(const std::vector<Foaa>& lhs, const Foaa& rhs, const EmptinessOptions& opt = {});

}  // namespace foalt
