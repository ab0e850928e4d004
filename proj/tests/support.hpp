// Shared fixtures for the unit tests and the acceptance binary.
#pragma once

#include <string>
#include <vector>

#include "foalt/automaton.hpp"
#include "foalt/formula_io.hpp"
#include "foalt/oracle.hpp"
#include "foalt/symbolic.hpp"

// doctest stringifies operands with an unqualified toString, which finds
// foalt::toString through ADL; compare printed forms instead.
#define CHECK_SAME(a, b) CHECK(::foalt::toString(a) == ::foalt::toString(b))

namespace foalt::testing {

inline std::string corpus(const std::string& name) { return std::string(FOALT_CORPUS_DIR) + "/" + name; }

inline Foaa tracking() { return loadFoaa(corpus("tracking.foaa")); }
inline Foaa oneStep() { return loadFoaa(corpus("one_step.foaa")); }

// Scope with the tracking automaton's symbols; `x@1`, `q@0` etc. resolve to
// their stamped versions.
inline Scope trackingScope() {
    Scope sc;
    sc.vars["x"] = mkVar("x", Sort::Real);
    sc.vars["y"] = mkVar("y", Sort::Real);
    sc.preds["q"] = mkPred("q", {Sort::Real});
    sc.preds["qf"] = mkPred("qf", {Sort::Real});
    return sc;
}

inline Formula parse(const std::string& text, const Scope& sc) { return parseFormula(text, sc); }

// Structural equality modulo bound-variable names and the order of
// conjuncts and disjuncts.
inline bool sameShape(Formula a, Formula b) {
    return acNormalize(alphaNormalize(a)) == acNormalize(alphaNormalize(b));
}

// Existence of an accepted word with the given event sequence, over the
// domain v0..v(2+n); values beyond that only add fresh copies.
inline bool someWordAccepted(const Foaa& a, const EventSequence& alpha) {
    std::size_t n = alpha.size();
    BoundedDomain dom = idDomain(3 + n);
    std::vector<std::size_t> idx(n, 0);
    Var x = a.inputVars.at(0);
    for (;;) {
        DataWord w;
        for (std::size_t k = 0; k < n; ++k) w.push_back({alpha[k], {{x, dom[idx[k]]}}});
        if (acceptsExplicit(a, w, dom)) return true;
        std::size_t k = 0;
        while (k < n && ++idx[k] == dom.size()) idx[k++] = 0;
        if (k == n) return false;
    }
}

}  // namespace foalt::testing
