// Client for an external SMT-LIB 2 solver, one process per query.
#pragma once

#include <string>

#include "foalt/logic.hpp"
#include "foalt/theory.hpp"

namespace foalt {

struct SolverConfig {
    std::string path;  // empty: FOALT_SOLVER, then `z3` on PATH
    unsigned timeoutMs = 2000;
    bool keepTranscript = false;
};

// Path of the solver binary the config resolves to, or "" when none is found.
std::string resolveSolver(const SolverConfig& cfg);
bool solverAvailable(const SolverConfig& cfg);

enum class SolverStatus { Sat, Unsat, Unknown };
const char* solverStatusName(SolverStatus s);

struct SolverQuery {
    Formula assertion = nullptr;
    bool wantModel = false;
    unsigned timeoutMs = 0;  // 0: use the config's
};

struct SolverAnswer {
    SolverStatus status = SolverStatus::Unknown;
    std::string reason;  // Unknown: timeout, io, solver's reason
    Valuation model;     // free variables, when Sat and requested
    std::string transcript;
};

// `UF`, `UFLRA` or `LRA` depending on the sorts and symbols used.
std::string logicFor(Formula f);
// Full script: set-logic, declarations, assert, check-sat and optionally
// get-model. Id is an uninterpreted sort; canonical values are pairwise
// distinct constants; fresh(t1..tk) is a function whose value differs from
// every argument.
std::string smtLibScript(const SolverQuery& q);

SolverAnswer query(const SolverConfig& cfg, const SolverQuery& q);
SolverAnswer checkSatExternal(const SolverConfig& cfg, Formula f, bool wantModel = false);

}  // namespace foalt
