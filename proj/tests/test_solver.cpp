#include <doctest.h>

#include "foalt/gen.hpp"
#include "foalt/solver.hpp"
#include "foalt/symbolic.hpp"
#include "support.hpp"

using namespace foalt;
using namespace foalt::testing;

namespace {

SolverConfig config() {
    SolverConfig s;
    s.timeoutMs = 5000;
    return s;
}

}  // namespace

TEST_CASE("script shape") {
    Scope sc = trackingScope();
    SolverQuery q;
    q.assertion = parse("(and (q@0 x) (< x 0))", sc);
    q.wantModel = true;
    std::string s = smtLibScript(q);
    CHECK(s.find("(set-logic UFLRA)") != std::string::npos);
    CHECK(s.find("(check-sat)") != std::string::npos);
    CHECK(s.find("(get-model)") != std::string::npos);
    CHECK(logicFor(parse("(< x 0)", sc)) == "LRA");
    Scope is;
    is.vars["u"] = mkVar("u", Sort::Id);
    is.preds["p"] = mkPred("p", {Sort::Id});
    CHECK(logicFor(parse("(and (p u) (not (= u v1)))", is)) == "UF");
}

TEST_CASE("missing solver binary") {
    SolverConfig s;
    s.path = "/nonexistent/solver";
    CHECK_FALSE(solverAvailable(s));
    SolverAnswer a = checkSatExternal(s, fTrue());
    CHECK(a.status == SolverStatus::Unknown);
    CHECK(a.reason.rfind("io", 0) == 0);
}

TEST_CASE("external solver answers") {
    SolverConfig s = config();
    if (!solverAvailable(s)) {
        WARN_MESSAGE(false, "no SMT solver found; skipping");
        return;
    }
    Scope sc = trackingScope();
    CHECK(checkSatExternal(s, parse("(and (< x 0) (> x 1))", sc)).status == SolverStatus::Unsat);
    SolverAnswer m = checkSatExternal(s, parse("(and (< x 1) (> x 0))", sc), true);
    REQUIRE(m.status == SolverStatus::Sat);
    Valuation nu = m.model;
    CHECK(evaluate(parse("(and (< x 1) (> x 0))", sc), nu));

    SymbolicPath sp = buildSymbolic(tracking(), {"a1", "a2"});
    CHECK(checkSatExternal(s, sp.upsilon()).status == SolverStatus::Unsat);
    CHECK(checkSatExternal(s, sp.theta()).status != SolverStatus::Sat);

    Scope is;
    is.vars["u"] = mkVar("u", Sort::Id);
    is.vars["w"] = mkVar("w", Sort::Id);
    CHECK(checkSatExternal(s, parse("(= v0 v1)", is)).status == SolverStatus::Unsat);
    Formula fresh = fEq(tVar(is.vars["u"]), tFresh({tVar(is.vars["u"]), tVar(is.vars["w"])}));
    CHECK(checkSatExternal(s, fresh).status == SolverStatus::Unsat);
}

TEST_CASE("tight timeout on a quantified coverage query") {
    SolverConfig s = config();
    if (!solverAvailable(s)) return;
    s.timeoutMs = 1;
    Scope sc = trackingScope();
    Formula l1 = parse("(exists ((a Real)) (forall ((b Real)) (or (< b a) (q (+ a b)))))", sc);
    Formula l2 = parse("(exists ((c Real)) (and (q c) (>= c 5)))", sc);
    SolverAnswer ans = checkSatExternal(s, fAnd(l1, fNot(l2)));
    // Any answer is acceptable; an Unknown must say why.
    if (ans.status == SolverStatus::Unknown) CHECK_FALSE(ans.reason.empty());
}

TEST_CASE("property: external solver agrees with the built-in engine") {
    SolverConfig s = config();
    if (!solverAvailable(s)) return;
    Rng rng(91);
    Var x = mkVar("x", Sort::Real), y = mkVar("y", Sort::Real), z = mkVar("z", Sort::Real);
    Var a = mkVar("a", Sort::Id), b = mkVar("b", Sort::Id);
    for (int i = 0; i < 40; ++i) {
        Formula f = i % 2 ? randomLraQf(rng, {x, y, z}, 3) : randomEqQf(rng, {a, b}, 3, 3);
        SolverAnswer ans = checkSatExternal(s, f);
        REQUIRE(ans.status != SolverStatus::Unknown);
        CHECK((ans.status == SolverStatus::Sat) == isSatQf(f));
    }
}
