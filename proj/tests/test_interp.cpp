#include <doctest.h>

#include "foalt/gen.hpp"
#include "foalt/interp.hpp"
#include "support.hpp"

using namespace foalt;
using namespace foalt::testing;

namespace {

// The reference triple with z1 bound to the first prefix variable.
std::vector<Formula> referenceTriple(const SymbolicPath& sp) {
    Scope sc = trackingScope();
    Var z1 = sp.prefix.at(0).var;
    sc.vars["z1"] = z1;
    return {parse("(and (q@0 z1) (>= z1 0))", sc), parse("(and (>= x@1 0) (q@1 (+ x@1 z1)) (>= z1 0))", sc),
            fFalse()};
}

void checkGliShape(const Gli& g) {
    for (std::size_t k = 0; k < g.I.size(); ++k) {
        CHECK(isPositive(g.I[k]));
        for (Pred p : predSymbols(g.I[k])) CHECK(p->stamp == static_cast<int>(k));
        Formula j = closeInterpolant(g, k);
        CHECK(freeVars(j).empty());
        for (Pred p : predSymbols(j)) CHECK(p->stamp == -1);
    }
}

}  // namespace

TEST_CASE("witnesses for the tracking automaton") {
    Foaa a = tracking();
    SymbolicPath sp = buildSymbolic(a, {"a1", "a2"});
    WitnessAssignment wa = computeWitnesses(sp);
    REQUIRE(wa.size() == 1);
    CHECK(wa.entries[0].first == sp.prefix[1].var);
    REQUIRE(wa.entries[0].second.isPlain());
    CHECK_SAME(wa.entries[0].second.term, tVar(sp.prefix[0].var));
    WitnessAssignment composed = composeWitnesses(sp, wa);
    CHECK(witnessesRespectSteps(sp, composed));
    CHECK_FALSE(isSatQf(substituteWitnesses(sp.thetaMatrix, composed)));
}

TEST_CASE("witness corner cases") {
    Foaa b = oneStep();
    SymbolicPath eps = buildSymbolic(b, {});
    CHECK(computeWitnesses(eps).size() == 0);
    CHECK_THROWS_AS(computeWitnesses(buildSymbolic(b, {"a"})), Error);

    // ∀z. z ≥ 0 → q(z) with q non-final: every z is a witness, 0 included.
    Foaa late = loadFoaa(corpus("late_witness.foaa"));
    SymbolicPath sp = buildSymbolic(late, {});
    WitnessAssignment wa = computeWitnesses(sp);
    REQUIRE(wa.size() == 1);
    REQUIRE(wa.entries[0].second.isPlain());
    CHECK_SAME(wa.entries[0].second.term, tNum(0));
}

TEST_CASE("project") {
    Scope sc = trackingScope();
    Var z1 = mkVar("z1", Sort::Real);
    sc.vars["z1"] = z1;
    Pred q0 = mkPred("q", {Sort::Real}, 0);
    Formula f = parse("(and (q@0 z1) (>= z1 0))", sc);
    CHECK(equivalentQf(project(f, {q0}, {z1}), f));

    Formula b = parse("(and (q@0 0) (= x 3))", sc);
    CHECK_SAME(project(b, {}, {}), fTrue());

    Scope is;
    is.vars["x"] = mkVar("x", Sort::Id);
    is.vars["y"] = mkVar("y", Sort::Id);
    is.preds["q"] = mkPred("q", {Sort::Id});
    Formula g = project(parse("(and (q x) (= x y))", is), {is.preds["q"]}, {is.vars["y"]});
    CHECK(equivalentQf(g, parse("(q y)", is)));

    SUBCASE("strongest consequence") {
        Formula h = parse("(and (q@0 z1) (or (not (q@0 z1)) (q@1 (+ z1 1))) (>= z1 x))", sc);
        Formula p = project(h, {mkPred("q", {Sort::Real}, 1)}, {z1});
        CHECK(entailsQf(h, p));
        CHECK(equivalentQf(p, parse("(q@1 (+ z1 1))", sc)));
    }
}

TEST_CASE("interpolant for the tracking automaton") {
    Foaa a = tracking();
    EventSequence alpha{"a1", "a2"};
    Gli g = interpolate(a, alpha);
    REQUIRE(g.kind == Gli::Kind::Chain);
    REQUIRE(g.I.size() == 3);
    auto ref = referenceTriple(*g.path);
    for (std::size_t k = 0; k < 3; ++k) CHECK(equivalentQf(g.I[k], ref[k]));
    CHECK(validateGli(a, alpha, g).ok());
    checkGliShape(g);

    SUBCASE("swapped components are rejected") {
        Gli s = g;
        std::swap(s.I[0], s.I[1]);
        CHECK_FALSE(validateGli(a, alpha, s).ok());
    }
    SUBCASE("a trivial last component is rejected") {
        Gli t = g;
        t.I[2] = fTrue();
        CHECK_FALSE(validateGli(a, alpha, t).ok());
    }
    SUBCASE("the reference triple itself is valid") {
        Gli r = g;
        r.I = ref;
        CHECK(validateGli(a, alpha, r).ok());
    }
    SUBCASE("closed interpolants") {
        Scope sc = trackingScope();
        Formula j1 = closeInterpolant(g, 1);
        Formula e1 = parse("(exists ((z Real) (u Real)) (and (>= u 0) (q (+ u z)) (>= z 0)))", sc);
        Formula e2 = parse("(exists ((u Real) (z Real)) (and (>= u 0) (q (+ u z)) (>= z 0)))", sc);
        CHECK((sameShape(j1, e1) || sameShape(j1, e2)));
        CHECK_SAME(closeInterpolant(g, 2), fFalse());
    }
}

TEST_CASE("interpolant on the empty sequence") {
    Foaa b = oneStep();
    Gli g = interpolate(b, {});
    REQUIRE(g.I.size() == 1);
    CHECK(validateGli(b, {}, g).ok());
    CHECK(entailsQf(stamp(b.initial, 0, b.inputVars), g.I[0]));
}

TEST_CASE("rejection interpolant when a witness needs a later input") {
    Foaa late = loadFoaa(corpus("late_witness.foaa"));
    EventSequence alpha{"a"};
    Gli g = interpolate(late, alpha);
    CHECK(g.kind == Gli::Kind::Rejection);
    REQUIRE(g.I.size() == 2);
    CHECK(validateGli(late, alpha, g).ok());
    checkGliShape(g);
    Gli t = g;
    t.I[1] = fTrue();
    CHECK_FALSE(validateGli(late, alpha, t).ok());
}

TEST_CASE("property: interpolants of spurious sequences are valid") {
    Rng rng(51);
    int spurious = 0;
    for (int i = 0; i < 80; ++i) {
        EqGenOptions o;
        o.missingRuleProb = 0.1;
        Foaa a = randomEqAutomaton(rng, o);
        for (int j = 0; j < 3; ++j) {
            EventSequence alpha = randomEventSequence(rng, a.events, 3);
            if (checkEventSequence(a, alpha).accepting) continue;
            ++spurious;
            Gli g = interpolate(a, alpha);
            CHECK(g.I.size() == alpha.size() + 1);
            GliCheck c = validateGli(a, alpha, g);
            CHECK_MESSAGE(c.ok(), c.reason);
            checkGliShape(g);
            if (g.kind == Gli::Kind::Chain) {
                CHECK(entailsQf(substituteWitnesses(g.path->parts[0], g.witnesses), g.I[0]));
                CHECK(equivalentQf(project(g.I[0], predSymbols(g.I[0]), freeVars(g.I[0])), g.I[0]));
            }
        }
    }
    CHECK(spurious > 40);
}
