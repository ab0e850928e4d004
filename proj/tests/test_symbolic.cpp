#include <doctest.h>

#include "foalt/gen.hpp"
#include "foalt/oracle.hpp"
#include "foalt/symbolic.hpp"
#include "support.hpp"

using namespace foalt;
using namespace foalt::testing;

namespace {

Foaa nullary(bool final) {
    std::string text = "(theory LRA)\n(events a)\n(input (x Real))\n(state q ()" + std::string(final ? " :final" : "") +
                       ")\n(initial q)\n";
    return parseFoaa(text);
}

const char* kThetaTracking =
    "(exists ((z1 Real)) (forall ((z2 Real)) (and (>= z1 0) (q@0 z1)"
    " (=> (q@0 z1) (and (>= x@1 0) (=> (>= z2 z1) (q@1 (+ x@1 z2)))))"
    " (=> (q@1 (+ x@1 z2)) (and (< (+ x@1 z2) 0) (qf@2 (+ x@2 x@1 z2)))))))";

const char* kUpsilonTracking =
    "(exists ((z1 Real)) (forall ((z2 Real)) (and (>= z1 0) (>= x@1 0) (=> (>= z2 z1) (< (+ x@1 z2) 0)))))";

}  // namespace

TEST_CASE("path formulas") {
    Foaa a = tracking();
    Scope sc = trackingScope();
    CHECK_SAME(pathFormula(a, {}), stamp(a.initial, 0, a.inputVars));
    CHECK(sameShape(pathFormula(a, {"a1", "a2"}),
                    parse("(and (exists ((z Real)) (and (>= z 0) (q@0 z)))"
                          " (forall ((y Real)) (=> (q@0 y) (and (>= x@1 0) (forall ((z Real)) (=> (>= z y) (q@1 (+ x@1 z)))))))"
                          " (forall ((y Real)) (not (qf@0 y)))"
                          " (forall ((y Real)) (=> (q@1 y) (and (< y 0) (qf@2 (+ x@2 y)))))"
                          " (forall ((y Real)) (not (qf@1 y))))",
                          sc)));
    CHECK(sameShape(pathFormula(a, {"a2"}),
                    parse("(and (exists ((z Real)) (and (>= z 0) (q@0 z)))"
                          " (forall ((y Real)) (=> (q@0 y) (and (< y 0) (qf@1 (+ x@1 y)))))"
                          " (forall ((y Real)) (not (qf@0 y))))",
                          sc)));
    CHECK_THROWS_AS(pathFormula(a, {"b"}), Error);
}

TEST_CASE("acceptance formulas") {
    Foaa a = tracking();
    Scope sc = trackingScope();
    CHECK(sameShape(acceptanceFormula(a, {"a1", "a2"}),
                    fAnd(pathFormula(a, {"a1", "a2"}), parse("(forall ((y Real)) (not (q@2 y)))", sc))));
    Foaa f = nullary(true);
    Pred q0 = mkPred("q", {}, 0);
    CHECK_SAME(acceptanceFormula(f, {}), fPred(q0, {}));
    Foaa n = nullary(false);
    Formula acc = acceptanceFormula(n, {});
    CHECK_SAME(acc, fAnd(fPred(q0, {}), fNot(fPred(q0, {}))));
    CHECK_FALSE(isSatQf(acc));

    // qf has no rule, so a second step has no successor.
    Foaa b = oneStep();
    CHECK(isSatQf(acceptanceFormula(b, {"a"})));
    CHECK_FALSE(isSatQf(acceptanceFormula(b, {"a", "a"})));
}

TEST_CASE("theta and upsilon of the tracking automaton") {
    Foaa a = tracking();
    Scope sc = trackingScope();
    SymbolicPath sp = buildSymbolic(a, {"a1", "a2"});
    REQUIRE(sp.prefix.size() == 2);
    CHECK_FALSE(sp.prefix[0].universal);
    CHECK(sp.prefix[1].universal);
    CHECK(sp.xi == std::vector<int>{0, 1});
    CHECK(sameShape(sp.theta(), parse(kThetaTracking, sc)));
    CHECK(sameShape(sp.upsilon(), parse(kUpsilonTracking, sc)));
    CHECK_FALSE(hasPredicates(sp.upsilonMatrix));
    CHECK_SAME(eliminateUpsilon(sp), fFalse());
}

TEST_CASE("theta with an unsatisfiable initial formula") {
    Foaa a = tracking();
    a.initial = fFalse();
    SymbolicPath sp = buildSymbolic(a, {"a1"});
    CHECK(sp.prefix.empty());
    CHECK_SAME(sp.thetaMatrix, fFalse());
    CHECK_FALSE(checkEventSequence(a, {"a1"}).accepting);
}

TEST_CASE("every predicate occurrence is instantiated") {
    Foaa a = parseFoaa(R"((theory LRA)
(events a)
(input (x Real))
(state q (Real))
(state qf () :final)
(initial (and (q 0) (q 1)))
(rule q ((y Real)) a (and (>= x y) qf))
)");
    SymbolicPath sp = buildSymbolic(a, {"a"});
    CHECK(sp.atoms[0].size() == 2);
    CHECK(conjuncts(sp.parts[1]).size() == 2);
    CHECK(sameShape(sp.upsilon(), parse("(and (>= x@1 0) (>= x@1 1))", trackingScope())));
}

TEST_CASE("upsilon on the empty sequence") {
    CHECK_SAME(buildSymbolic(nullary(true), {}).upsilon(), fTrue());
    CHECK_SAME(buildSymbolic(nullary(false), {}).upsilon(), fFalse());
}

TEST_CASE("checkEventSequence") {
    Foaa a = tracking();
    CHECK_FALSE(checkEventSequence(a, {"a1", "a2"}).accepting);
    CHECK_FALSE(checkEventSequence(a, {"a2"}).accepting);
    CHECK_FALSE(checkEventSequence(a, {"a1", "a1", "a2"}).accepting);

    Foaa b = oneStep();
    SequenceCheck c = checkEventSequence(b, {"a"});
    REQUIRE(c.accepting);
    REQUIRE(c.word.size() == 1);
    CHECK(c.word[0].event == "a");
    CHECK(c.word[0].values.at(b.inputVars[0]) >= 0);
    CHECK(member(b, c.word));
    CHECK_FALSE(checkEventSequence(b, {}).accepting);
    CHECK_FALSE(checkEventSequence(b, {"a", "a"}).accepting);

    Foaa late = loadFoaa(corpus("late_witness.foaa"));
    CHECK_FALSE(checkEventSequence(late, {"a"}).accepting);
}

TEST_CASE("member") {
    Foaa a = tracking();
    CHECK_FALSE(member(a, parseDataWord("a1{x=1};a2{x=0}", a)));
    Foaa b = oneStep();
    CHECK(member(b, parseDataWord("a{x=1}", b)));
    CHECK(member(b, parseDataWord("a{x=0}", b)));
    CHECK_FALSE(member(b, parseDataWord("a{x=-1/2}", b)));
    Foaa dead = b;
    dead.initial = fFalse();
    CHECK_FALSE(member(dead, {}));
    CHECK_FALSE(member(dead, parseDataWord("a{x=1}", b)));

    Foaa m = loadFoaa(corpus("monotone.foaa"));
    CHECK_FALSE(member(m, parseDataWord("inc{x=1};chk{x=0}", m)));
    CHECK_FALSE(member(m, parseDataWord("inc{x=-1};chk{x=0}", m)));
}

TEST_CASE("event sequences") {
    CHECK(parseEventSequence("a1.a2") == EventSequence{"a1", "a2"});
    CHECK(parseEventSequence("a1 a2") == EventSequence{"a1", "a2"});
    CHECK(parseEventSequence("eps").empty());
    CHECK(eventSequenceString({"a1", "a2"}) == "a1.a2");
}

TEST_CASE("property: accepting sequences come with accepted words") {
    Rng rng(41);
    int accepting = 0;
    for (int i = 0; i < 80; ++i) {
        EqGenOptions o;
        o.missingRuleProb = 0.1;
        Foaa a = randomEqAutomaton(rng, o);
        for (int j = 0; j < 3; ++j) {
            EventSequence alpha = randomEventSequence(rng, a.events, 3);
            SymbolicPath sp = buildSymbolic(a, alpha);
            for (std::size_t k = 1; k < sp.xi.size(); ++k) CHECK(sp.xi[k - 1] <= sp.xi[k]);
            CHECK(sp.xi.size() == sp.prefix.size());
            CHECK_FALSE(hasPredicates(sp.upsilonMatrix));
            SequenceCheck c = checkEventSequence(a, alpha);
            if (!c.accepting) continue;
            ++accepting;
            CHECK(c.word.size() == alpha.size());
            CHECK(member(a, c.word));
        }
    }
    CHECK(accepting > 20);
}

TEST_CASE("property: satisfiability of the acceptance formula matches upsilon") {
    Rng rng(42);
    for (int i = 0; i < 40; ++i) {
        EqGenOptions o;
        o.missingRuleProb = 0.1;
        Foaa a = randomEqAutomaton(rng, o);
        for (int j = 0; j < 2; ++j) {
            EventSequence alpha = randomEventSequence(rng, a.events, 3);
            CHECK(someWordAccepted(a, alpha) == checkEventSequence(a, alpha).accepting);
        }
    }
}

TEST_CASE("property: member agrees with explicit executions") {
    Rng rng(43);
    BoundedDomain dom = idDomain(3);
    for (int i = 0; i < 60; ++i) {
        Foaa a = randomEqAutomaton(rng);
        for (int j = 0; j < 5; ++j) {
            DataWord w = randomIdDataWord(rng, a, 4, 3);
            CHECK(member(a, w) == acceptsExplicit(a, w, dom));
        }
    }
}
