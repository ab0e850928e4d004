#include <doctest.h>

#include "foalt/frontends.hpp"
#include "foalt/gen.hpp"
#include "support.hpp"

using namespace foalt;
using namespace foalt::testing;

namespace {

// Rule body with its parameters and the input variable reachable by name.
Scope ruleScope(const Foaa& a, const Rule& r) {
    Scope sc;
    for (Var v : r.params) sc.vars[v->name] = v;
    for (Var v : a.inputVars) sc.vars[v->name] = v;
    for (auto& s : a.states) sc.preds[s.pred->name] = s.pred;
    return sc;
}

const char* kStoreMatch = R"((register (r 2) (init # #)
  (state s0 :initial) (state s1) (state s2 :final)
  (trans s0 1 s1) (trans s1 1 s2)))";

TimedAutomaton oneEdge(const std::string& guard) {
    return parseTimed("(timed (events a) (clocks x) (state s0 :initial) (state s1 :final) (edge s0 a s1 :guard " +
                      guard + "))");
}

}  // namespace

TEST_CASE("timed edge translation") {
    TimedAutomaton ta = parseTimed(R"((timed (events a) (clocks x1)
  (state s0 :initial) (state s1 :final)
  (edge s0 a s1 :reset (x1) :guard (<= x1 3))))");
    Foaa a = fromTimed(ta);
    CHECK(validate(a).empty());
    CHECK(a.theory == TheoryId::LRA);
    REQUIRE(a.inputVars.size() == 1);
    CHECK(a.inputVars[0]->name == "t");
    CHECK(a.state("s0")->pred->arity() == 2);
    CHECK_SAME(a.initial, fPred(a.state("s0")->pred, {tNum(0), tNum(0)}));
    const Rule* r = a.rule("s0", "a");
    REQUIRE(r);
    Scope sc = ruleScope(a, *r);
    CHECK_SAME(r->body, parse("(and (> t z) (<= (- t y1) 3) (s1 t t))", sc));
    CHECK(a.rule("s1", "a") == nullptr);
}

TEST_CASE("timed automaton without edges") {
    TimedAutomaton ta =
        parseTimed("(timed (events a) (clocks x) (state s0 :initial :final) (state s1 :initial))");
    Foaa a = fromTimed(ta);
    CHECK(member(a, {}));
    CHECK_FALSE(member(a, toDataWord(parseTimedWord("a@1"))));
    CHECK(simulateTimed(ta, {}));
    ta.final[0] = false;
    CHECK_FALSE(member(fromTimed(ta), {}));
    CHECK_FALSE(simulateTimed(ta, {}));
}

TEST_CASE("simulateTimed") {
    TimedAutomaton ta = oneEdge("(>= x 1)");
    CHECK_FALSE(simulateTimed(ta, parseTimedWord("a@0.5")));
    CHECK(simulateTimed(ta, parseTimedWord("a@2")));
    CHECK_FALSE(simulateTimed(ta, {}));
    CHECK_THROWS_AS(simulateTimed(ta, parseTimedWord("a@2;a@1")), Error);
    CHECK_THROWS_AS(simulateTimed(ta, parseTimedWord("a@0")), Error);

    TimedAutomaton t1 = parseTimed(readFile(corpus("t1.timed")));
    CHECK(simulateTimed(t1, parseTimedWord("a@2;b@2.5")));
    CHECK_FALSE(simulateTimed(t1, parseTimedWord("a@2;b@3.5")));
    CHECK_FALSE(simulateTimed(t1, parseTimedWord("a@1.5")));
    CHECK(member(fromTimed(t1), toDataWord(parseTimedWord("a@2;b@2.5"))));
    CHECK_FALSE(member(fromTimed(t1), toDataWord(parseTimedWord("a@2;b@3.5"))));
}

TEST_CASE("timed words") {
    TimedWord w = parseTimedWord("a@1.5;b@2");
    REQUIRE(w.size() == 2);
    CHECK(w[0].time == Rational(3, 2));
    CHECK(printTimedWord(w) == "a@1.5;b@2");
    CHECK(fromDataWord(toDataWord(w))[1].time == 2);
    CHECK(parseTimedWord("eps").empty());
    CHECK_THROWS_AS(parseTimedWord("a1.5"), Error);
}

TEST_CASE("timed and register formats round trip") {
    TimedAutomaton t1 = parseTimed(readFile(corpus("t1.timed")));
    CHECK(printTimed(parseTimed(printTimed(t1))) == printTimed(t1));
    RegisterAutomaton r = parseRegister(kStoreMatch);
    CHECK(printRegister(parseRegister(printRegister(r))) == printRegister(r));
    CHECK_THROWS_AS(parseRegister("(register (r 2) (init v0 v0) (state s0 :initial))"), Error);
}

TEST_CASE("register transition translation") {
    RegisterAutomaton ra = parseRegister(R"((register (r 2) (init # #)
  (state s0 :initial) (state s1 :final) (trans s0 1 s1)))");
    Foaa a = fromRegister(ra);
    CHECK(validate(a).empty());
    CHECK(a.theory == TheoryId::EQ);
    const Rule* r = a.rule("s0", a.events.at(0));
    REQUIRE(r);
    Scope sc = ruleScope(a, *r);
    CHECK_SAME(r->body,
               parse("(or (and (= y1 x) (s1 y1 y2)) (and (not (= x y1)) (not (= x y2)) (s1 x y2)))", sc));
    CHECK(isQuantifierFree(r->body));
}

TEST_CASE("register automaton without transitions") {
    RegisterAutomaton ra = parseRegister("(register (r 1) (init #) (state s0 :initial :final))");
    Foaa a = fromRegister(ra);
    CHECK(member(a, {}));
    CHECK(simulateRegister(ra, {}));
    CHECK_FALSE(member(a, toDataWord(parseIdWord("v0"))));
    CHECK_FALSE(simulateRegister(ra, parseIdWord("v0")));
    ra.final[0] = false;
    CHECK_FALSE(member(fromRegister(ra), {}));
    CHECK_FALSE(simulateRegister(ra, {}));
}

TEST_CASE("simulateRegister") {
    RegisterAutomaton ra = parseRegister(kStoreMatch);
    Foaa a = fromRegister(ra);
    // v0 is stored in register 1, then matched.
    CHECK(simulateRegister(ra, parseIdWord("v0 v0")));
    // v1 is not stored anywhere, so it overwrites register 1.
    CHECK(simulateRegister(ra, parseIdWord("v0 v1")));
    CHECK_FALSE(simulateRegister(ra, parseIdWord("v0")));
    CHECK_FALSE(simulateRegister(ra, parseIdWord("v0 v1 v2")));
    for (const char* w : {"v0 v0", "v0 v1", "v0", "v0 v1 v2"})
        CHECK(member(a, toDataWord(parseIdWord(w))) == simulateRegister(ra, parseIdWord(w)));

    SUBCASE("initial register contents") {
        RegisterAutomaton m = parseRegister(R"((register (r 2) (init v0 #)
  (state s0 :initial) (state s1 :final) (trans s0 1 s1)))");
        CHECK(simulateRegister(m, parseIdWord("v0")));
        CHECK(simulateRegister(m, parseIdWord("v1")));
        RegisterAutomaton other = parseRegister(R"((register (r 2) (init v0 #)
  (state s0 :initial) (state s1 :final) (trans s0 2 s1)))");
        // v0 sits in register 1: neither a match on register 2 nor a store.
        CHECK_FALSE(simulateRegister(other, parseIdWord("v0")));
        CHECK(simulateRegister(other, parseIdWord("v1")));
        for (auto* r : {&m, &other})
            for (const char* w : {"v0", "v1"})
                CHECK(member(fromRegister(*r), toDataWord(parseIdWord(w))) == simulateRegister(*r, parseIdWord(w)));
    }
}

TEST_CASE("id words") {
    CHECK(parseIdWord("v0 v1 v0") == IdWord{0, 1, 0});
    CHECK(parseIdWord("v0;v1") == IdWord{0, 1});
    CHECK(printIdWord({0, 2}) == "v0 v2");
    CHECK(parseIdWord("eps").empty());
    CHECK_THROWS_AS(parseIdWord("w0"), Error);
}

TEST_CASE("inclusion") {
    Foaa b = oneStep();
    CHECK(inclusion({b}, b).kind == VerdictKind::Empty);

    Foaa tight = b;
    Var x = b.inputVars[0];
    tight.rules.begin()->second.body = fAnd(fGe(tVar(x), tNum(1)), fPred(b.state("qf")->pred, {}));
    Verdict v = inclusion({b}, tight);
    REQUIRE(v.kind == VerdictKind::NonEmpty);
    REQUIRE(v.witness.size() == 1);
    Rational val = v.witness[0].values.at(x);
    CHECK(val >= 0);
    CHECK(val < 1);
    CHECK(member(b, v.witness));
    CHECK_FALSE(member(tight, v.witness));
    CHECK(inclusion({tight}, b).kind == VerdictKind::Empty);

    CHECK_THROWS_AS(inclusion({b}, tracking()), Error);
}

TEST_CASE("timed inclusion") {
    TimedAutomaton t1 = parseTimed(readFile(corpus("t1.timed")));
    TimedAutomaton t2 = parseTimed(readFile(corpus("t2.timed")));
    TimedAutomaton t3 = parseTimed(readFile(corpus("t2_tight.timed")));
    CHECK(inclusion({fromTimed(t1)}, fromTimed(t2)).kind == VerdictKind::Empty);
    Verdict v = inclusion({fromTimed(t1)}, fromTimed(t3));
    REQUIRE(v.kind == VerdictKind::NonEmpty);
    TimedWord w = fromDataWord(v.witness);
    CHECK(simulateTimed(t1, w));
    CHECK_FALSE(simulateTimed(t3, w));

    Rng rng(81);
    for (int i = 0; i < 100; ++i) {
        TimedWord s = randomTimedWord(rng, t1, 4);
        if (simulateTimed(t1, s)) CHECK(simulateTimed(t2, s));
    }
}

TEST_CASE("property: timed translation agrees with the simulator") {
    Rng rng(82);
    for (int i = 0; i < 40; ++i) {
        TimedAutomaton ta = randomTimed(rng);
        Foaa a = fromTimed(ta);
        CHECK(validate(a).empty());
        for (auto& [key, r] : a.rules) CHECK(isQuantifierFree(r.body));
        for (int j = 0; j < 5; ++j) {
            TimedWord w = randomTimedWord(rng, ta, 4);
            CHECK(member(a, toDataWord(w)) == simulateTimed(ta, w));
        }
    }
}

TEST_CASE("property: register translation agrees with the simulator") {
    Rng rng(83);
    for (int i = 0; i < 80; ++i) {
        RegisterAutomaton ra = randomRegister(rng);
        Foaa a = fromRegister(ra);
        CHECK(validate(a).empty());
        for (auto& [key, r] : a.rules) CHECK(isQuantifierFree(r.body));
        for (int j = 0; j < 5; ++j) {
            IdWord w = randomIdWord(rng, 4, 3);
            CHECK(member(a, toDataWord(w)) == simulateRegister(ra, w));
        }
    }
}
