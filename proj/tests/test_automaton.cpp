#include <doctest.h>

#include "foalt/automaton.hpp"
#include "foalt/gen.hpp"
#include "foalt/oracle.hpp"
#include "foalt/sexpr.hpp"
#include "foalt/symbolic.hpp"
#include "support.hpp"

using namespace foalt;
using namespace foalt::testing;

namespace {

bool hasDiagnostic(const Foaa& a, const std::string& needle) {
    for (auto& d : validate(a))
        if (d.message.find(needle) != std::string::npos) return true;
    return false;
}

const char* kNoRules = R"((theory EQ)
(events a)
(input (x Id))
(state q0 () :final)
(initial q0)
)";

// Accepts every word: one final state that loops on every event.
Foaa universal(const Foaa& like) {
    Foaa u;
    u.theory = like.theory;
    u.events = like.events;
    u.inputVars = like.inputVars;
    Pred p = mkPred("all", {});
    u.states.push_back({p, true});
    u.initial = fPred(p, {});
    for (auto& e : like.events) u.rules[{"all", e}] = Rule{{}, fPred(p, {})};
    return u;
}

Foaa emptyLanguage(const Foaa& like) {
    Foaa u = universal(like);
    u.initial = fFalse();
    return u;
}

}  // namespace

TEST_CASE("parse the tracking automaton") {
    Foaa a = tracking();
    CHECK(a.theory == TheoryId::LRA);
    REQUIRE(a.states.size() == 2);
    CHECK(a.states[0].pred->name == "q");
    CHECK_FALSE(a.states[0].final);
    CHECK(a.states[1].pred->name == "qf");
    CHECK(a.states[1].final);
    CHECK(a.rules.size() == 2);
    CHECK(validate(a).empty());
}

TEST_CASE("print and parse round trip") {
    for (const char* f : {"tracking.foaa", "one_step.foaa", "late_witness.foaa", "monotone.foaa"}) {
        Foaa a = loadFoaa(corpus(f));
        std::string text = printFoaa(a);
        Foaa b = parseFoaa(text);
        CHECK(printFoaa(b) == text);
        CHECK_SAME(b.initial, a.initial);
        CHECK(b.rules.size() == a.rules.size());
    }
}

TEST_CASE("automaton without rules") {
    Foaa a = parseFoaa(kNoRules);
    CHECK(validate(a).empty());
    CHECK(member(a, {}));
    CHECK_FALSE(member(a, parseDataWord("a{x=v0}", a)));
    CHECK_FALSE(member(a, parseDataWord("a{x=v0};a{x=v1}", a)));
}

TEST_CASE("parse errors carry positions") {
    std::string bad = std::string(kNoRules) + "(rule q0 () a (not q0))\n";
    try {
        parseFoaa(bad);
        FAIL("non-positive body accepted");
    } catch (const ParseError& e) {
        std::string m = e.what();
        CHECK(m.find("positive") != std::string::npos);
        CHECK(m.rfind("6:", 0) == 0);
    }
    CHECK_THROWS_AS(parseFoaa("(theory EQ)\n(events a)\n(input (x Real))\n(state q (Id))\n(initial (q 1))"), Error);
}

TEST_CASE("rules for the same state and event are joined") {
    std::string text = std::string(kNoRules) + "(rule q0 () a (= x v0))\n(rule q0 () a (= x v1))\n";
    Foaa a = parseFoaa(text);
    CHECK(a.rules.size() == 1);
    CHECK(member(a, parseDataWord("a{x=v0}", a)));
    CHECK(member(a, parseDataWord("a{x=v1}", a)));
    CHECK_FALSE(member(a, parseDataWord("a{x=v2}", a)));
}

TEST_CASE("validate") {
    Foaa a = tracking();
    CHECK(validate(a).empty());

    Foaa open = a;
    open.initial = fPred(a.states[0].pred, {tVar(a.inputVars[0])});
    CHECK(hasDiagnostic(open, "initial not a sentence"));

    Foaa shadow = a;
    auto& r = shadow.rules.begin()->second;
    r.params = {a.inputVars[0]};
    CHECK(hasDiagnostic(shadow, "params shadow input vars"));

    Foaa negative = a;
    negative.initial = fNot(fPred(a.states[1].pred, {tNum(0)}));
    CHECK(hasDiagnostic(negative, "not positive"));
}

TEST_CASE("complement of the tracking automaton") {
    Foaa a = tracking();
    Foaa c = complement(a);
    Scope sc = trackingScope();
    CHECK_SAME(c.initial, parse("(forall ((z Real)) (or (not (>= z 0)) (q z)))", sc));
    CHECK(c.state("q")->final);
    CHECK_FALSE(c.state("qf")->final);
    const Rule* r = c.rule("q", "a2");
    REQUIRE(r);
    Subst rename{{r->params[0], tVar(sc.vars["y"])}};
    CHECK_SAME(substitute(r->body, rename), parse("(or (not (< y 0)) (qf (+ x y)))", sc));
    CHECK(validate(c).empty());
    // Missing rules become ⊥ and dualize to ⊤.
    CHECK_SAME(c.rule("qf", "a1")->body, fTrue());
}

TEST_CASE("complement twice is the materialized automaton") {
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        EqGenOptions o;
        o.missingRuleProb = 0.2;
        Foaa a = randomEqAutomaton(rng, o);
        Foaa cc = complement(complement(a));
        Foaa m = materializeRules(a);
        CHECK(printFoaa(cc) == printFoaa(m));
    }
}

TEST_CASE("intersect and union constructions") {
    Foaa a = tracking();
    Foaa b = oneStep();
    b.events = a.events;
    b.rules.clear();
    b.rules[{"q0", "a1"}] = Rule{{}, fAnd(fGe(tVar(b.inputVars[0]), tNum(0)), fPred(b.state("qf")->pred, {}))};

    SUBCASE("disjoint states") {
        Foaa i = intersect(a, b);
        CHECK_SAME(i.initial, fAnd(a.initial, b.initial));
        CHECK(i.states.size() == 4);
        CHECK(i.rules.size() == a.rules.size() + b.rules.size());
        CHECK(validate(i).empty());
        Foaa u = unite(a, b);
        CHECK_SAME(u.initial, fOr(a.initial, b.initial));
    }
    SUBCASE("state name clash") {
        Foaa i = intersect(a, a);
        CHECK(i.states.size() == 4);
        CHECK(i.state("q#1"));
        CHECK(i.state("q#2"));
        CHECK(i.state("qf#1"));
        CHECK(validate(i).empty());
    }
    SUBCASE("incompatible alphabets") {
        CHECK_THROWS_AS(intersect(a, oneStep()), Error);
        CHECK_THROWS_AS(unite(a, loadFoaa(corpus("monotone.foaa"))), Error);
    }
}

TEST_CASE("size bounds") {
    Rng rng(32);
    for (int i = 0; i < 100; ++i) {
        Foaa a = randomEqAutomaton(rng), b = randomEqAutomaton(rng);
        CHECK(intersect(a, b).size() <= a.size() + b.size() + 1);
        CHECK(unite(a, b).size() <= a.size() + b.size() + 1);
        // Missing rules are materialized as ⊤ bodies of size 1.
        std::uint64_t missing = materializeRules(a).rules.size() - a.rules.size();
        CHECK(complement(a).size() <= a.size() + missing);
        CHECK(validate(complement(a)).empty());
    }
}

TEST_CASE("intersection with the universal acceptor and union with the empty language") {
    Rng rng(33);
    BoundedDomain dom = idDomain(3);
    for (int i = 0; i < 40; ++i) {
        Foaa a = randomEqAutomaton(rng);
        Foaa withAll = intersect(a, universal(a));
        Foaa withNone = unite(a, emptyLanguage(a));
        Foaa twice = unite(a, a);
        for (int j = 0; j < 5; ++j) {
            DataWord w = randomIdDataWord(rng, a, 4, 3);
            bool m = member(a, w);
            CHECK(member(withAll, w) == m);
            CHECK(member(withNone, w) == m);
            CHECK(member(twice, w) == m);
            CHECK(acceptsExplicit(a, w, dom) == m);
        }
    }
}

TEST_CASE("property: complement, intersection and union on sampled words") {
    Rng rng(34);
    BoundedDomain dom = idDomain(3);
    for (int i = 0; i < 60; ++i) {
        EqGenOptions o;
        o.missingRuleProb = 0.1;
        Foaa a = randomEqAutomaton(rng, o), b = randomEqAutomaton(rng, o);
        Foaa ca = complement(a), cb = complement(b);
        Foaa i1 = intersect(a, b), u1 = unite(a, b);
        Foaa lhs = complement(i1), rhs = unite(ca, cb);
        for (int j = 0; j < 5; ++j) {
            DataWord w = randomIdDataWord(rng, a, 4, 3);
            bool ma = member(a, w), mb = member(b, w);
            CHECK(ma == acceptsExplicit(a, w, dom));
            CHECK(ma != member(ca, w));
            CHECK(member(i1, w) == (ma && mb));
            CHECK(member(u1, w) == (ma || mb));
            CHECK(member(lhs, w) == member(rhs, w));
        }
    }
}

TEST_CASE("data words") {
    Foaa a = tracking();
    DataWord w = parseDataWord("a1{x=1.5};a2{x=-1/3}", a);
    REQUIRE(w.size() == 2);
    CHECK(w[1].values.at(a.inputVars[0]) == Rational(-1, 3));
    CHECK(printDataWord(w, a) == "a1{x=1.5};a2{x=-1/3}");
    CHECK(parseDataWord("eps", a).empty());
    CHECK_THROWS_AS(parseDataWord("a3{x=1}", a), Error);
    CHECK_THROWS_AS(parseDataWord("a1{x=1", a), Error);
    CHECK_THROWS_AS(readFile(corpus("missing.foaa")), Error);
}
