#include <doctest.h>

#include <algorithm>

#include "foalt/gen.hpp"
#include "foalt/oracle.hpp"
#include "support.hpp"

using namespace foalt;
using namespace foalt::testing;

namespace {

std::set<std::string> render(const std::vector<Cube>& cubes) {
    std::set<std::string> out;
    for (auto& c : cubes) {
        std::string s;
        for (auto& cfg : c) s += cfg.str() + " ";
        out.insert(s);
    }
    return out;
}

}  // namespace

TEST_CASE("minimal models of a propositional formula") {
    Scope sc;
    for (const char* n : {"q1", "q2", "q3"}) sc.preds[n] = mkPred(n, {});
    auto models = minimalModels(parse("(or (and q1 q2) q3)", sc), {}, idDomain(1));
    CHECK(render(models) == std::set<std::string>{"q1() q2() ", "q3() "});
    CHECK(minimalModels(fFalse(), {}, idDomain(1)).empty());
    auto top = minimalModels(fTrue(), {}, idDomain(1));
    REQUIRE(top.size() == 1);
    CHECK(top[0].empty());
    // Non-minimal disjuncts are dropped.
    CHECK(render(minimalModels(parse("(or q1 (and q1 q2))", sc), {}, idDomain(1))) == std::set<std::string>{"q1() "});
}

TEST_CASE("minimal models with quantifiers over a bounded domain") {
    Scope sc = trackingScope();
    BoundedDomain dom{Rational(0), Rational(1)};
    auto models = minimalModels(parse("(exists ((z Real)) (and (>= z 0) (q z)))", sc), {}, dom);
    CHECK(render(models) == std::set<std::string>{"q(0) ", "q(1) "});
    auto all = minimalModels(parse("(forall ((z Real)) (or (< z 1) (q z)))", sc), {}, dom);
    CHECK(render(all) == std::set<std::string>{"q(1) "});
    Var x = sc.vars["x"];
    auto free = minimalModels(parse("(q (+ x 1))", sc), {{x, Rational(1)}}, dom);
    CHECK(render(free) == std::set<std::string>{"q(2) "});
    CHECK_THROWS_AS(minimalModels(parse("(not (q 0))", sc), {}, dom), Error);
}

TEST_CASE("enumeration agrees with the grounded computation") {
    Rng rng(71);
    Pred p = mkPred("p", {Sort::Id}), r = mkPred("r", {Sort::Id, Sort::Id});
    Var a = mkVar("a", Sort::Id);
    BoundedDomain dom = idDomain(2);
    for (int i = 0; i < 200; ++i) {
        Formula f = randomEqFormula(rng, {p, r}, {a}, 3, 2, true);
        for (auto& va : dom) {
            Valuation nu{{a, va}};
            CHECK(render(minimalModels(f, nu, dom)) == render(minimalModelsByEnumeration(f, nu, dom)));
        }
    }
}

TEST_CASE("size cap") {
    Pred r = mkPred("r", {Sort::Id, Sort::Id});
    Var u = mkVar("u", Sort::Id), v = mkVar("v", Sort::Id);
    Formula f = fExists(u, fExists(v, fPred(r, {tVar(u), tVar(v)})));
    CHECK_THROWS_AS(minimalModelsByEnumeration(f, {}, idDomain(6), 1 << 10), Error);
    CHECK_THROWS_AS(minimalModels(fForall(u, fForall(v, fOr(fPred(r, {tVar(u), tVar(v)}), fPred(r, {tVar(v), tVar(u)})))),
                                  {}, idDomain(5), 1 << 9),
                    Error);
    CHECK(minimalModels(f, {}, idDomain(6)).size() == 36);
}

TEST_CASE("explicit acceptance") {
    Foaa f = parseFoaa("(theory LRA)\n(events a)\n(input (x Real))\n(state qf () :final)\n(initial qf)\n");
    CHECK(acceptsExplicit(f, {}, {Rational(0)}));

    Foaa b = oneStep();
    BoundedDomain dom{Rational(0), Rational(1)};
    CHECK(acceptsExplicit(b, parseDataWord("a{x=1}", b), dom));
    CHECK_FALSE(acceptsExplicit(b, {}, dom));
    CHECK_FALSE(acceptsExplicit(b, parseDataWord("a{x=1};a{x=1}", b), dom));

    Foaa a = tracking();
    for (int v1 = 0; v1 <= 1; ++v1)
        for (int v2 = 0; v2 <= 1; ++v2) {
            DataWord w = parseDataWord("a1{x=" + std::to_string(v1) + "};a2{x=" + std::to_string(v2) + "}", a);
            CHECK_FALSE(acceptsExplicit(a, w, dom));
            CHECK_FALSE(acceptsAllModels(a, w, dom));
        }
}

TEST_CASE("property: minimal-model and all-model acceptance agree") {
    Rng rng(72);
    BoundedDomain dom = idDomain(3);
    int accepted = 0;
    for (int i = 0; i < 60; ++i) {
        EqGenOptions o;
        o.missingRuleProb = 0.1;
        Foaa a = randomEqAutomaton(rng, o);
        for (int j = 0; j < 4; ++j) {
            DataWord w = randomIdDataWord(rng, a, 3, 3);
            bool m = acceptsExplicit(a, w, dom);
            accepted += m;
            CHECK(acceptsAllModels(a, w, dom) == m);
        }
    }
    CHECK(accepted > 10);
}

namespace {

// Stamped cubes I_T of every execution forest over w, one cube per level,
// each configuration picking a minimal cube of its rule body.
void executions(const Foaa& a, const DataWord& w, const BoundedDomain& dom, std::size_t i, const Cube& level,
                std::set<std::string> acc, std::set<std::set<std::string>>& out) {
    for (auto& c : level) acc.insert(Config{mkPred(c.pred->name, c.pred->argSorts, static_cast<int>(i)), c.args}.str());
    if (i == w.size()) {
        out.insert(acc);
        return;
    }
    std::vector<std::vector<Cube>> choices;
    for (auto& c : level) {
        const Rule* r = a.rule(c.pred->name, w[i].event);
        if (!r) return;
        Valuation nu = w[i].values;
        for (std::size_t k = 0; k < r->params.size(); ++k) nu[r->params[k]] = c.args[k];
        choices.push_back(minimalModels(r->body, nu, dom));
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    for (auto& ch : choices)
        if (ch.empty()) return;
    for (;;) {
        Cube next;
        for (std::size_t k = 0; k < choices.size(); ++k) next.insert(choices[k][idx[k]].begin(), choices[k][idx[k]].end());
        executions(a, w, dom, i + 1, next, acc, out);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
        if (k == idx.size()) return;
    }
}

std::set<std::set<std::string>> minimalSets(const std::set<std::set<std::string>>& all) {
    std::set<std::set<std::string>> out;
    for (auto& s : all) {
        bool minimal = true;
        for (auto& t : all)
            if (t != s && std::includes(s.begin(), s.end(), t.begin(), t.end())) minimal = false;
        if (minimal) out.insert(s);
    }
    return out;
}

}  // namespace

TEST_CASE("property: minimal models of the path formula are the minimal execution cubes") {
    Rng rng(73);
    BoundedDomain dom = idDomain(3);
    int nonTrivial = 0;
    for (int i = 0; i < 60; ++i) {
        EqGenOptions o;
        o.maxStates = 2;
        o.maxArity = 1;
        o.missingRuleProb = 0.1;
        Foaa a = randomEqAutomaton(rng, o);
        for (int j = 0; j < 3; ++j) {
            DataWord w = randomIdDataWord(rng, a, 2, 3);
            EventSequence alpha;
            Valuation nu;
            for (std::size_t k = 0; k < w.size(); ++k) {
                alpha.push_back(w[k].event);
                for (auto& [x, v] : w[k].values) nu[mkVar(x->name, x->sort, static_cast<int>(k + 1))] = v;
            }
            std::set<std::set<std::string>> traces;
            for (auto& c0 : minimalModels(a.initial, {}, dom)) executions(a, w, dom, 0, c0, {}, traces);
            // The path formula has negative predicate occurrences, so only
            // the enumeration route applies.
            std::set<std::set<std::string>> models;
            for (auto& c : minimalModelsByEnumeration(pathFormula(a, alpha), nu, dom, std::size_t(1) << 20)) {
                std::set<std::string> s;
                for (auto& cfg : c) s.insert(cfg.str());
                models.insert(s);
            }
            nonTrivial += !models.empty() && !w.empty();
            CHECK(models == minimalSets(traces));
        }
    }
    CHECK(nonTrivial > 20);
}
