#include <doctest.h>

#include "foalt/gen.hpp"
#include "foalt/logic.hpp"
#include "support.hpp"

using namespace foalt;
using namespace foalt::testing;

namespace {

Scope idScope() {
    Scope sc;
    sc.vars["x"] = mkVar("x", Sort::Id);
    sc.vars["y"] = mkVar("y", Sort::Id);
    sc.preds["q"] = mkPred("q", {Sort::Id});
    sc.preds["p"] = mkPred("p", {Sort::Id});
    sc.preds["r"] = mkPred("r", {Sort::Id});
    return sc;
}

VarSet vars(std::initializer_list<Var> vs) { return VarSet(vs); }

Interpretation randomInterp(Rng& rng, const std::vector<Pred>& preds, const BoundedDomain& dom) {
    Interpretation I;
    std::bernoulli_distribution coin(0.5);
    for (Pred p : preds) {
        auto& rel = I[p];
        std::vector<std::vector<Rational>> tuples{{}};
        for (std::size_t i = 0; i < p->arity(); ++i) {
            std::vector<std::vector<Rational>> next;
            for (auto& t : tuples)
                for (auto& d : dom) {
                    next.push_back(t);
                    next.back().push_back(d);
                }
            tuples = std::move(next);
        }
        for (auto& t : tuples)
            if (coin(rng)) rel.insert(t);
    }
    return I;
}

}  // namespace

TEST_CASE("freeVars") {
    Scope sc = idScope();
    Var x = sc.vars["x"], y = sc.vars["y"];
    CHECK(freeVars(parse("(q x)", sc)) == vars({x}));
    Scope tr = trackingScope();
    CHECK(freeVars(parse("(exists ((z Real)) (and (>= z 0) (q z)))", tr)).empty());
    CHECK(freeVars(parse("(and (= x y) (forall ((x Id)) (q x)))", sc)) == vars({x, y}));
}

TEST_CASE("substitute") {
    Scope sc = trackingScope();
    Var y = sc.vars["y"];
    Var z2 = mkVar("z2", Sort::Real);
    sc.vars["z2"] = z2;
    Formula psi = parse("(and (< y 0) (qf (+ x y)))", sc);
    Formula got = substitute(psi, {{y, tAdd(tVar(mkVar("x", Sort::Real, 1)), tVar(z2))}});
    CHECK_SAME(got, parse("(and (< (+ x@1 z2) 0) (qf (+ x x@1 z2)))", sc));

    CHECK_SAME(substitute(psi, {}), psi);

    SUBCASE("capture avoidance") {
        Var x = sc.vars["x"];
        Formula f = parse("(forall ((x Real)) (q (+ x y)))", sc);
        Formula g = substitute(f, {{y, tVar(x)}});
        REQUIRE(g->kind == FKind::Forall);
        CHECK(g->bound != x);
        CHECK(freeVars(g) == vars({x}));
        CHECK(alphaEquivalent(g, parse("(forall ((w Real)) (q (+ w x)))", sc)));
    }

    SUBCASE("sort mismatch") {
        Var u = mkVar("u", Sort::Id);
        CHECK_THROWS_AS(substitute(parse("(< y 0)", sc), {{y, tVar(u)}}), Error);
    }
}

TEST_CASE("prenex") {
    Scope sc = idScope();
    Formula qf = parse("(and (q x) (not (= x y)))", sc);
    PrenexFormula p = prenex(qf);
    CHECK(p.prefix.empty());
    CHECK_SAME(p.matrix, qf);

    PrenexFormula two = prenex(parse("(and (exists ((x Id)) (p x)) (exists ((x Id)) (r x)))", sc));
    REQUIRE(two.prefix.size() == 2);
    CHECK_FALSE(two.prefix[0].universal);
    CHECK_FALSE(two.prefix[1].universal);
    CHECK(two.prefix[0].var != two.prefix[1].var);
    CHECK(isQuantifierFree(two.matrix));
    CHECK(sameShape(two.toFormula(), parse("(exists ((a Id) (b Id)) (and (p a) (r b)))", sc)));

    SUBCASE("order within a subformula is kept") {
        PrenexFormula t = prenex(parse("(exists ((z Real)) (and (>= z 0) (forall ((w Real)) (q (+ z w)))))",
                                       trackingScope()));
        REQUIRE(t.prefix.size() == 2);
        CHECK_FALSE(t.prefix[0].universal);
        CHECK(t.prefix[1].universal);
    }
}

TEST_CASE("dual") {
    Scope sc = idScope();
    Formula eq = parse("(= x y)", sc);
    CHECK_SAME(dual(eq), fNot(eq));
    Scope tr = trackingScope();
    CHECK_SAME(dual(parse("(exists ((z Real)) (and (>= z 0) (q z)))", tr)),
               parse("(forall ((z Real)) (or (not (>= z 0)) (q z)))", tr));
    Formula atom = parse("(q x)", sc);
    CHECK_SAME(dual(atom), atom);
    CHECK_THROWS_AS(dual(parse("(not (q x))", sc)), Error);
}

TEST_CASE("isPositive") {
    Scope sc = idScope();
    CHECK(isPositive(parse("(not (not (q x)))", sc)));
    CHECK_FALSE(isPositive(parse("(not (q x))", sc)));
    CHECK_FALSE(isPositive(parse("(=> (q x) (p x))", sc)));
    CHECK(isPositive(parse("(=> (= x y) (p x))", sc)));
    Foaa a = tracking();
    for (auto& [key, r] : a.rules) CHECK(isPositive(r.body));
    CHECK(isPositive(a.initial));
}

TEST_CASE("stamp") {
    Foaa a = tracking();
    Scope sc = trackingScope();
    CHECK_SAME(stamp(a.initial, 0, a.inputVars), parse("(exists ((z Real)) (and (>= z 0) (q@0 z)))", sc));
    CHECK_SAME(stamp(fTrue(), 5, a.inputVars), fTrue());
    Scope s0;
    s0.vars["x"] = mkVar("x", Sort::Real);
    s0.preds["qf"] = mkPred("qf", {});
    CHECK_SAME(stamp(parse("(and (>= x 0) qf)", s0), 2, {s0.vars["x"]}), parse("(and (>= x@2 0) qf@2)", s0));
    CHECK_THROWS_AS(stamp(parse("(q@1 x)", sc), 2, a.inputVars), Error);
}

TEST_CASE("print and parse round trip") {
    Scope sc = trackingScope();
    Formula f = parse("(exists ((z Real)) (and (>= z 0) (forall ((w Real)) (or (< w z) (q (+ x w))))))", sc);
    CHECK_SAME(parse(toString(f), sc), f);
}

TEST_CASE("property: prenex form is equivalent on bounded domains") {
    Rng rng(11);
    Pred p = mkPred("p", {Sort::Id}), r = mkPred("r", {Sort::Id, Sort::Id});
    Var a = mkVar("a", Sort::Id), b = mkVar("b", Sort::Id);
    BoundedDomain dom = idDomain(3);
    for (int i = 0; i < 300; ++i) {
        Formula f = randomEqFormula(rng, {p, r}, {a, b}, 3, 2, false);
        Formula g = prenex(f).toFormula();
        CHECK(isQuantifierFree(prenex(f).matrix));
        Interpretation I = randomInterp(rng, {p, r}, dom);
        for (auto& va : dom)
            for (auto& vb : dom) {
                Valuation nu{{a, va}, {b, vb}};
                CHECK(evaluate(f, nu, &I, &dom) == evaluate(g, nu, &I, &dom));
            }
    }
}

TEST_CASE("property: dual is an involution") {
    Rng rng(12);
    Pred p = mkPred("p", {Sort::Id}), r = mkPred("r", {Sort::Id, Sort::Id});
    Var a = mkVar("a", Sort::Id);
    for (int i = 0; i < 300; ++i) {
        Formula f = randomEqFormula(rng, {p, r}, {a}, 3, 2, true);
        CHECK(isPositive(dual(f)));
        CHECK_SAME(dual(dual(f)), f);
    }
    for (int i = 0; i < 200; ++i) {
        Var x = mkVar("x", Sort::Real), y = mkVar("y", Sort::Real);
        Formula f = randomLraQf(rng, {x, y}, 3);
        CHECK_SAME(dual(dual(f)), f);
    }
}

TEST_CASE("property: dual negates predicate-free formulas") {
    Rng rng(13);
    Var a = mkVar("a", Sort::Id), b = mkVar("b", Sort::Id);
    BoundedDomain dom = idDomain(4);
    for (int i = 0; i < 300; ++i) {
        Formula f = randomEqFormula(rng, {}, {a, b}, 3, 2, true);
        Formula d = dual(f);
        for (auto& va : dom)
            for (auto& vb : dom) {
                Valuation nu{{a, va}, {b, vb}};
                CHECK(evaluate(d, nu) != evaluate(f, nu));
            }
    }
    Var x = mkVar("x", Sort::Real), y = mkVar("y", Sort::Real);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int i = 0; i < 300; ++i) {
        Formula f = randomLraQf(rng, {x, y}, 3);
        Valuation nu{{x, Rational(val(rng), 2)}, {y, Rational(val(rng))}};
        nu[x].canonicalize();
        CHECK(evaluate(dual(f), nu) != evaluate(f, nu));
    }
}

TEST_CASE("property: stamping is injective and commutes with substitution") {
    Rng rng(14);
    Pred p = mkPred("p", {Sort::Id}), r = mkPred("r", {Sort::Id, Sort::Id});
    Var x = mkVar("x", Sort::Id), y = mkVar("y", Sort::Id), w = mkVar("w", Sort::Id);
    std::vector<Formula> seen;
    for (int i = 0; i < 200; ++i) seen.push_back(randomEqFormula(rng, {p, r}, {x, y}, 2, 2, true));
    for (std::size_t i = 0; i < seen.size(); ++i)
        for (std::size_t j = i + 1; j < seen.size(); ++j)
            if (seen[i] != seen[j]) CHECK(toString(stamp(seen[i], 3, {x})) != toString(stamp(seen[j], 3, {x})));
    for (Formula f : seen) {
        Subst s{{y, tVar(w)}};
        CHECK_SAME(substitute(stamp(f, 2, {x}), s), stamp(substitute(f, s), 2, {x}));
        Subst c{{y, tIdConst(1)}};
        CHECK_SAME(substitute(stamp(f, 1, {x}), c), stamp(substitute(f, c), 1, {x}));
    }
}
