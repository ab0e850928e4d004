#include "foalt/gen.hpp"

namespace foalt {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

std::vector<Term> idTerms(const std::vector<Var>& scope, std::size_t constants) {
    std::vector<Term> ts;
    for (Var v : scope)
        if (v->sort == Sort::Id) ts.push_back(tVar(v));
    for (std::size_t k = 0; k < constants; ++k) ts.push_back(tIdConst(static_cast<std::uint32_t>(k)));
    return ts;
}

Formula randomPredAtom(Rng& rng, const std::vector<Pred>& preds, const std::vector<Term>& ts) {
    Pred p = preds[pick(rng, preds.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < p->arity(); ++i) args.push_back(ts[pick(rng, ts.size())]);
    return fPred(p, args);
}

Formula randomEqLiteral(Rng& rng, const std::vector<Term>& ts) {
    Term l = ts[pick(rng, ts.size())];
    Term r = ts[pick(rng, ts.size())];
    Formula e = fEq(l, r);
    return coin(rng, 0.5) ? fNot(e) : e;
}

Var boundVar(const std::vector<Var>& scope) { return mkVar("z" + std::to_string(scope.size()), Sort::Id); }

}  // namespace

Formula randomGuardedPositive(Rng& rng, const std::vector<Pred>& preds, const std::vector<Var>& scope, int depth,
                              std::size_t constants) {
    std::vector<Term> ts = idTerms(scope, constants);
    if (ts.empty()) ts.push_back(tIdConst(0));
    if (depth <= 0 || coin(rng, 0.3)) {
        double r = std::uniform_real_distribution<double>(0, 1)(rng);
        if (r < 0.03) return fTrue();
        if (r < 0.05) return fFalse();
        if (r < 0.65 && !preds.empty()) return randomPredAtom(rng, preds, ts);
        return randomEqLiteral(rng, ts);
    }
    switch (pick(rng, 4)) {
        case 0:
        case 1: {
            Formula l = randomGuardedPositive(rng, preds, scope, depth - 1, constants);
            Formula r = randomGuardedPositive(rng, preds, scope, depth - 1, constants);
            return pick(rng, 2) ? fAnd(l, r) : fOr(l, r);
        }
        default: {
            bool universal = pick(rng, 2) == 1;
            Var z = boundVar(scope);
            Term t1 = ts[pick(rng, ts.size())];
            Term t2 = ts[pick(rng, ts.size())];
            std::vector<Var> inner = scope;
            inner.push_back(z);
            Formula body = randomGuardedPositive(rng, preds, inner, depth - 1, constants);
            if (universal)
                return fForall(z, fOr(fAnd(fNot(fEq(tVar(z), t1)), fNot(fEq(tVar(z), t2))), body));
            return fExists(z, fAnd(fOr(fEq(tVar(z), t1), fEq(tVar(z), t2)), body));
        }
    }
}

Foaa randomEqAutomaton(Rng& rng, const EqGenOptions& opt) {
    Foaa a;
    a.theory = TheoryId::EQ;
    a.events = opt.events;
    Var x = mkVar("x", Sort::Id);
    a.inputVars = {x};
    std::size_t n = 1 + pick(rng, opt.maxStates);
    std::vector<Pred> preds;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t arity = pick(rng, opt.maxArity + 1);
        preds.push_back(mkPred("q" + std::to_string(i), std::vector<Sort>(arity, Sort::Id)));
        a.states.push_back({preds.back(), coin(rng, 0.5)});
    }
    a.initial = randomGuardedPositive(rng, preds, {}, opt.maxDepth, opt.constants);
    for (Pred p : preds)
        for (auto& e : opt.events) {
            if (coin(rng, opt.missingRuleProb)) continue;
            std::vector<Var> params;
            for (std::size_t i = 0; i < p->arity(); ++i) params.push_back(mkVar("y" + std::to_string(i + 1), Sort::Id));
            std::vector<Var> scope = params;
            scope.push_back(x);
            a.rules[{p->name, e}] = Rule{params, randomGuardedPositive(rng, preds, scope, opt.maxDepth, opt.constants)};
        }
    return a;
}

DataWord randomIdDataWord(Rng& rng, const Foaa& a, std::size_t maxLen, std::size_t values) {
    DataWord w;
    std::size_t len = pick(rng, maxLen + 1);
    for (std::size_t i = 0; i < len; ++i) {
        Letter l;
        l.event = a.events[pick(rng, a.events.size())];
        for (Var v : a.inputVars) l.values[v] = Rational(static_cast<unsigned long>(pick(rng, values)));
        w.push_back(std::move(l));
    }
    return w;
}

EventSequence randomEventSequence(Rng& rng, const std::vector<std::string>& events, std::size_t maxLen) {
    EventSequence s;
    std::size_t len = pick(rng, maxLen + 1);
    for (std::size_t i = 0; i < len; ++i) s.push_back(events[pick(rng, events.size())]);
    return s;
}

Formula randomLraQf(Rng& rng, const std::vector<Var>& vars, int depth) {
    if (depth <= 0 || coin(rng, 0.3)) {
        std::vector<std::pair<Var, Rational>> mons;
        std::size_t k = 1 + pick(rng, std::min<std::size_t>(2, vars.size()));
        for (std::size_t i = 0; i < k; ++i) {
            long c = static_cast<long>(pick(rng, 5)) - 2;
            if (c != 0) mons.push_back({vars[pick(rng, vars.size())], Rational(c)});
        }
        Term t = tLin(mons, Rational(static_cast<long>(pick(rng, 7)) - 3));
        Formula atom = fLinAtom(static_cast<Rel>(pick(rng, 3)), t);
        return coin(rng, 0.3) ? fNot(atom) : atom;
    }
    Formula l = randomLraQf(rng, vars, depth - 1);
    Formula r = randomLraQf(rng, vars, depth - 1);
    return coin(rng, 0.5) ? fAnd(l, r) : fOr(l, r);
}

Formula randomEqQf(Rng& rng, const std::vector<Var>& vars, int depth, std::size_t constants) {
    std::vector<Term> ts = idTerms(vars, constants);
    if (depth <= 0 || coin(rng, 0.3)) return randomEqLiteral(rng, ts);
    Formula l = randomEqQf(rng, vars, depth - 1, constants);
    Formula r = randomEqQf(rng, vars, depth - 1, constants);
    return coin(rng, 0.5) ? fAnd(l, r) : fOr(l, r);
}

Formula randomEqFormula(Rng& rng, const std::vector<Pred>& preds, const std::vector<Var>& scope, int depth,
                        std::size_t constants, bool positive) {
    std::vector<Term> ts = idTerms(scope, constants);
    if (ts.empty()) ts.push_back(tIdConst(0));
    if (depth <= 0 || coin(rng, 0.3)) {
        if (!preds.empty() && coin(rng, 0.6)) {
            Formula p = randomPredAtom(rng, preds, ts);
            return !positive && coin(rng, 0.3) ? fNot(p) : p;
        }
        return randomEqLiteral(rng, ts);
    }
    switch (pick(rng, 4)) {
        case 0:
        case 1: {
            Formula l = randomEqFormula(rng, preds, scope, depth - 1, constants, positive);
            Formula r = randomEqFormula(rng, preds, scope, depth - 1, constants, positive);
            return pick(rng, 2) ? fAnd(l, r) : fOr(l, r);
        }
        default: {
            Var z = boundVar(scope);
            std::vector<Var> inner = scope;
            inner.push_back(z);
            return fQuant(pick(rng, 2) == 1, z, randomEqFormula(rng, preds, inner, depth - 1, constants, positive));
        }
    }
}

TimedAutomaton randomTimed(Rng& rng) {
    TimedAutomaton ta;
    ta.events = {"a", "b"};
    std::size_t n = 1 + pick(rng, 3);
    std::size_t k = 1 + pick(rng, 2);
    for (std::size_t i = 0; i < n; ++i) {
        ta.states.push_back("s" + std::to_string(i));
        ta.initial.push_back(i == 0 || coin(rng, 0.3));
        ta.final.push_back(coin(rng, 0.5));
    }
    for (std::size_t c = 0; c < k; ++c) ta.clocks.push_back("x" + std::to_string(c + 1));
    std::size_t edges = pick(rng, 5);
    for (std::size_t i = 0; i < edges; ++i) {
        TimedEdge e;
        e.from = pick(rng, n);
        e.to = pick(rng, n);
        e.event = ta.events[pick(rng, 2)];
        for (std::size_t c = 0; c < k; ++c) e.reset.push_back(coin(rng, 0.4));
        std::vector<ClockConstraint> atoms;
        std::size_t m = pick(rng, 3);
        for (std::size_t j = 0; j < m; ++j) {
            Rational bound(static_cast<long>(pick(rng, 7)), 2);
            bound.canonicalize();
            std::size_t x = pick(rng, k);
            ClockConstraint d = coin(rng, 0.5) ? ClockConstraint::le(x, bound) : ClockConstraint::ge(x, bound);
            atoms.push_back(coin(rng, 0.2) ? ClockConstraint::negate(d) : d);
        }
        e.guard = ClockConstraint::conj(std::move(atoms));
        ta.edges.push_back(std::move(e));
    }
    return ta;
}

TimedWord randomTimedWord(Rng& rng, const TimedAutomaton& ta, std::size_t maxLen) {
    TimedWord w;
    std::size_t len = pick(rng, maxLen + 1);
    Rational t = 0;
    for (std::size_t i = 0; i < len; ++i) {
        Rational step(static_cast<long>(1 + pick(rng, 4)), 2);
        step.canonicalize();
        t += step;
        w.push_back({ta.events[pick(rng, ta.events.size())], t});
    }
    return w;
}

RegisterAutomaton randomRegister(Rng& rng, std::size_t values) {
    RegisterAutomaton ra;
    ra.registers = 2;
    std::size_t n = 1 + pick(rng, 3);
    for (std::size_t i = 0; i < n; ++i) {
        ra.states.push_back("s" + std::to_string(i));
        ra.final.push_back(coin(rng, 0.5));
    }
    ra.initial = 0;
    for (std::size_t r = 0; r < ra.registers; ++r) {
        std::optional<std::uint32_t> v;
        if (coin(rng, 0.5)) v = static_cast<std::uint32_t>(pick(rng, values));
        if (v && r > 0 && ra.init[0] == v) v.reset();
        ra.init.push_back(v);
    }
    std::size_t m = pick(rng, 6);
    for (std::size_t i = 0; i < m; ++i) ra.trans.push_back({pick(rng, n), pick(rng, ra.registers), pick(rng, n)});
    return ra;
}

IdWord randomIdWord(Rng& rng, std::size_t maxLen, std::size_t values) {
    IdWord w;
    std::size_t len = pick(rng, maxLen + 1);
    for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<std::uint32_t>(pick(rng, values)));
    return w;
}

}  // namespace foalt
