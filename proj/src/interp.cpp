#include "foalt/interp.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

namespace foalt {

const ExtendedTerm* WitnessAssignment::find(Var v) const {
    for (auto& [x, t] : entries)
        if (x == v) return &t;
    return nullptr;
}

WitnessAssignment computeWitnesses(const SymbolicPath& sp) {
    WitnessAssignment wa;
    Formula m = sp.upsilonMatrix;
    for (std::size_t j = sp.prefix.size(); j-- > 0;) {
        Var x = sp.prefix[j].var;
        if (sp.prefix[j].universal) {
            QeResult r = qeExists(x, fNot(m));
            wa.entries.emplace_back(x, r.witness);
            m = fNot(r.formula);
        } else {
            m = qeFormula(x, m);
        }
    }
    if (isSatQf(m)) throw Error("witnesses requested for an accepting event sequence");
    std::reverse(wa.entries.begin(), wa.entries.end());
    return wa;
}

namespace {

bool mentions(const ExtendedTerm& e, Var v) { return e.vars().count(v) > 0; }

ExtendedTerm substituteExt(const ExtendedTerm& e, Var v, const ExtendedTerm& r) {
    using K = ExtendedTerm::Kind;
    if (!mentions(e, v)) return e;
    if (r.kind == K::Cond)
        return ExtendedTerm::conditional(r.cond, substituteExt(e, v, *r.then), substituteExt(e, v, *r.els));
    if (r.kind != K::Plain) throw Error("virtual witness cannot be substituted into a term");
    Subst s{{v, r.term}};
    switch (e.kind) {
        case K::Plain: return ExtendedTerm::plain(substitute(e.term, s));
        case K::EpsAbove: return ExtendedTerm::epsilonAbove(substitute(e.term, s));
        case K::EpsBelow: return ExtendedTerm::epsilonBelow(substitute(e.term, s));
        case K::Cond:
            return ExtendedTerm::conditional(substitute(e.cond, s), substituteExt(*e.then, v, r),
                                             substituteExt(*e.els, v, r));
        default: return e;
    }
}

struct Leaf {
    Formula guard;
    Subst subst;
};

void flatten(const ExtendedTerm& e, Formula guard, std::vector<std::pair<Formula, Term>>& out) {
    using K = ExtendedTerm::Kind;
    if (e.kind == K::Plain) {
        if (isSatQf(guard)) out.emplace_back(guard, e.term);
        return;
    }
    if (e.kind != K::Cond) throw Error("virtual witness term " + e.str());
    flatten(*e.then, fAnd(guard, e.cond), out);
    flatten(*e.els, fAnd(guard, fNot(e.cond)), out);
}

// Joint case split over the witnesses of the universals free in f. Guards
// are pairwise exclusive and cover every valuation.
std::vector<Leaf> leavesFor(const VarSet& fv, const WitnessAssignment& composed) {
    std::vector<Leaf> leaves{{fTrue(), {}}};
    for (auto& [x, t] : composed.entries) {
        if (!fv.count(x)) continue;
        std::vector<std::pair<Formula, Term>> cases;
        flatten(t, fTrue(), cases);
        std::vector<Leaf> next;
        for (auto& l : leaves)
            for (auto& [g, term] : cases) {
                Formula ng = fAnd(l.guard, g);
                if (ng != l.guard && !isSatQf(ng)) continue;
                Leaf n{ng, l.subst};
                n.subst[x] = term;
                next.push_back(std::move(n));
            }
        leaves = std::move(next);
    }
    return leaves;
}

Formula guardedInstance(Formula f, const std::vector<Leaf>& leaves) {
    std::vector<Formula> cs;
    for (auto& l : leaves) cs.push_back(fOr(fNot(l.guard), substitute(f, l.subst)));
    return fAnd(std::move(cs));
}

struct Triple {
    Formula guard;
    Formula atom;
    Formula inst;
};

// Replaces every predicate atom p(s) stamped `stamp` by the largest
// interpretation the triples allow: ⋀ (guard → s = t → inst).
Formula eliminateStep(Formula f, int stamp, const std::vector<Triple>& triples) {
    return mapAtoms(f, [&](Formula at) -> Formula {
        if (at->kind != FKind::Pred || at->pred->stamp != stamp) return nullptr;
        std::vector<Formula> cs;
        for (auto& t : triples) {
            if (t.atom->pred != at->pred) continue;
            std::vector<Formula> eqs;
            for (std::size_t i = 0; i < at->args.size(); ++i) eqs.push_back(fEq(at->args[i], t.atom->args[i]));
            cs.push_back(fOr({fNot(t.guard), fNot(fAnd(std::move(eqs))), t.inst}));
        }
        return fAnd(std::move(cs));
    });
}

VarSet predArgVars(Formula f) {
    VarSet out;
    for (Formula at : predAtoms(f))
        for (Term t : at->args)
            for (Var v : freeVars(t)) out.insert(v);
    return out;
}

Formula eliminateVars(Formula phi, const VarSet& keep) {
    for (bool changed = true; changed;) {
        changed = false;
        VarSet inPreds = predArgVars(phi);
        for (Var v : freeVars(phi)) {
            if (keep.count(v)) continue;
            if (!inPreds.count(v)) {
                phi = qeFormula(v, phi);
                changed = true;
            } else if (Term d = equalityDefinition(v, phi)) {
                phi = substitute(phi, Subst{{v, d}});
                changed = true;
            }
            if (changed) break;
        }
    }
    if (phi->kind == FKind::Or) {
        bool pending = false;
        for (Var v : freeVars(phi))
            if (!keep.count(v)) pending = true;
        if (pending) {
            std::vector<Formula> ds;
            for (Formula d : phi->kids) ds.push_back(eliminateVars(d, keep));
            return fOr(std::move(ds));
        }
    }
    return phi;
}

}  // namespace

WitnessAssignment composeWitnesses(const SymbolicPath& sp, const WitnessAssignment& wa) {
    WitnessAssignment out;
    for (auto& [x, t] : wa.entries) {
        ExtendedTerm s = t;
        for (auto& [y, u] : out.entries) s = substituteExt(s, y, u);
        out.entries.emplace_back(x, s);
    }
    (void)sp;
    return out;
}

Formula substituteWitnesses(Formula matrix, const WitnessAssignment& composed) {
    for (auto& [x, t] : composed.entries)
        if (hasFreeVar(matrix, x)) matrix = substituteVirtual(matrix, x, t);
    return matrix;
}

bool witnessesRespectSteps(const SymbolicPath& sp, const WitnessAssignment& composed) {
    std::map<Var, std::size_t, VarLess> position;
    for (std::size_t i = 0; i < sp.prefix.size(); ++i) position[sp.prefix[i].var] = i;
    for (auto& [x, t] : composed.entries) {
        std::size_t j = position.at(x);
        for (Var v : t.vars()) {
            auto it = position.find(v);
            if (it != position.end()) {
                if (it->second >= j || sp.prefix[it->second].universal) return false;
            } else if (v->stamp > sp.xi[j]) {
                return false;
            }
        }
    }
    return true;
}

Formula project(Formula phi, const std::set<Pred>& keepPreds, const VarSet& keepVars) {
    for (Formula at : predAtoms(phi)) {
        if (keepPreds.count(at->pred)) continue;
        auto fix = [&](bool v) {
            return mapAtoms(phi, [&](Formula b) -> Formula { return b == at ? fBool(v) : nullptr; });
        };
        phi = fOr(fix(true), fix(false));
    }
    phi = eliminateVars(phi, keepVars);
    if (!isSatQf(phi)) return fFalse();
    return phi;
}

// ---------------------------------------------------------------------------

namespace {

Gli chainGli(const SymbolicPath& sp, const WitnessAssignment& composed) {
    const int n = static_cast<int>(sp.length());
    Gli g;
    g.kind = Gli::Kind::Chain;
    g.witnesses = composed;

    // Witness-substituted parts, as guarded case splits.
    std::vector<Formula> sub(n + 2);
    std::vector<std::vector<Triple>> triples(n + 1);
    sub[0] = guardedInstance(sp.parts[0], leavesFor(freeVars(sp.parts[0]), composed));
    for (int k = 1; k <= n; ++k) {
        std::vector<Formula> cs;
        for (Formula at : sp.atoms[k - 1]) {
            Formula inst = sp.instance.at(at);
            VarSet fv = freeVars(at);
            for (Var v : freeVars(inst)) fv.insert(v);
            for (auto& l : leavesFor(fv, composed)) {
                Triple t{l.guard, substitute(at, l.subst), substitute(inst, l.subst)};
                cs.push_back(fOr({fNot(t.guard), fNot(t.atom), t.inst}));
                triples[k].push_back(t);
            }
        }
        sub[k] = fAnd(std::move(cs));
    }
    sub[n + 1] = guardedInstance(sp.parts[n + 1], leavesFor(freeVars(sp.parts[n + 1]), composed));

    std::vector<VarSet> keep(n + 1);
    VarSet acc = freeVars(sub[n + 1]);
    for (int k = n; k >= 0; --k) {
        keep[k] = acc;
        for (Var v : freeVars(sub[k])) acc.insert(v);
    }
    auto predsAt = [&](Formula f, int k) {
        std::set<Pred> ps;
        for (Pred p : predSymbols(f))
            if (p->stamp == k) ps.insert(p);
        return ps;
    };

    g.I.push_back(project(sub[0], predsAt(sub[0], 0), keep[0]));
    for (int k = 1; k <= n; ++k) {
        Formula e = eliminateStep(g.I[k - 1], k - 1, triples[k]);
        g.I.push_back(project(e, predsAt(e, k), keep[k]));
    }
    return g;
}

std::vector<Var> laterInputs(const Foaa& a, int k, int n) {
    std::vector<Var> us;
    for (int j = k + 1; j <= n; ++j)
        for (Var x : a.inputVars) us.push_back(mkVar(x->name + "~" + std::to_string(j), x->sort));
    return us;
}

std::vector<Var> stateParams(Pred p) {
    std::vector<Var> ds;
    for (std::size_t i = 0; i < p->arity(); ++i) ds.push_back(mkVar("d~" + std::to_string(i + 1), p->argSorts[i]));
    return ds;
}

std::vector<Term> terms(const std::vector<Var>& vs) {
    std::vector<Term> ts;
    for (Var v : vs) ts.push_back(tVar(v));
    return ts;
}

// Quantifier-free condition on d and the renamed later inputs under which
// q(d) at step k accepts the rest of α.
Formula acceptsSuffix(const Foaa& a, const EventSequence& alpha, int k, Pred q, const std::vector<Var>& d) {
    Foaa c = a;
    c.initial = fPred(q, terms(d));
    EventSequence rest(alpha.begin() + k, alpha.end());
    SymbolicPath sp = buildSymbolic(c, rest);
    Subst ren;
    for (std::size_t j = 1; j <= rest.size(); ++j)
        for (Var x : a.inputVars)
            ren.emplace(mkVar(x->name, x->sort, static_cast<int>(j)),
                        tVar(mkVar(x->name + "~" + std::to_string(k + j), x->sort)));
    return eliminateQuantifiers(substitute(sp.upsilon(), ren));
}

Formula rejectionFormula(const Gli::Level& lv, int k) {
    std::vector<Formula> ds;
    for (auto& p : lv.pieces) {
        Pred q = mkPred(p.pred->name, p.pred->argSorts, k);
        ds.push_back(fExistsAll(p.params, fAnd(fPred(q, terms(p.params)), p.reject)));
    }
    Formula f = fOr(std::move(ds));
    for (auto it = lv.laterInputs.rbegin(); it != lv.laterInputs.rend(); ++it) f = fForall(*it, f);
    return f;
}

Gli rejectionGli(const Foaa& a0, const EventSequence& alpha) {
    Foaa a = materializeRules(a0);
    const int n = static_cast<int>(alpha.size());
    Gli g;
    g.kind = Gli::Kind::Rejection;
    for (int k = 0; k <= n; ++k) {
        Gli::Level lv;
        lv.laterInputs = laterInputs(a, k, n);
        for (auto& s : a.states) {
            auto d = stateParams(s.pred);
            Formula r = fNot(acceptsSuffix(a, alpha, k, s.pred, d));
            if (!isSatQf(r)) continue;
            lv.pieces.push_back({s.pred, d, r});
        }
        g.I.push_back(rejectionFormula(lv, k));
        g.levels.push_back(std::move(lv));
    }
    return g;
}

}  // namespace

Gli computeGli(const Foaa& a, const SymbolicPath& sp, const WitnessAssignment& wa) {
    WitnessAssignment composed = composeWitnesses(sp, wa);
    Gli g = witnessesRespectSteps(sp, composed) ? chainGli(sp, composed) : rejectionGli(a, sp.alpha);
    g.path = std::make_shared<SymbolicPath>(sp);
    GliCheck c = validateGli(a, sp.alpha, g);
    if (!c.ok()) throw Error("internal error: interpolant for " + eventSequenceString(sp.alpha) + " failed validation: " + c.reason);
    return g;
}

Gli interpolate(const Foaa& a, const EventSequence& alpha) {
    SymbolicPath sp = buildSymbolic(a, alpha);
    WitnessAssignment wa = computeWitnesses(sp);
    return computeGli(a, sp, wa);
}

// ---------------------------------------------------------------------------

namespace {

GliCheck invalid(std::string why) { return {Validity::Invalid, std::move(why)}; }

bool unsat(Formula f) { return !isSatQf(eliminateQuantifiers(f)); }

GliCheck checkChain(const Foaa& a, const EventSequence& alpha, const Gli& g) {
    const int n = static_cast<int>(alpha.size());
    if (!g.path) return invalid("missing symbolic path");
    SymbolicPath sp = buildSymbolic(a, alpha);
    if (sp.thetaMatrix != g.path->thetaMatrix) return invalid("interpolant belongs to another path");

    std::map<Var, std::size_t, VarLess> position;
    for (std::size_t i = 0; i < sp.prefix.size(); ++i) position[sp.prefix[i].var] = i;
    for (auto& [x, t] : g.witnesses.entries) {
        auto it = position.find(x);
        if (it == position.end() || !sp.prefix[it->second].universal) return invalid("witness for a non-universal");
        if (t.isVirtual()) return invalid("virtual witness");
    }
    if (!witnessesRespectSteps(sp, g.witnesses)) return invalid("witness depends on later inputs");

    for (int k = 0; k <= n; ++k) {
        for (Var v : freeVars(g.I[k])) {
            auto it = position.find(v);
            bool ok = it == position.end() ? v->stamp >= 0 && v->stamp <= k
                                           : !sp.prefix[it->second].universal && sp.xi[it->second] <= k;
            if (!ok) return invalid("I" + std::to_string(k) + " mentions " + v->display());
        }
        if (!g.I[k]->quantFree) return invalid("I" + std::to_string(k) + " is quantified");
    }
    auto part = [&](int k) { return substituteWitnesses(sp.parts[k], g.witnesses); };
    if (isSatQf(fAnd(part(0), fNot(g.I[0])))) return invalid("initial formula does not entail I0");
    for (int k = 0; k < n; ++k)
        if (isSatQf(fAnd({g.I[k], part(k + 1), fNot(g.I[k + 1])})))
            return invalid("I" + std::to_string(k) + " does not lead to I" + std::to_string(k + 1));
    return {};
}

// ψ_q@(k+1)(t) with every successor atom replaced by the acceptance
// condition recorded for it at level k+1.
Formula stepThroughPieces(const Foaa& a, const std::string& e, Formula atom, const Gli::Level& next, int k) {
    const Rule* r = a.rule(atom->pred->name, e);
    if (!r) return fFalse();
    Subst s;
    for (std::size_t i = 0; i < r->params.size(); ++i) s.emplace(r->params[i], atom->args[i]);
    Formula body = substitute(stamp(r->body, k + 1, a.inputVars), s);
    Subst ren;
    for (Var x : a.inputVars) ren.emplace(mkVar(x->name, x->sort, k + 1), tVar(mkVar(x->name + "~" + std::to_string(k + 1), x->sort)));
    body = substitute(body, ren);
    return mapAtoms(body, [&](Formula b) -> Formula {
        if (b->kind != FKind::Pred) return nullptr;
        for (auto& p : next.pieces) {
            if (p.pred->name != b->pred->name) continue;
            Subst ps;
            for (std::size_t i = 0; i < p.params.size(); ++i) ps.emplace(p.params[i], b->args[i]);
            return fNot(substitute(p.reject, ps));
        }
        return fTrue();
    });
}

Formula replaceByPieces(Formula f, int k, const std::function<Formula(Formula)>& fn) {
    return mapAtoms(f, [&](Formula b) -> Formula {
        if (b->kind != FKind::Pred) return nullptr;
        if (b->pred->stamp != k) throw Error("unexpected stamp");
        return fn(b);
    });
}

GliCheck checkRejection(const Foaa& a0, const EventSequence& alpha, const Gli& g) {
    Foaa a = materializeRules(a0);
    const int n = static_cast<int>(alpha.size());
    if (g.levels.size() != g.I.size()) return invalid("missing rejection pieces");
    for (int k = 0; k <= n; ++k) {
        if (rejectionFormula(g.levels[k], k) != g.I[k]) return invalid("I" + std::to_string(k) + " does not match its pieces");
        if (!freeVars(g.I[k]).empty()) return invalid("I" + std::to_string(k) + " is not a sentence");
        for (auto& p : g.levels[k].pieces)
            if (!predSymbols(p.reject).empty()) return invalid("rejection condition mentions states");
    }
    auto lookup = [&](int k, Formula b) -> Formula {
        for (auto& p : g.levels[k].pieces) {
            if (p.pred->name != b->pred->name) continue;
            Subst ps;
            for (std::size_t i = 0; i < p.params.size(); ++i) ps.emplace(p.params[i], b->args[i]);
            return fNot(substitute(p.reject, ps));
        }
        return fTrue();
    };
    // ι@0 forces a rejecting configuration for every choice of later inputs.
    Formula init = replaceByPieces(stamp(a.initial, 0, a.inputVars), 0, [&](Formula b) { return lookup(0, b); });
    if (!unsat(init)) return invalid("initial formula does not entail I0");
    for (int k = 0; k < n; ++k) {
        std::vector<Formula> ds;
        for (auto& p : g.levels[k].pieces) {
            Pred q = mkPred(p.pred->name, p.pred->argSorts, k);
            Formula succ = stepThroughPieces(a, alpha[k], fPred(q, terms(p.params)), g.levels[k + 1], k);
            ds.push_back(fExistsAll(p.params, fAnd(succ, p.reject)));
        }
        if (!unsat(fOr(std::move(ds))))
            return invalid("I" + std::to_string(k) + " does not lead to I" + std::to_string(k + 1));
    }
    return {};
}

}  // namespace

GliCheck validateGli(const Foaa& a, const EventSequence& alpha, const Gli& g) {
    const int n = static_cast<int>(alpha.size());
    if (g.I.size() != alpha.size() + 1) return invalid("wrong number of interpolants");
    for (int k = 0; k <= n; ++k) {
        if (!isPositive(g.I[k])) return invalid("I" + std::to_string(k) + " has a negative state atom");
        for (Pred p : predSymbols(g.I[k]))
            if (p->stamp != k || !a.state(p->name))
                return invalid("I" + std::to_string(k) + " mentions " + p->display());
    }
    GliCheck c;
    try {
        c = g.kind == Gli::Kind::Chain ? checkChain(a, alpha, g) : checkRejection(a, alpha, g);
    } catch (const Error& e) {
        return invalid(e.what());
    }
    if (!c.ok()) return c;
    if (!unsat(applyFinality(a, g.I[n], n))) return invalid("I" + std::to_string(n) + " admits an accepting frontier");
    return {};
}

Formula closeInterpolant(const Gli& g, std::size_t k) {
    Formula f = unstampPreds(g.I.at(k));
    VarSet fv = freeVars(f);
    return alphaNormalize(fExistsAll(std::vector<Var>(fv.begin(), fv.end()), f));
}

}  // namespace foalt
