#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "foalt/linear.hpp"
#include "foalt/theory.hpp"

namespace foalt {

namespace {

void requireNoPredOn(Var x, Formula phi) {
    for (Formula a : predAtoms(phi))
        if (hasFreeVar(a, x)) throw Error("quantifier elimination: " + x->display() + " occurs in " + toString(a));
}

Term defaultValue(Sort s) { return s == Sort::Id ? tIdConst(0) : tNum(0); }

// x = def, read off a linear equality c*x + r = 0.
Term solveFor(Formula eq, Var x) {
    Rational c = coefficient(eq->lhs, x);
    Term rest = tSub(eq->lhs, tScale(c, tVar(x)));
    return tScale(Rational(-1) / c, rest);
}

}  // namespace

// A conjunct of phi pinning x to a term without x.
Term equalityDefinition(Var x, Formula phi) {
    for (Formula c : conjuncts(phi)) {
        if (c->kind == FKind::Lin && c->rel == Rel::Eq && coefficient(c->lhs, x) != 0) return solveFor(c, x);
        if (c->kind == FKind::EqId) {
            if (c->lhs->kind == TermKind::IdVar && c->lhs->var == x && !termHasVar(c->rhs, x)) return c->rhs;
            if (c->rhs->kind == TermKind::IdVar && c->rhs->var == x && !termHasVar(c->lhs, x)) return c->lhs;
        }
    }
    return nullptr;
}

namespace {

bool hasEqualityFor(Var x, Formula f) { return equalityDefinition(x, f) != nullptr; }

struct Bound {
    Term point;   // x's threshold
    Rational c;   // coefficient of x
    LinOp op;
};

void collectBounds(Var x, Formula f, std::vector<Bound>& out, std::unordered_set<Formula>& seen) {
    if (!hasFreeVar(f, x) || !seen.insert(f).second) return;
    if (f->kind == FKind::Lin || (f->kind == FKind::Not && f->kids[0]->kind == FKind::Lin)) {
        Formula a = f->kind == FKind::Not ? f->kids[0] : f;
        Rational c = coefficient(a->lhs, x);
        LinOp op = f->kind == FKind::Not ? LinOp::Ne
                   : a->rel == Rel::Lt   ? LinOp::Lt
                   : a->rel == Rel::Le   ? LinOp::Le
                                         : LinOp::Eq;
        out.push_back({solveFor(a, x), c, op});
        return;
    }
    for (Formula k : f->kids) collectBounds(x, k, out, seen);
}

void collectIdTerms(Var x, Formula f, std::vector<Term>& out, std::unordered_set<Formula>& seen) {
    if (!hasFreeVar(f, x) || !seen.insert(f).second) return;
    Formula a = f->kind == FKind::Not ? f->kids[0] : f;
    if (a->kind == FKind::EqId) {
        Term other = nullptr;
        if (a->lhs->kind == TermKind::IdVar && a->lhs->var == x) other = a->rhs;
        else if (a->rhs->kind == TermKind::IdVar && a->rhs->var == x) other = a->lhs;
        if (!other || termHasVar(other, x))
            throw Error("quantifier elimination: unsupported atom " + toString(a));
        if (std::find(out.begin(), out.end(), other) == out.end()) out.push_back(other);
        return;
    }
    for (Formula k : f->kids) collectIdTerms(x, k, out, seen);
}

Formula virtualAtom(Formula a, Var x, const ExtendedTerm& tau) {
    if (!hasFreeVar(a, x)) return nullptr;
    if (a->kind != FKind::Lin) throw Error("virtual substitution into non-arithmetic atom " + toString(a));
    Rational c = coefficient(a->lhs, x);
    using K = ExtendedTerm::Kind;
    if (a->rel == Rel::Eq) return fFalse();
    switch (tau.kind) {
        case K::MinusInf: return fBool(c > 0);
        case K::PlusInf: return fBool(c < 0);
        case K::EpsAbove:
        case K::EpsBelow: {
            Term tb = substitute(a->lhs, Subst{{x, tau.term}});
            bool strict = (tau.kind == K::EpsAbove) == (c > 0);
            return fLinAtom(strict ? Rel::Lt : Rel::Le, tb);
        }
        default: return nullptr;
    }
}

Formula lwEliminate(Var x, Formula phi) {
    std::vector<Bound> bounds;
    std::unordered_set<Formula> seen;
    collectBounds(x, phi, bounds, seen);
    std::vector<ExtendedTerm> lower{ExtendedTerm::minusInfinity()}, upper{ExtendedTerm::plusInfinity()};
    std::set<std::pair<int, Term>> seenLo, seenHi;
    auto push = [](std::vector<ExtendedTerm>& v, std::set<std::pair<int, Term>>& s, int tag, ExtendedTerm e) {
        if (s.insert({tag, e.term}).second) v.push_back(std::move(e));
    };
    for (auto& b : bounds) {
        if ((b.c < 0 && b.op == LinOp::Le) || b.op == LinOp::Eq) push(lower, seenLo, 0, ExtendedTerm::plain(b.point));
        if ((b.c < 0 && b.op == LinOp::Lt) || b.op == LinOp::Ne)
            push(lower, seenLo, 1, ExtendedTerm::epsilonAbove(b.point));
        if ((b.c > 0 && b.op == LinOp::Le) || b.op == LinOp::Eq) push(upper, seenHi, 0, ExtendedTerm::plain(b.point));
        if ((b.c > 0 && b.op == LinOp::Lt) || b.op == LinOp::Ne)
            push(upper, seenHi, 1, ExtendedTerm::epsilonBelow(b.point));
    }
    const auto& points = upper.size() < lower.size() ? upper : lower;
    std::vector<Formula> ds;
    for (auto& p : points) ds.push_back(substituteVirtual(phi, x, p));
    return fOr(std::move(ds));
}

Formula eqEliminate(Var x, Formula phi) {
    std::vector<Term> ts;
    std::unordered_set<Formula> seen;
    collectIdTerms(x, phi, ts, seen);
    std::vector<Formula> ds;
    for (Term t : ts) ds.push_back(substitute(phi, Subst{{x, t}}));
    ds.push_back(substitute(phi, Subst{{x, tFresh(ts)}}));
    return fOr(std::move(ds));
}

// Splits a conjunction over an inner disjunction whose branches all pin x.
Formula distributeGuard(Var x, Formula phi) {
    if (phi->kind != FKind::And) return nullptr;
    for (std::size_t i = 0; i < phi->kids.size(); ++i) {
        Formula k = phi->kids[i];
        if (k->kind != FKind::Or || !hasFreeVar(k, x)) continue;
        bool allPinned = std::all_of(k->kids.begin(), k->kids.end(), [&](Formula d) { return hasEqualityFor(x, d); });
        if (!allPinned) continue;
        std::vector<Formula> rest;
        for (std::size_t j = 0; j < phi->kids.size(); ++j)
            if (j != i) rest.push_back(phi->kids[j]);
        Formula r = fAnd(rest);
        std::vector<Formula> ds;
        for (Formula d : k->kids) ds.push_back(fAnd(d, r));
        return fOr(std::move(ds));
    }
    return nullptr;
}

Formula qeRec(Var x, Formula phi) {
    if (!hasFreeVar(phi, x)) return phi;
    if (Term def = equalityDefinition(x, phi)) return substitute(phi, Subst{{x, def}});
    if (phi->kind == FKind::Or) {
        std::vector<Formula> ds;
        for (Formula k : phi->kids) ds.push_back(qeRec(x, k));
        return fOr(std::move(ds));
    }
    if (phi->kind == FKind::And) {
        std::vector<Formula> with, without;
        for (Formula k : phi->kids) (hasFreeVar(k, x) ? with : without).push_back(k);
        if (!without.empty()) {
            without.push_back(qeRec(x, fAnd(with)));
            return fAnd(std::move(without));
        }
        if (Formula d = distributeGuard(x, phi)) return qeRec(x, d);
    }
    return x->sort == Sort::Real ? lwEliminate(x, phi) : eqEliminate(x, phi);
}

std::vector<Term> witnessCandidates(Var x, Formula phi, std::size_t& plainCount) {
    std::vector<Term> out;
    auto add = [&](Term t) {
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    };
    if (Term d = equalityDefinition(x, phi)) add(d);
    if (x->sort == Sort::Id) {
        std::vector<Term> ts;
        std::unordered_set<Formula> seen;
        collectIdTerms(x, phi, ts, seen);
        for (Term t : ts) add(t);
        add(tFresh(ts));
        plainCount = out.size();
        return out;
    }
    std::vector<Bound> bounds;
    std::unordered_set<Formula> seen;
    collectBounds(x, phi, bounds, seen);
    std::vector<Term> pts;
    for (auto& b : bounds)
        if (std::find(pts.begin(), pts.end(), b.point) == pts.end()) pts.push_back(b.point);
    for (Term p : pts) add(p);
    plainCount = out.size();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) add(tScale(Rational(1, 2), tAdd(pts[i], pts[j])));
    for (Term p : pts) {
        add(tSub(p, tNum(1)));
        add(tAdd(p, tNum(1)));
    }
    add(tNum(0));
    return out;
}

ExtendedTerm findWitness(Var x, Formula phi, Formula psi) {
    if (!hasFreeVar(phi, x) || psi->kind == FKind::False) return ExtendedTerm::plain(defaultValue(x->sort));
    std::size_t plainCount = 0;
    auto cands = witnessCandidates(x, phi, plainCount);
    std::vector<Formula> insts;
    for (Term t : cands) insts.push_back(substitute(phi, Subst{{x, t}}));
    for (std::size_t i = 0; i < plainCount; ++i)
        if (!isSatQf(fAnd(psi, fNot(insts[i])))) return ExtendedTerm::plain(cands[i]);
    std::vector<std::size_t> chosen;
    Formula covered = fFalse();
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!isSatQf(fAnd({psi, insts[i], fNot(covered)}))) continue;
        chosen.push_back(i);
        covered = fOr(covered, insts[i]);
        if (!isSatQf(fAnd(psi, fNot(covered)))) break;
    }
    if (chosen.empty() || isSatQf(fAnd(psi, fNot(covered))))
        throw Error("quantifier elimination: witness candidates do not cover " + toString(psi));
    ExtendedTerm w = ExtendedTerm::plain(cands[chosen.back()]);
    for (std::size_t k = chosen.size() - 1; k-- > 0;)
        w = ExtendedTerm::conditional(insts[chosen[k]], ExtendedTerm::plain(cands[chosen[k]]), w);
    return w;
}

}  // namespace

Formula qeFormula(Var x, Formula phi) {
    if (!phi->quantFree) throw Error("quantifier elimination: matrix has quantifiers");
    requireNoPredOn(x, phi);
    ++qeStats().qeCalls;
    return qeRec(x, phi);
}

QeResult qeExists(Var x, Formula phi) {
    Formula psi = qeFormula(x, phi);
    return {psi, findWitness(x, phi, psi)};
}

ExtendedTerm witnessForUniversal(Var x, Formula matrix) { return qeExists(x, fNot(matrix)).witness; }

Formula substituteVirtual(Formula phi, Var x, const ExtendedTerm& tau) {
    using K = ExtendedTerm::Kind;
    switch (tau.kind) {
        case K::Plain: return substitute(phi, Subst{{x, tau.term}});
        case K::Cond:
            return fOr(fAnd(tau.cond, substituteVirtual(phi, x, *tau.then)),
                       fAnd(fNot(tau.cond), substituteVirtual(phi, x, *tau.els)));
        default:
            if (x->sort != Sort::Real) throw Error("virtual substitution over a non-Real variable");
            return mapAtoms(phi, [&](Formula a) { return virtualAtom(a, x, tau); });
    }
}

Formula eliminateQuantifiers(Formula f) {
    if (f->quantFree) return f;
    std::unordered_map<Formula, Formula> memo;
    std::function<Formula(Formula)> rec = [&](Formula g) -> Formula {
        if (g->quantFree) return g;
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        Formula r;
        if (g->kind == FKind::Exists) {
            r = qeFormula(g->bound, rec(g->body()));
        } else if (g->kind == FKind::Forall) {
            r = fNot(qeFormula(g->bound, fNot(rec(g->body()))));
        } else {
            std::vector<Formula> ks;
            for (Formula k : g->kids) ks.push_back(rec(k));
            r = rebuild(g, std::move(ks));
        }
        memo.emplace(g, r);
        return r;
    };
    return rec(f);
}

}  // namespace foalt
