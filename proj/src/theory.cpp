#include "foalt/theory.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "foalt/linear.hpp"
#include "foalt/sat.hpp"

namespace foalt {

const char* theoryName(TheoryId t) { return t == TheoryId::EQ ? "EQ" : "LRA"; }

TheoryId theoryFromName(const std::string& s) {
    if (s == "EQ") return TheoryId::EQ;
    if (s == "LRA") return TheoryId::LRA;
    throw Error("unknown theory '" + s + "'");
}

Sort dataSort(TheoryId t) { return t == TheoryId::EQ ? Sort::Id : Sort::Real; }

Term valueTerm(Sort s, const Rational& v) {
    if (s == Sort::Id) return tIdConst(static_cast<std::uint32_t>(v.get_num().get_ui()));
    return tNum(v);
}

std::string valueString(Sort s, const Rational& v) {
    if (s == Sort::Id) return "v" + v.get_num().get_str();
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_str();
}

// ---------------------------------------------------------------------------
// Extended terms

ExtendedTerm ExtendedTerm::plain(Term t) {
    ExtendedTerm e;
    e.kind = Kind::Plain;
    e.term = t;
    return e;
}
ExtendedTerm ExtendedTerm::minusInfinity() {
    ExtendedTerm e;
    e.kind = Kind::MinusInf;
    return e;
}
ExtendedTerm ExtendedTerm::plusInfinity() {
    ExtendedTerm e;
    e.kind = Kind::PlusInf;
    return e;
}
ExtendedTerm ExtendedTerm::epsilonAbove(Term t) {
    ExtendedTerm e;
    e.kind = Kind::EpsAbove;
    e.term = t;
    return e;
}
ExtendedTerm ExtendedTerm::epsilonBelow(Term t) {
    ExtendedTerm e;
    e.kind = Kind::EpsBelow;
    e.term = t;
    return e;
}
ExtendedTerm ExtendedTerm::conditional(Formula c, ExtendedTerm a, ExtendedTerm b) {
    if (c->kind == FKind::True) return a;
    if (c->kind == FKind::False) return b;
    ExtendedTerm e;
    e.kind = Kind::Cond;
    e.cond = c;
    e.then = std::make_shared<const ExtendedTerm>(std::move(a));
    e.els = std::make_shared<const ExtendedTerm>(std::move(b));
    return e;
}

bool ExtendedTerm::isVirtual() const {
    switch (kind) {
        case Kind::Plain: return false;
        case Kind::Cond: return then->isVirtual() || els->isVirtual();
        default: return true;
    }
}

VarSet ExtendedTerm::vars() const {
    VarSet s;
    if (term) s = freeVars(term);
    if (cond) {
        auto c = freeVars(cond);
        s.insert(c.begin(), c.end());
    }
    if (then) {
        auto a = then->vars();
        s.insert(a.begin(), a.end());
    }
    if (els) {
        auto b = els->vars();
        s.insert(b.begin(), b.end());
    }
    return s;
}

std::string ExtendedTerm::str() const {
    switch (kind) {
        case Kind::Plain: return toString(term);
        case Kind::MinusInf: return "-oo";
        case Kind::PlusInf: return "+oo";
        case Kind::EpsAbove: return "(+ " + toString(term) + " eps)";
        case Kind::EpsBelow: return "(- " + toString(term) + " eps)";
        case Kind::Cond: return "(ite " + toString(cond) + " " + then->str() + " " + els->str() + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Evaluation

Rational evalTerm(Term t, const Valuation& nu) {
    switch (t->kind) {
        case TermKind::Lin: {
            Rational r = t->constant;
            for (auto& [v, c] : t->mons) {
                auto it = nu.find(v);
                if (it == nu.end()) throw Error("evaluate: no value for " + v->display());
                r += c * it->second;
            }
            return r;
        }
        case TermKind::IdVar: {
            auto it = nu.find(t->var);
            if (it == nu.end()) throw Error("evaluate: no value for " + t->var->display());
            return it->second;
        }
        case TermKind::IdConst: return Rational(t->index);
        case TermKind::Fresh: {
            std::set<Rational> used;
            for (Term a : t->args) used.insert(evalTerm(a, nu));
            Rational k = 0;
            while (used.count(k)) k += 1;
            return k;
        }
    }
    return 0;
}

namespace {
bool evalRec(Formula f, Valuation& nu, const Interpretation* interp, const std::vector<Rational>* domain) {
    switch (f->kind) {
        case FKind::True: return true;
        case FKind::False: return false;
        case FKind::EqId: return evalTerm(f->lhs, nu) == evalTerm(f->rhs, nu);
        case FKind::Lin: {
            int s = sgn(evalTerm(f->lhs, nu));
            return f->rel == Rel::Lt ? s < 0 : f->rel == Rel::Le ? s <= 0 : s == 0;
        }
        case FKind::Pred: {
            if (!interp) throw Error("evaluate: predicate atom " + toString(f) + " without an interpretation");
            std::vector<Rational> args;
            for (Term a : f->args) args.push_back(evalTerm(a, nu));
            auto it = interp->find(f->pred);
            return it != interp->end() && it->second.count(args);
        }
        case FKind::Not: return !evalRec(f->kids[0], nu, interp, domain);
        case FKind::And:
            for (Formula k : f->kids)
                if (!evalRec(k, nu, interp, domain)) return false;
            return true;
        case FKind::Or:
            for (Formula k : f->kids)
                if (evalRec(k, nu, interp, domain)) return true;
            return false;
        case FKind::Exists:
        case FKind::Forall: {
            bool universal = f->kind == FKind::Forall;
            if (domain) {
                Var v = f->bound;
                auto saved = nu.find(v) != nu.end() ? std::optional<Rational>(nu[v]) : std::nullopt;
                bool result = universal;
                for (const Rational& d : *domain) {
                    nu[v] = d;
                    bool b = evalRec(f->body(), nu, interp, domain);
                    if (b != universal) {
                        result = b;
                        break;
                    }
                }
                if (saved) nu[v] = *saved;
                else nu.erase(v);
                return result;
            }
            if (!f->predFree) throw Error("evaluate: unbounded quantifier over a formula with predicates");
            Subst s;
            for (Var v : f->fv) {
                auto it = nu.find(v);
                if (it == nu.end()) throw Error("evaluate: no value for " + v->display());
                s.emplace(v, valueTerm(v->sort, it->second));
            }
            Formula g = eliminateQuantifiers(substitute(f, s));
            Valuation empty;
            return evalRec(g, empty, interp, nullptr);
        }
    }
    return false;
}
}  // namespace

bool evaluate(Formula f, const Valuation& nu, const Interpretation* interp, const std::vector<Rational>* domain) {
    Valuation copy = nu;
    return evalRec(f, copy, interp, domain);
}

// ---------------------------------------------------------------------------
// Equality theory over an infinite domain

namespace {

struct EqLiteral {
    Term a, b;
    bool positive;
};

struct UnionFind {
    std::unordered_map<Term, Term> parent;
    Term find(Term t) {
        auto it = parent.find(t);
        if (it == parent.end()) {
            parent.emplace(t, t);
            return t;
        }
        if (it->second == t) return t;
        Term r = find(it->second);
        parent[t] = r;
        return r;
    }
    void unite(Term a, Term b) { parent[find(a)] = find(b); }
};

void addTermUf(UnionFind& uf, Term t) {
    uf.find(t);
    if (t->kind == TermKind::Fresh)
        for (Term a : t->args) addTermUf(uf, a);
}

// Returns an Id model on success.
std::optional<Valuation> solveEq(const std::vector<EqLiteral>& lits) {
    UnionFind uf;
    for (auto& l : lits) {
        addTermUf(uf, l.a);
        addTermUf(uf, l.b);
    }
    for (auto& l : lits)
        if (l.positive) uf.unite(l.a, l.b);
    for (auto& l : lits)
        if (!l.positive && uf.find(l.a) == uf.find(l.b)) return std::nullopt;
    std::unordered_map<Term, std::uint32_t> constOf;
    std::uint32_t maxConst = 0;
    std::vector<Term> terms;
    for (auto& kv : uf.parent) terms.push_back(kv.first);
    std::sort(terms.begin(), terms.end(), [](Term a, Term b) { return a->id < b->id; });
    for (Term t : terms) {
        if (t->kind == TermKind::IdConst) {
            Term r = uf.find(t);
            auto it = constOf.find(r);
            if (it != constOf.end() && it->second != t->index) return std::nullopt;
            constOf[r] = t->index;
            maxConst = std::max(maxConst, t->index + 1);
        }
        if (t->kind == TermKind::Fresh)
            for (Term a : t->args)
                if (uf.find(a) == uf.find(t)) return std::nullopt;
    }
    Valuation m;
    std::unordered_map<Term, Rational> classVal;
    std::uint32_t next = maxConst;
    for (Term t : terms) {
        Term r = uf.find(t);
        auto it = classVal.find(r);
        if (it == classVal.end()) {
            auto c = constOf.find(r);
            Rational v = c != constOf.end() ? Rational(c->second) : Rational(next++);
            it = classVal.emplace(r, v).first;
        }
        if (t->kind == TermKind::IdVar) m[t->var] = it->second;
    }
    return m;
}

// ---------------------------------------------------------------------------
// DPLL(T)

struct TheoryLit {
    Formula atom;
    bool positive;
};

bool isRealLit(const TheoryLit& l) { return l.atom->kind == FKind::Lin; }

std::optional<Valuation> theoryCheck(const std::vector<TheoryLit>& lits) {
    std::vector<LinConstraint> lin;
    std::vector<EqLiteral> eqs;
    for (auto& l : lits) {
        if (l.atom->kind == FKind::Lin) {
            LinOp op;
            if (l.positive) op = l.atom->rel == Rel::Lt ? LinOp::Lt : l.atom->rel == Rel::Le ? LinOp::Le : LinOp::Eq;
            else op = LinOp::Ne;  // negated Lt/Le never occur in normal form
            lin.push_back({l.atom->lhs, op});
        } else {
            eqs.push_back({l.atom->lhs, l.atom->rhs, l.positive});
        }
    }
    auto rm = solveLinear(lin);
    if (!rm) return std::nullopt;
    auto em = solveEq(eqs);
    if (!em) return std::nullopt;
    Valuation m(rm->begin(), rm->end());
    m.insert(em->begin(), em->end());
    return m;
}

std::vector<TheoryLit> minimizeCore(std::vector<TheoryLit> core) {
    // Restrict to the failing sort first.
    std::vector<TheoryLit> reals, ids;
    for (auto& l : core) (isRealLit(l) ? reals : ids).push_back(l);
    if (!reals.empty() && !theoryCheck(reals)) core = reals;
    else if (!ids.empty() && !theoryCheck(ids)) core = ids;
    for (std::size_t i = 0; i < core.size();) {
        auto trial = core;
        trial.erase(trial.begin() + static_cast<long>(i));
        if (!theoryCheck(trial)) core = std::move(trial);
        else ++i;
    }
    return core;
}

class Encoder {
public:
    SatSolver sat;
    std::unordered_map<Formula, int> atomVar;
    std::unordered_map<Formula, int> nodeVar;
    std::vector<Formula> atoms;

    int atomLit(Formula a) {
        auto it = atomVar.find(a);
        if (it != atomVar.end()) return it->second;
        int v = sat.newVar();
        atomVar.emplace(a, v);
        atoms.push_back(a);
        return v;
    }

    int encode(Formula f) {
        if (f->isAtom()) return atomLit(f);
        if (f->kind == FKind::Not) return -atomLit(f->kids[0]);
        auto it = nodeVar.find(f);
        if (it != nodeVar.end()) return it->second;
        int n = sat.newVar();
        nodeVar.emplace(f, n);
        if (f->kind == FKind::True) {
            sat.addClause({n});
        } else if (f->kind == FKind::False) {
            sat.addClause({-n});
        } else if (f->kind == FKind::And) {
            for (Formula k : f->kids) sat.addClause({-n, encode(k)});
        } else if (f->kind == FKind::Or) {
            std::vector<int> c{-n};
            for (Formula k : f->kids) c.push_back(encode(k));
            sat.addClause(c);
        } else {
            throw Error("checkSatQf: quantified formula");
        }
        return n;
    }

    bool litTrue(int lit) const { return lit > 0 ? sat.modelValue(lit) : !sat.modelValue(-lit); }

    // Literals of a satisfying implicant of f under the current model.
    void implicant(Formula f, std::vector<Formula>& out, std::unordered_set<Formula>& seen) {
        if (!seen.insert(f).second) return;
        if (f->isLiteral()) {
            out.push_back(f);
            return;
        }
        if (f->kind == FKind::And) {
            for (Formula k : f->kids) implicant(k, out, seen);
        } else if (f->kind == FKind::Or) {
            for (Formula k : f->kids)
                if (litTrue(encode(k))) {
                    implicant(k, out, seen);
                    return;
                }
            throw Error("checkSatQf: inconsistent boolean model");
        }
    }
};

struct CongruencePair {
    Formula a, b;
    std::vector<Formula> eqs;  // argument equalities that are not trivially true
};

}  // namespace

QeStats& qeStats() {
    static QeStats s;
    return s;
}

SatResult checkSatQf(Formula f) {
    ++qeStats().satCalls;
    SatResult res;
    if (!f->quantFree) throw Error("checkSatQf: formula has quantifiers");
    if (f->kind == FKind::False) return res;
    Encoder enc;
    int root = enc.encode(f);
    enc.sat.addClause({root});

    // Congruence clauses between atoms of the same predicate symbol.
    std::vector<Formula> preds;
    for (Formula a : enc.atoms)
        if (a->kind == FKind::Pred) preds.push_back(a);
    std::vector<CongruencePair> pairs;
    for (std::size_t i = 0; i < preds.size(); ++i)
        for (std::size_t j = i + 1; j < preds.size(); ++j) {
            Formula a = preds[i], b = preds[j];
            if (a->pred != b->pred) continue;
            CongruencePair cp{a, b, {}};
            bool possible = true;
            for (std::size_t k = 0; k < a->args.size(); ++k) {
                Formula e = fEq(a->args[k], b->args[k]);
                if (e->kind == FKind::True) continue;
                if (e->kind == FKind::False) {
                    possible = false;
                    break;
                }
                cp.eqs.push_back(e);
            }
            if (!possible) continue;
            std::vector<int> c1{-enc.atomLit(a), enc.atomLit(b)}, c2{enc.atomLit(a), -enc.atomLit(b)};
            for (Formula e : cp.eqs) {
                c1.push_back(-enc.atomLit(e));
                c2.push_back(-enc.atomLit(e));
            }
            enc.sat.addClause(c1);
            enc.sat.addClause(c2);
            pairs.push_back(std::move(cp));
        }

    for (;;) {
        if (!enc.sat.solve()) return res;
        std::vector<Formula> lits;
        std::unordered_set<Formula> seen;
        enc.implicant(f, lits, seen);
        std::vector<TheoryLit> tlits;
        std::unordered_set<Formula> posPreds, negPreds;
        std::unordered_set<Formula> addedAtoms;
        for (Formula l : lits) {
            bool pos = l->kind != FKind::Not;
            Formula a = pos ? l : l->kids[0];
            if (a->kind == FKind::Pred) (pos ? posPreds : negPreds).insert(a);
            else if (addedAtoms.insert(a).second) tlits.push_back({a, pos});
        }
        for (auto& cp : pairs) {
            bool clash = (posPreds.count(cp.a) && negPreds.count(cp.b)) || (posPreds.count(cp.b) && negPreds.count(cp.a));
            if (!clash) continue;
            for (Formula e : cp.eqs)
                if (!enc.sat.modelValue(enc.atomLit(e))) {
                    if (addedAtoms.insert(e).second) tlits.push_back({e, false});
                    break;
                }
        }
        auto model = theoryCheck(tlits);
        if (model) {
            res.sat = true;
            Valuation m = *model;
            Rational nextId = 0;
            for (auto& [v, q] : m)
                if (v->sort == Sort::Id && q >= nextId) nextId = q + 1;
            std::function<void(Term)> scanConst = [&](Term t) {
                if (t->kind == TermKind::IdConst && Rational(t->index) >= nextId) nextId = t->index + 1;
                for (Term a : t->args) scanConst(a);
            };
            for (Formula a : enc.atoms) {
                if (a->lhs) scanConst(a->lhs);
                if (a->rhs) scanConst(a->rhs);
                for (Term t : a->args) scanConst(t);
            }
            for (Var v : f->fv)
                if (!m.count(v)) m[v] = v->sort == Sort::Id ? Rational(nextId++) : Rational(0);
            for (auto& kv : m)
                if (std::binary_search(f->fv.begin(), f->fv.end(), kv.first, VarLess{})) res.model.insert(kv);
            // Predicate atoms: true exactly on the argument tuples of chosen positive atoms.
            std::set<std::pair<Pred, std::vector<Rational>>> truth;
            auto full = m;
            for (Formula a : posPreds) {
                std::vector<Rational> args;
                for (Term t : a->args) args.push_back(evalTerm(t, full));
                truth.insert({a->pred, args});
            }
            for (Formula a : enc.atoms)
                if (a->kind == FKind::Pred) {
                    std::vector<Rational> args;
                    bool ok = true;
                    for (Term t : a->args) {
                        try {
                            args.push_back(evalTerm(t, full));
                        } catch (Error&) {
                            ok = false;
                        }
                    }
                    res.predAtoms[a] = ok && truth.count({a->pred, args});
                }
            return res;
        }
        auto core = minimizeCore(tlits);
        std::vector<int> block;
        for (auto& l : core) {
            int v = enc.atomLit(l.atom);
            block.push_back(l.positive ? -v : v);
        }
        if (!enc.sat.addClause(block)) return res;
    }
}

bool isSatQf(Formula f) { return checkSatQf(f).sat; }
bool entailsQf(Formula a, Formula b) { return !isSatQf(fAnd(a, fNot(b))); }
bool equivalentQf(Formula a, Formula b) { return entailsQf(a, b) && entailsQf(b, a); }

}  // namespace foalt
