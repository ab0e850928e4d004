#include "foalt/logic.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace foalt {

namespace {

std::mutex& tableMutex() {
    static std::mutex m;
    return m;
}

inline void hashMix(std::size_t& h, std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

std::size_t hashRational(const Rational& q) {
    std::size_t h = 0;
    hashMix(h, mpz_size(q.get_num_mpz_t()) ? mpz_getlimbn(q.get_num_mpz_t(), 0) : 0);
    hashMix(h, static_cast<std::size_t>(mpz_sgn(q.get_num_mpz_t()) + 1));
    hashMix(h, mpz_getlimbn(q.get_den_mpz_t(), 0));
    return h;
}

std::uint64_t satAdd(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    return r < a ? UINT64_MAX : r;
}

std::vector<Var> unionFv(const std::vector<Var>& a, const std::vector<Var>& b) {
    std::vector<Var> r;
    r.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r), VarLess{});
    return r;
}

}  // namespace

const char* sortName(Sort s) {
    switch (s) {
        case Sort::Bool: return "Bool";
        case Sort::Real: return "Real";
        case Sort::Id: return "Id";
    }
    return "?";
}

Sort sortFromName(const std::string& name) {
    if (name == "Real") return Sort::Real;
    if (name == "Id") return Sort::Id;
    if (name == "Bool") return Sort::Bool;
    throw Error("unknown sort '" + name + "'");
}

std::string quoteSymbol(const std::string& s) {
    static const std::string extra = "~!@$%^&*_-+=<>.?/";
    bool simple = !s.empty() && !std::isdigit(static_cast<unsigned char>(s[0]));
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && extra.find(c) == std::string::npos) simple = false;
    return simple ? s : "|" + s + "|";
}

// ---------------------------------------------------------------------------
// Variables and predicates

namespace {
struct VarTable {
    std::map<std::tuple<std::string, Sort, int>, std::unique_ptr<VarNode>> vars;
    std::set<std::string> names;
    std::uint32_t next = 0;
    std::uint64_t freshCounter = 0;
};
VarTable& varTable() {
    static VarTable t;
    return t;
}

Var internVar(const std::string& name, Sort sort, int stamp) {
    auto& t = varTable();
    auto key = std::make_tuple(name, sort, stamp);
    auto it = t.vars.find(key);
    if (it != t.vars.end()) return it->second.get();
    auto node = std::make_unique<VarNode>(VarNode{name, sort, stamp, t.next++});
    Var v = node.get();
    t.vars.emplace(key, std::move(node));
    t.names.insert(name);
    return v;
}
}  // namespace

std::string VarNode::display() const {
    return stamp < 0 ? name : name + "@" + std::to_string(stamp);
}

Var mkVar(const std::string& name, Sort sort, int stamp) {
    if (sort == Sort::Bool) throw Error("variables of sort Bool are not supported: " + name);
    std::lock_guard<std::mutex> lock(tableMutex());
    return internVar(name, sort, stamp);
}

Var freshVar(const std::string& base, Sort sort) {
    std::string b = base.substr(0, base.find('!'));
    std::lock_guard<std::mutex> lock(tableMutex());
    auto& t = varTable();
    for (;;) {
        std::string name = b + "!" + std::to_string(++t.freshCounter);
        if (!t.names.count(name)) return internVar(name, sort, -1);
    }
}

bool VarLess::operator()(Var a, Var b) const {
    if (a == b) return false;
    if (a->name != b->name) return a->name < b->name;
    if (a->stamp != b->stamp) return a->stamp < b->stamp;
    return a->sort < b->sort;
}

namespace {
struct PredTable {
    std::map<std::tuple<std::string, std::vector<Sort>, int>, std::unique_ptr<PredNode>> preds;
    std::uint32_t next = 0;
};
PredTable& predTable() {
    static PredTable t;
    return t;
}
}  // namespace

std::string PredNode::display() const {
    return stamp < 0 ? name : name + "@" + std::to_string(stamp);
}

Pred mkPred(const std::string& name, const std::vector<Sort>& argSorts, int stamp) {
    std::lock_guard<std::mutex> lock(tableMutex());
    auto& t = predTable();
    auto key = std::make_tuple(name, argSorts, stamp);
    auto it = t.preds.find(key);
    if (it != t.preds.end()) return it->second.get();
    auto node = std::make_unique<PredNode>(PredNode{name, argSorts, stamp, t.next++});
    Pred p = node.get();
    t.preds.emplace(key, std::move(node));
    return p;
}

// ---------------------------------------------------------------------------
// Term interning

namespace {
struct TermHash {
    std::size_t operator()(const TermNode* t) const { return t->hash; }
};
struct TermEq {
    bool operator()(const TermNode* a, const TermNode* b) const {
        if (a->kind != b->kind || a->sort != b->sort) return false;
        switch (a->kind) {
            case TermKind::Lin:
                if (a->constant != b->constant || a->mons.size() != b->mons.size()) return false;
                for (std::size_t i = 0; i < a->mons.size(); ++i)
                    if (a->mons[i].first != b->mons[i].first || a->mons[i].second != b->mons[i].second) return false;
                return true;
            case TermKind::IdVar: return a->var == b->var;
            case TermKind::IdConst: return a->index == b->index;
            case TermKind::Fresh: return a->args == b->args;
        }
        return false;
    }
};
struct TermTable {
    std::unordered_set<const TermNode*, TermHash, TermEq> set;
    std::deque<TermNode> store;
};
TermTable& termTable() {
    static TermTable t;
    return t;
}

Term internTerm(TermNode&& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 31 + static_cast<std::size_t>(n.sort);
    switch (n.kind) {
        case TermKind::Lin:
            for (auto& [v, c] : n.mons) {
                hashMix(h, v->id);
                hashMix(h, hashRational(c));
                n.fv.push_back(v);
            }
            hashMix(h, hashRational(n.constant));
            break;
        case TermKind::IdVar:
            hashMix(h, n.var->id);
            n.fv.push_back(n.var);
            break;
        case TermKind::IdConst: hashMix(h, n.index); break;
        case TermKind::Fresh:
            for (Term a : n.args) {
                hashMix(h, a->id);
                n.fv = unionFv(n.fv, a->fv);
            }
            break;
    }
    n.hash = h;
    std::lock_guard<std::mutex> lock(tableMutex());
    auto& t = termTable();
    auto it = t.set.find(&n);
    if (it != t.set.end()) return *it;
    n.id = static_cast<std::uint32_t>(t.store.size());
    t.store.push_back(std::move(n));
    const TermNode* p = &t.store.back();
    t.set.insert(p);
    return p;
}
}  // namespace

Term tLin(const std::vector<std::pair<Var, Rational>>& mons, const Rational& c) {
    std::map<Var, Rational, VarLess> acc;
    for (auto& [v, q] : mons) {
        if (v->sort != Sort::Real) throw Error("sort mismatch: " + v->display() + " is not Real");
        acc[v] += q;
    }
    TermNode n{};
    n.kind = TermKind::Lin;
    n.sort = Sort::Real;
    for (auto& [v, q] : acc)
        if (q != 0) n.mons.emplace_back(v, q);
    n.constant = c;
    return internTerm(std::move(n));
}

Term tVar(Var v) {
    if (v->sort == Sort::Real) return tLin({{v, Rational(1)}}, Rational(0));
    TermNode n{};
    n.kind = TermKind::IdVar;
    n.sort = Sort::Id;
    n.var = v;
    return internTerm(std::move(n));
}

Term tNum(const Rational& q) { return tLin({}, q); }

Term tIdConst(std::uint32_t k) {
    TermNode n{};
    n.kind = TermKind::IdConst;
    n.sort = Sort::Id;
    n.index = k;
    return internTerm(std::move(n));
}

Term tFresh(std::vector<Term> args) {
    for (Term a : args)
        if (a->sort != Sort::Id) throw Error("fresh-distinct expects Id arguments");
    std::sort(args.begin(), args.end(), [](Term a, Term b) { return a->id < b->id; });
    args.erase(std::unique(args.begin(), args.end()), args.end());
    TermNode n{};
    n.kind = TermKind::Fresh;
    n.sort = Sort::Id;
    n.args = std::move(args);
    return internTerm(std::move(n));
}

Term tAdd(Term a, Term b) {
    if (a->sort != Sort::Real || b->sort != Sort::Real) throw Error("addition over non-Real terms");
    auto m = a->mons;
    m.insert(m.end(), b->mons.begin(), b->mons.end());
    return tLin(m, a->constant + b->constant);
}

Term tScale(const Rational& c, Term a) {
    if (a->sort != Sort::Real) throw Error("scaling a non-Real term");
    auto m = a->mons;
    for (auto& p : m) p.second *= c;
    return tLin(m, a->constant * c);
}

Term tSub(Term a, Term b) { return tAdd(a, tScale(Rational(-1), b)); }

Rational coefficient(Term t, Var v) {
    for (auto& [w, c] : t->mons)
        if (w == v) return c;
    return Rational(0);
}

bool termHasVar(Term t, Var v) { return std::binary_search(t->fv.begin(), t->fv.end(), v, VarLess{}); }

bool isGround(Term t) { return t->fv.empty(); }

// ---------------------------------------------------------------------------
// Formula interning

namespace {
struct FHash {
    std::size_t operator()(const FormulaNode* f) const { return f->hash; }
};
struct FEq {
    bool operator()(const FormulaNode* a, const FormulaNode* b) const {
        return a->kind == b->kind && a->rel == b->rel && a->lhs == b->lhs && a->rhs == b->rhs &&
               a->pred == b->pred && a->args == b->args && a->kids == b->kids && a->bound == b->bound;
    }
};
struct FTable {
    std::unordered_set<const FormulaNode*, FHash, FEq> set;
    std::deque<FormulaNode> store;
};
FTable& fTable() {
    static FTable t;
    return t;
}

Formula internF(FormulaNode&& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 131 + static_cast<std::size_t>(n.rel);
    if (n.lhs) {
        hashMix(h, n.lhs->id);
        n.fv = n.lhs->fv;
    }
    if (n.rhs) {
        hashMix(h, n.rhs->id);
        n.fv = unionFv(n.fv, n.rhs->fv);
    }
    if (n.pred) hashMix(h, n.pred->id);
    for (Term a : n.args) {
        hashMix(h, a->id);
        n.fv = unionFv(n.fv, a->fv);
    }
    n.treeSize = 1 + n.args.size();
    n.quantFree = n.kind != FKind::Exists && n.kind != FKind::Forall;
    n.predFree = n.kind != FKind::Pred;
    for (Formula k : n.kids) {
        n.quantFree = n.quantFree && k->quantFree;
        n.predFree = n.predFree && k->predFree;
        hashMix(h, k->id);
        n.fv = unionFv(n.fv, k->fv);
        n.treeSize = satAdd(n.treeSize, k->treeSize);
    }
    // Negation is not counted, so dual preserves size.
    if (n.kind == FKind::Not) n.treeSize = n.kids[0]->treeSize;
    if (n.bound) {
        hashMix(h, n.bound->id);
        auto it = std::lower_bound(n.fv.begin(), n.fv.end(), n.bound, VarLess{});
        if (it != n.fv.end() && *it == n.bound) n.fv.erase(it);
    }
    n.hash = h;
    std::lock_guard<std::mutex> lock(tableMutex());
    auto& t = fTable();
    auto it = t.set.find(&n);
    if (it != t.set.end()) return *it;
    n.id = static_cast<std::uint32_t>(t.store.size());
    t.store.push_back(std::move(n));
    const FormulaNode* p = &t.store.back();
    t.set.insert(p);
    return p;
}

Formula mkConst(FKind k) {
    FormulaNode n{};
    n.kind = k;
    return internF(std::move(n));
}
}  // namespace

Formula fTrue() {
    static Formula t = mkConst(FKind::True);
    return t;
}
Formula fFalse() {
    static Formula f = mkConst(FKind::False);
    return f;
}
Formula fBool(bool b) { return b ? fTrue() : fFalse(); }

Formula fLinAtom(Rel rel, Term t) {
    if (t->sort != Sort::Real) throw Error("arithmetic atom over non-Real term");
    if (t->mons.empty()) {
        int s = sgn(t->constant);
        switch (rel) {
            case Rel::Lt: return fBool(s < 0);
            case Rel::Le: return fBool(s <= 0);
            case Rel::Eq: return fBool(s == 0);
        }
    }
    Rational lead = t->mons[0].second;
    if (rel != Rel::Eq) lead = abs(lead);
    if (lead != 1) t = tScale(Rational(1) / lead, t);
    FormulaNode n{};
    n.kind = FKind::Lin;
    n.rel = rel;
    n.lhs = t;
    return internF(std::move(n));
}

Formula fEq(Term a, Term b) {
    if (a->sort != b->sort) throw Error("sort mismatch in equality");
    if (a->sort == Sort::Real) return fLinAtom(Rel::Eq, tSub(a, b));
    if (a == b) return fTrue();
    if (a->kind == TermKind::IdConst && b->kind == TermKind::IdConst) return fFalse();
    auto contains = [](Term f, Term t) {
        return f->kind == TermKind::Fresh && std::find(f->args.begin(), f->args.end(), t) != f->args.end();
    };
    if (contains(a, b) || contains(b, a)) return fFalse();
    if (a->id > b->id) std::swap(a, b);
    FormulaNode n{};
    n.kind = FKind::EqId;
    n.lhs = a;
    n.rhs = b;
    return internF(std::move(n));
}

Formula fLt(Term a, Term b) { return fLinAtom(Rel::Lt, tSub(a, b)); }
Formula fLe(Term a, Term b) { return fLinAtom(Rel::Le, tSub(a, b)); }
Formula fGt(Term a, Term b) { return fLt(b, a); }
Formula fGe(Term a, Term b) { return fLe(b, a); }

Formula fPred(Pred p, std::vector<Term> args) {
    if (args.size() != p->arity())
        throw Error("predicate " + p->display() + " expects " + std::to_string(p->arity()) + " arguments");
    for (std::size_t i = 0; i < args.size(); ++i)
        if (args[i]->sort != p->argSorts[i])
            throw Error("sort mismatch in argument " + std::to_string(i + 1) + " of " + p->display());
    FormulaNode n{};
    n.kind = FKind::Pred;
    n.pred = p;
    n.args = std::move(args);
    return internF(std::move(n));
}

Formula fNot(Formula f) {
    switch (f->kind) {
        case FKind::True: return fFalse();
        case FKind::False: return fTrue();
        case FKind::Lin:
            if (f->rel == Rel::Lt) return fLinAtom(Rel::Le, tScale(Rational(-1), f->lhs));
            if (f->rel == Rel::Le) return fLinAtom(Rel::Lt, tScale(Rational(-1), f->lhs));
            [[fallthrough]];
        case FKind::EqId:
        case FKind::Pred: {
            FormulaNode n{};
            n.kind = FKind::Not;
            n.kids = {f};
            return internF(std::move(n));
        }
        case FKind::Not: return f->kids[0];
        case FKind::And:
        case FKind::Or: {
            std::vector<Formula> ks;
            ks.reserve(f->kids.size());
            for (Formula k : f->kids) ks.push_back(fNot(k));
            return f->kind == FKind::And ? fOr(std::move(ks)) : fAnd(std::move(ks));
        }
        case FKind::Exists: return fForall(f->bound, fNot(f->body()));
        case FKind::Forall: return fExists(f->bound, fNot(f->body()));
    }
    return f;
}

namespace {
Formula mkJunction(FKind kind, std::vector<Formula> fs) {
    const FKind unit = kind == FKind::And ? FKind::True : FKind::False;
    const FKind zero = kind == FKind::And ? FKind::False : FKind::True;
    std::vector<Formula> out;
    std::unordered_set<Formula> seen;
    std::vector<Formula> stack(fs.rbegin(), fs.rend());
    while (!stack.empty()) {
        Formula f = stack.back();
        stack.pop_back();
        if (f->kind == unit) continue;
        if (f->kind == zero) return f;
        if (f->kind == kind) {
            for (auto it = f->kids.rbegin(); it != f->kids.rend(); ++it) stack.push_back(*it);
            continue;
        }
        if (seen.insert(f).second) out.push_back(f);
    }
    for (Formula f : out)
        if (f->isLiteral() && seen.count(fNot(f))) return kind == FKind::And ? fFalse() : fTrue();
    if (out.empty()) return kind == FKind::And ? fTrue() : fFalse();
    if (out.size() == 1) return out[0];
    FormulaNode n{};
    n.kind = kind;
    n.kids = std::move(out);
    return internF(std::move(n));
}
}  // namespace

Formula fAnd(std::vector<Formula> fs) { return mkJunction(FKind::And, std::move(fs)); }
Formula fOr(std::vector<Formula> fs) { return mkJunction(FKind::Or, std::move(fs)); }
Formula fAnd(Formula a, Formula b) { return fAnd(std::vector<Formula>{a, b}); }
Formula fOr(Formula a, Formula b) { return fOr(std::vector<Formula>{a, b}); }
Formula fImplies(Formula a, Formula b) { return fOr(fNot(a), b); }

Formula fQuant(bool universal, Var v, Formula body) {
    if (!hasFreeVar(body, v)) return body;
    FormulaNode n{};
    n.kind = universal ? FKind::Forall : FKind::Exists;
    n.bound = v;
    n.kids = {body};
    return internF(std::move(n));
}
Formula fExists(Var v, Formula body) { return fQuant(false, v, body); }
Formula fForall(Var v, Formula body) { return fQuant(true, v, body); }

Formula fExistsAll(const std::vector<Var>& vs, Formula body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = fExists(*it, body);
    return body;
}

Formula rebuild(Formula f, std::vector<Formula> kids) {
    switch (f->kind) {
        case FKind::And: return fAnd(std::move(kids));
        case FKind::Or: return fOr(std::move(kids));
        case FKind::Not: return fNot(kids[0]);
        case FKind::Exists:
        case FKind::Forall: return fQuant(f->kind == FKind::Forall, f->bound, kids[0]);
        default: return f;
    }
}

// ---------------------------------------------------------------------------
// Free variables and substitution

VarSet freeVars(Formula f) { return VarSet(f->fv.begin(), f->fv.end()); }
VarSet freeVars(Term t) { return VarSet(t->fv.begin(), t->fv.end()); }

bool hasFreeVar(Formula f, Var v) { return std::binary_search(f->fv.begin(), f->fv.end(), v, VarLess{}); }

Term substitute(Term t, const Subst& s) {
    if (s.empty() || t->fv.empty()) return t;
    switch (t->kind) {
        case TermKind::Lin: {
            Term acc = tNum(t->constant);
            bool changed = false;
            std::vector<std::pair<Var, Rational>> keep;
            for (auto& [v, c] : t->mons) {
                auto it = s.find(v);
                if (it == s.end()) {
                    keep.emplace_back(v, c);
                    continue;
                }
                if (it->second->sort != Sort::Real) throw Error("sort mismatch substituting " + v->display());
                acc = tAdd(acc, tScale(c, it->second));
                changed = true;
            }
            if (!changed) return t;
            return tAdd(acc, tLin(keep, Rational(0)));
        }
        case TermKind::IdVar: {
            auto it = s.find(t->var);
            if (it == s.end()) return t;
            if (it->second->sort != Sort::Id) throw Error("sort mismatch substituting " + t->var->display());
            return it->second;
        }
        case TermKind::IdConst: return t;
        case TermKind::Fresh: {
            std::vector<Term> args;
            for (Term a : t->args) args.push_back(substitute(a, s));
            return tFresh(std::move(args));
        }
    }
    return t;
}

namespace {
Formula substAtom(Formula f, const Subst& s) {
    switch (f->kind) {
        case FKind::EqId: return fEq(substitute(f->lhs, s), substitute(f->rhs, s));
        case FKind::Lin: return fLinAtom(f->rel, substitute(f->lhs, s));
        case FKind::Pred: {
            std::vector<Term> args;
            for (Term a : f->args) args.push_back(substitute(a, s));
            return fPred(f->pred, std::move(args));
        }
        default: return f;
    }
}

bool touches(Formula f, const Subst& s) {
    if (s.empty() || f->fv.empty()) return false;
    if (s.size() < f->fv.size()) {
        for (auto& kv : s)
            if (hasFreeVar(f, kv.first)) return true;
        return false;
    }
    for (Var v : f->fv)
        if (s.count(v)) return true;
    return false;
}

Formula substRec(Formula f, const Subst& s, std::unordered_map<Formula, Formula>& memo) {
    if (!touches(f, s)) return f;
    auto it = memo.find(f);
    if (it != memo.end()) return it->second;
    Formula r;
    if (f->isAtom()) {
        r = substAtom(f, s);
    } else if (f->kind == FKind::Not) {
        r = fNot(substAtom(f->kids[0], s));
    } else if (f->isQuant()) {
        Subst inner;
        for (auto& kv : s)
            if (kv.first != f->bound && hasFreeVar(f->body(), kv.first)) inner.emplace(kv.first, kv.second);
        Var v = f->bound;
        bool capture = false;
        for (auto& kv : inner)
            if (termHasVar(kv.second, v)) capture = true;
        if (capture) {
            Var nv = freshVar(v->name, v->sort);
            inner[v] = tVar(nv);
            v = nv;
        }
        std::unordered_map<Formula, Formula> m2;
        r = fQuant(f->kind == FKind::Forall, v, substRec(f->body(), inner, m2));
    } else {
        std::vector<Formula> ks;
        ks.reserve(f->kids.size());
        for (Formula k : f->kids) ks.push_back(substRec(k, s, memo));
        r = rebuild(f, std::move(ks));
    }
    memo.emplace(f, r);
    return r;
}
}  // namespace

Formula substitute(Formula f, const Subst& s) {
    for (auto& [v, t] : s)
        if (v->sort != t->sort) throw Error("sort mismatch substituting " + v->display());
    std::unordered_map<Formula, Formula> memo;
    return substRec(f, s, memo);
}

Formula mapAtoms(Formula f, const std::function<Formula(Formula)>& fn) {
    std::unordered_map<Formula, Formula> memo;
    std::function<Formula(Formula)> rec = [&](Formula g) -> Formula {
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        Formula r = g;
        if (g->isAtom()) {
            if (Formula x = fn(g)) r = x;
        } else if (g->kind == FKind::Not) {
            if (Formula x = fn(g->kids[0])) r = fNot(x);
        } else if (!g->kids.empty()) {
            std::vector<Formula> ks;
            ks.reserve(g->kids.size());
            for (Formula k : g->kids) ks.push_back(rec(k));
            r = ks == g->kids ? g : rebuild(g, std::move(ks));
        }
        memo.emplace(g, r);
        return r;
    };
    return rec(f);
}

Formula mapPreds(Formula f, const std::function<Pred(Pred)>& fn) {
    return mapAtoms(f, [&](Formula a) -> Formula {
        if (a->kind != FKind::Pred) return nullptr;
        Pred p = fn(a->pred);
        return p == a->pred ? nullptr : fPred(p, a->args);
    });
}

// ---------------------------------------------------------------------------
// Prenex form

Formula PrenexFormula::toFormula() const {
    Formula f = matrix;
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) f = fQuant(it->universal, it->var, f);
    return f;
}

namespace {
void pull(Formula f, VarSet& used, std::vector<QVar>& prefix, Formula& matrix) {
    if (f->isQuant()) {
        Var v = f->bound;
        Formula body = f->body();
        if (used.count(v)) {
            Var nv = freshVar(v->name, v->sort);
            body = substitute(body, Subst{{v, tVar(nv)}});
            v = nv;
        }
        used.insert(v);
        prefix.push_back({f->kind == FKind::Forall, v});
        pull(body, used, prefix, matrix);
        return;
    }
    if (f->kind == FKind::And || f->kind == FKind::Or) {
        if (f->quantFree) {
            matrix = f;
            return;
        }
        std::vector<Formula> ms;
        for (Formula k : f->kids) {
            Formula m;
            pull(k, used, prefix, m);
            ms.push_back(m);
        }
        matrix = rebuild(f, std::move(ms));
        return;
    }
    matrix = f;
}
}  // namespace

PrenexFormula prenex(Formula f) {
    PrenexFormula p;
    VarSet used = freeVars(f);
    pull(f, used, p.prefix, p.matrix);
    return p;
}

// ---------------------------------------------------------------------------
// Positivity, duals, stamps

bool isPositive(Formula f) {
    std::unordered_set<Formula> seen;
    std::function<bool(Formula)> rec = [&](Formula g) {
        if (!seen.insert(g).second) return true;
        if (g->kind == FKind::Not) return g->kids[0]->kind != FKind::Pred;
        for (Formula k : g->kids)
            if (!rec(k)) return false;
        return true;
    };
    return rec(f);
}

bool isPositive(Formula f, const std::set<Pred>& preds) {
    std::unordered_set<Formula> seen;
    std::function<bool(Formula)> rec = [&](Formula g) {
        if (!seen.insert(g).second) return true;
        if (g->kind == FKind::Not) return g->kids[0]->kind != FKind::Pred || !preds.count(g->kids[0]->pred);
        for (Formula k : g->kids)
            if (!rec(k)) return false;
        return true;
    };
    return rec(f);
}

Formula dual(Formula f) {
    if (!isPositive(f)) throw Error("dual of a non-positive formula");
    std::unordered_map<Formula, Formula> memo;
    std::function<Formula(Formula)> rec = [&](Formula g) -> Formula {
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        Formula r;
        switch (g->kind) {
            case FKind::True: r = fFalse(); break;
            case FKind::False: r = fTrue(); break;
            case FKind::Pred: r = g; break;
            case FKind::EqId:
            case FKind::Lin:
            case FKind::Not: r = fNot(g); break;
            case FKind::And:
            case FKind::Or: {
                std::vector<Formula> ks;
                for (Formula k : g->kids) ks.push_back(rec(k));
                r = g->kind == FKind::And ? fOr(std::move(ks)) : fAnd(std::move(ks));
                break;
            }
            case FKind::Exists: r = fForall(g->bound, rec(g->body())); break;
            case FKind::Forall: r = fExists(g->bound, rec(g->body())); break;
        }
        memo.emplace(g, r);
        return r;
    };
    return rec(f);
}

Formula stamp(Formula f, int i, const std::vector<Var>& inputs) {
    for (Pred p : predSymbols(f))
        if (p->stamp >= 0) throw Error("stamp: predicate " + p->display() + " is already stamped");
    Subst s;
    for (Var x : inputs) {
        if (x->stamp >= 0) throw Error("stamp: variable " + x->display() + " is already stamped");
        s.emplace(x, tVar(mkVar(x->name, x->sort, i)));
    }
    Formula g = substitute(f, s);
    return mapPreds(g, [i](Pred p) { return mkPred(p->name, p->argSorts, i); });
}

Formula unstampPreds(Formula f) {
    return mapPreds(f, [](Pred p) { return p->stamp < 0 ? p : mkPred(p->name, p->argSorts, -1); });
}

bool isQuantifierFree(Formula f) { return f->quantFree; }

std::vector<Formula> predAtoms(Formula f) {
    std::vector<Formula> out;
    std::unordered_set<Formula> seen;
    std::function<void(Formula)> rec = [&](Formula g) {
        if (!seen.insert(g).second) return;
        if (g->kind == FKind::Pred) {
            out.push_back(g);
            return;
        }
        for (Formula k : g->kids) rec(k);
    };
    rec(f);
    return out;
}

bool hasPredicates(Formula f) { return !f->predFree; }

std::set<Pred> predSymbols(Formula f) {
    std::set<Pred> out;
    for (Formula a : predAtoms(f)) out.insert(a->pred);
    return out;
}

std::vector<Formula> conjuncts(Formula f) {
    if (f->kind == FKind::True) return {};
    if (f->kind == FKind::And) return f->kids;
    return {f};
}

// ---------------------------------------------------------------------------
// Normal forms for comparison

namespace {
Formula alphaRec(Formula f, Subst& env, int& counter, const std::set<std::string>& avoid) {
    if (f->isAtom()) return substAtom(f, env);
    if (f->kind == FKind::Not) return fNot(substAtom(f->kids[0], env));
    if (f->isQuant()) {
        std::string name;
        do name = "z" + std::to_string(counter++);
        while (avoid.count(name));
        Var nv = mkVar(name, f->bound->sort);
        auto saved = env.find(f->bound) != env.end() ? std::optional<Term>(env[f->bound]) : std::nullopt;
        env[f->bound] = tVar(nv);
        Formula body = alphaRec(f->body(), env, counter, avoid);
        if (saved) env[f->bound] = *saved;
        else env.erase(f->bound);
        return fQuant(f->kind == FKind::Forall, nv, body);
    }
    if (f->kids.empty()) return f;
    std::vector<Formula> ks;
    for (Formula k : f->kids) ks.push_back(alphaRec(k, env, counter, avoid));
    return rebuild(f, std::move(ks));
}

std::string shapeKey(Formula f) {
    // Bound names erased so that sorting is insensitive to them.
    std::set<std::string> none;
    Subst env;
    std::function<Formula(Formula)> erase = [&](Formula g) -> Formula {
        if (g->isAtom()) return substAtom(g, env);
        if (g->kind == FKind::Not) return fNot(substAtom(g->kids[0], env));
        if (g->isQuant()) {
            Var nv = mkVar("_", g->bound->sort);
            auto prev = env.find(g->bound);
            std::optional<Term> saved = prev != env.end() ? std::optional<Term>(prev->second) : std::nullopt;
            env[g->bound] = tVar(nv);
            Formula b = erase(g->body());
            if (saved) env[g->bound] = *saved;
            else env.erase(g->bound);
            FormulaNode n{};
            n.kind = g->kind;
            n.bound = nv;
            n.kids = {b};
            return internF(std::move(n));
        }
        if (g->kids.empty()) return g;
        std::vector<Formula> ks;
        for (Formula k : g->kids) ks.push_back(erase(k));
        return rebuild(g, std::move(ks));
    };
    return toString(erase(f));
}
}  // namespace

Formula alphaNormalize(Formula f) {
    std::set<std::string> avoid;
    for (Var v : f->fv) avoid.insert(v->name);
    Subst env;
    int counter = 0;
    return alphaRec(f, env, counter, avoid);
}

bool alphaEquivalent(Formula a, Formula b) {
    if (a == b) return true;
    return alphaNormalize(a) == alphaNormalize(b);
}

Formula acNormalize(Formula f) {
    std::unordered_map<Formula, Formula> memo;
    std::function<Formula(Formula)> rec = [&](Formula g) -> Formula {
        if (g->kids.empty() || g->kind == FKind::Not) return g;
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        std::vector<Formula> ks;
        for (Formula k : g->kids) ks.push_back(rec(k));
        Formula r;
        if (g->kind == FKind::And || g->kind == FKind::Or) {
            std::vector<std::pair<std::string, Formula>> keyed;
            for (Formula k : ks) keyed.emplace_back(shapeKey(k), k);
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](auto& a, auto& b) { return a.first < b.first; });
            ks.clear();
            for (auto& kv : keyed) ks.push_back(kv.second);
            r = rebuild(g, std::move(ks));
        } else {
            r = rebuild(g, std::move(ks));
        }
        memo.emplace(g, r);
        return r;
    };
    return alphaNormalize(rec(alphaNormalize(f)));
}

std::uint64_t formulaSize(Formula f) { return f->treeSize; }

// ---------------------------------------------------------------------------
// Printing

namespace {
std::string ratString(const Rational& q) {
    Rational a = abs(q);
    std::string body = a.get_den() == 1 ? a.get_num().get_str()
                                        : "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
    return sgn(q) < 0 ? "(- " + body + ")" : body;
}

std::string varString(Var v) { return quoteSymbol(v->display()); }

std::string monString(Var v, const Rational& c) {
    if (c == 1) return varString(v);
    if (c == -1) return "(- " + varString(v) + ")";
    return "(* " + ratString(c) + " " + varString(v) + ")";
}
}  // namespace

std::string toString(Term t) {
    switch (t->kind) {
        case TermKind::Lin: {
            std::vector<std::string> parts;
            for (auto& [v, c] : t->mons) parts.push_back(monString(v, c));
            if (t->constant != 0 || parts.empty()) parts.push_back(ratString(t->constant));
            if (parts.size() == 1) return parts[0];
            std::string s = "(+";
            for (auto& p : parts) s += " " + p;
            return s + ")";
        }
        case TermKind::IdVar: return varString(t->var);
        case TermKind::IdConst: return "v" + std::to_string(t->index);
        case TermKind::Fresh: {
            std::string s = "(fresh";
            for (Term a : t->args) s += " " + toString(a);
            return s + ")";
        }
    }
    return "?";
}

namespace {
void printF(Formula f, std::ostringstream& os) {
    switch (f->kind) {
        case FKind::True: os << "true"; return;
        case FKind::False: os << "false"; return;
        case FKind::EqId: os << "(= " << toString(f->lhs) << " " << toString(f->rhs) << ")"; return;
        case FKind::Lin: {
            Term t = f->lhs;
            const char* op = f->rel == Rel::Lt ? "<" : f->rel == Rel::Le ? "<=" : "=";
            if (sgn(t->mons[0].second) < 0) {
                t = tScale(Rational(-1), t);
                op = f->rel == Rel::Lt ? ">" : f->rel == Rel::Le ? ">=" : "=";
            }
            Term lhs = tLin(t->mons, Rational(0));
            os << "(" << op << " " << toString(lhs) << " " << ratString(-t->constant) << ")";
            return;
        }
        case FKind::Pred:
            if (f->args.empty()) {
                os << quoteSymbol(f->pred->display());
                return;
            }
            os << "(" << quoteSymbol(f->pred->display());
            for (Term a : f->args) os << " " << toString(a);
            os << ")";
            return;
        case FKind::Not:
            os << "(not ";
            printF(f->kids[0], os);
            os << ")";
            return;
        case FKind::And:
        case FKind::Or:
            os << (f->kind == FKind::And ? "(and" : "(or");
            for (Formula k : f->kids) {
                os << " ";
                printF(k, os);
            }
            os << ")";
            return;
        case FKind::Exists:
        case FKind::Forall: {
            os << (f->kind == FKind::Exists ? "(exists (" : "(forall (");
            Formula g = f;
            bool first = true;
            while (g->kind == f->kind) {
                os << (first ? "" : " ") << "(" << varString(g->bound) << " " << sortName(g->bound->sort) << ")";
                first = false;
                g = g->body();
            }
            os << ") ";
            printF(g, os);
            os << ")";
            return;
        }
    }
}
}  // namespace

std::string toString(Formula f) {
    std::ostringstream os;
    printF(f, os);
    return os.str();
}

}  // namespace foalt
