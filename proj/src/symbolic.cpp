#include "foalt/symbolic.hpp"

#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "foalt/theory.hpp"

namespace foalt {

std::string eventSequenceString(const EventSequence& alpha) {
    if (alpha.empty()) return "eps";
    std::string s;
    for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "." : "") + alpha[i];
    return s;
}

EventSequence parseEventSequence(const std::string& s) {
    EventSequence out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
    };
    for (char c : s) {
        if (c == '.' || c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c))) flush();
        else cur += c;
    }
    flush();
    if (out.size() == 1 && out[0] == "eps") out.clear();
    return out;
}

namespace {

std::vector<Var> paramsFor(Pred p) {
    std::vector<Var> ps;
    for (std::size_t i = 0; i < p->arity(); ++i) ps.push_back(mkVar("y" + std::to_string(i + 1), p->argSorts[i]));
    return ps;
}

std::vector<Term> varTerms(const std::vector<Var>& vs) {
    std::vector<Term> ts;
    for (Var v : vs) ts.push_back(tVar(v));
    return ts;
}

std::string baseName(const std::string& n) {
    auto bang = n.find('!');
    return bang == std::string::npos ? n : n.substr(0, bang);
}

}  // namespace

Formula stepAxioms(const Foaa& a, const std::string& e, int from) {
    std::vector<Formula> cs;
    for (auto& s : a.states) {
        const Rule* r = a.rule(s.pred->name, e);
        Pred p = mkPred(s.pred->name, s.pred->argSorts, from);
        if (!r) {
            // No rule: the configuration has no successor cube.
            auto ps = paramsFor(s.pred);
            Formula f = fNot(fPred(p, varTerms(ps)));
            for (auto it = ps.rbegin(); it != ps.rend(); ++it) f = fForall(*it, f);
            cs.push_back(f);
            continue;
        }
        Formula body = stamp(r->body, from + 1, a.inputVars);
        cs.push_back(fImplies(fPred(p, varTerms(r->params)), body));
        for (auto it = r->params.rbegin(); it != r->params.rend(); ++it) cs.back() = fForall(*it, cs.back());
    }
    return fAnd(std::move(cs));
}

Formula finalAxioms(const Foaa& a, int k) {
    std::vector<Formula> cs;
    for (auto& s : a.states) {
        if (s.final) continue;
        auto ps = paramsFor(s.pred);
        Formula f = fNot(fPred(mkPred(s.pred->name, s.pred->argSorts, k), varTerms(ps)));
        for (auto it = ps.rbegin(); it != ps.rend(); ++it) f = fForall(*it, f);
        cs.push_back(f);
    }
    return fAnd(std::move(cs));
}

Formula applyFinality(const Foaa& a, Formula f, int k) {
    return mapAtoms(f, [&](Formula at) -> Formula {
        if (at->kind != FKind::Pred || at->pred->stamp != k) return nullptr;
        return a.isFinal(at->pred) ? fTrue() : fFalse();
    });
}

Formula pathFormula(const Foaa& a, const EventSequence& alpha) {
    std::vector<Formula> cs{stamp(a.initial, 0, a.inputVars)};
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (!a.hasEvent(alpha[i])) throw Error("unknown event '" + alpha[i] + "'");
        cs.push_back(stepAxioms(a, alpha[i], static_cast<int>(i)));
    }
    return fAnd(std::move(cs));
}

Formula acceptanceFormula(const Foaa& a, const EventSequence& alpha) {
    return fAnd(pathFormula(a, alpha), finalAxioms(a, static_cast<int>(alpha.size())));
}

// ---------------------------------------------------------------------------

Formula SymbolicPath::theta() const { return thetaPrenex().toFormula(); }
Formula SymbolicPath::upsilon() const { return upsilonPrenex().toFormula(); }

std::vector<Var> SymbolicPath::inputs(const Foaa& a) const {
    std::vector<Var> out;
    for (std::size_t k = 1; k <= alpha.size(); ++k)
        for (Var x : a.inputVars) out.push_back(mkVar(x->name, x->sort, static_cast<int>(k)));
    return out;
}

SymbolicPath buildSymbolic(const Foaa& a0, const EventSequence& alpha, const SymbolicOptions& opt) {
    for (auto& e : alpha)
        if (!a0.hasEvent(e)) throw Error("unknown event '" + e + "'");
    Foaa a = materializeRules(a0);
    SymbolicPath sp;
    sp.alpha = alpha;
    const int n = static_cast<int>(alpha.size());
    int counter = 0;

    auto withData = [&](Formula f) { return opt.dataWord ? substitute(f, *opt.dataWord) : f; };
    // Prenex, then give every transition quantifier a name unique to this path.
    auto instantiate = [&](Formula f, int step) {
        PrenexFormula p = prenex(f);
        Subst s;
        for (auto& q : p.prefix) {
            Var nv = mkVar(baseName(q.var->name) + "!" + std::to_string(step) + "_" + std::to_string(counter++),
                           q.var->sort);
            s.emplace(q.var, tVar(nv));
            sp.prefix.push_back({q.universal, nv});
            sp.xi.push_back(step);
        }
        return substitute(p.matrix, s);
    };
    auto stepAtoms = [&](Formula f, int k) {
        std::vector<Formula> out;
        for (Formula at : predAtoms(f))
            if (at->pred->stamp == k) out.push_back(at);
        return out;
    };

    sp.parts.push_back(instantiate(withData(stamp(a.initial, 0, a.inputVars)), 0));
    sp.atoms.push_back(stepAtoms(sp.parts[0], 0));
    for (int k = 1; k <= n; ++k) {
        std::vector<Formula> cs;
        for (Formula at : sp.atoms[k - 1]) {
            const Rule* r = a.rule(at->pred->name, alpha[k - 1]);
            Subst s;
            for (std::size_t i = 0; i < r->params.size(); ++i) s.emplace(r->params[i], at->args[i]);
            Formula body = substitute(withData(stamp(r->body, k, a.inputVars)), s);
            Formula inst = instantiate(body, k);
            sp.instance.emplace(at, inst);
            cs.push_back(fOr(fNot(at), inst));
        }
        sp.parts.push_back(fAnd(std::move(cs)));
        std::vector<Formula> next;
        std::unordered_set<Formula> seen;
        for (Formula at : sp.atoms[k - 1])
            for (Formula b : stepAtoms(sp.instance.at(at), k))
                if (seen.insert(b).second) next.push_back(b);
        sp.atoms.push_back(std::move(next));
    }
    std::vector<Formula> fin;
    for (Formula at : sp.atoms[n])
        if (!a.isFinal(at->pred)) fin.push_back(fNot(at));
    sp.parts.push_back(fAnd(std::move(fin)));
    sp.thetaMatrix = fAnd(sp.parts);

    std::unordered_map<Formula, Formula> memo;
    std::function<Formula(Formula)> ups = [&](Formula f) -> Formula {
        return mapAtoms(f, [&](Formula at) -> Formula {
            if (at->kind != FKind::Pred) return nullptr;
            auto it = memo.find(at);
            if (it != memo.end()) return it->second;
            Formula r;
            if (at->pred->stamp == n) r = a.isFinal(at->pred) ? fTrue() : fFalse();
            else r = ups(sp.instance.at(at));
            memo.emplace(at, r);
            return r;
        });
    };
    sp.upsilonMatrix = ups(sp.parts[0]);
    return sp;
}

Formula eliminateUpsilon(const SymbolicPath& sp) { return eliminateQuantifiers(sp.upsilon()); }

SequenceCheck checkEventSequence(const Foaa& a, const EventSequence& alpha) {
    SymbolicPath sp = buildSymbolic(a, alpha);
    Formula g = eliminateUpsilon(sp);
    SatResult r = checkSatQf(g);
    SequenceCheck out;
    if (!r.sat) return out;
    out.accepting = true;
    for (std::size_t k = 1; k <= alpha.size(); ++k) {
        Letter L;
        L.event = alpha[k - 1];
        for (Var x : a.inputVars) {
            auto it = r.model.find(mkVar(x->name, x->sort, static_cast<int>(k)));
            L.values[x] = it == r.model.end() ? Rational(0) : it->second;
        }
        out.word.push_back(std::move(L));
    }
    return out;
}

bool member(const Foaa& a, const DataWord& w) {
    Subst data;
    EventSequence alpha;
    for (std::size_t k = 1; k <= w.size(); ++k) {
        alpha.push_back(w[k - 1].event);
        for (Var x : a.inputVars) {
            auto it = w[k - 1].values.find(x);
            if (it == w[k - 1].values.end()) throw Error("letter " + std::to_string(k) + " has no value for " + x->name);
            data.emplace(mkVar(x->name, x->sort, static_cast<int>(k)), valueTerm(x->sort, it->second));
        }
    }
    SymbolicOptions opt;
    opt.dataWord = &data;
    SymbolicPath sp = buildSymbolic(a, alpha, opt);
    Formula g = eliminateUpsilon(sp);
    return evaluate(g, {});
}

}  // namespace foalt
