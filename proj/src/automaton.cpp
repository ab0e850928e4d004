#include "foalt/automaton.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "foalt/formula_io.hpp"
#include "foalt/sexpr.hpp"

namespace foalt {

const StateDecl* Foaa::state(const std::string& name) const {
    for (auto& s : states)
        if (s.pred->name == name) return &s;
    return nullptr;
}

bool Foaa::isFinal(Pred p) const {
    const StateDecl* s = state(p->name);
    return s && s->final;
}

const Rule* Foaa::rule(const std::string& st, const std::string& event) const {
    auto it = rules.find({st, event});
    return it == rules.end() ? nullptr : &it->second;
}

bool Foaa::hasEvent(const std::string& e) const {
    return std::find(events.begin(), events.end(), e) != events.end();
}

std::set<Pred> Foaa::predSet() const {
    std::set<Pred> s;
    for (auto& d : states) s.insert(d.pred);
    return s;
}

std::uint64_t Foaa::size() const {
    std::uint64_t n = initial ? formulaSize(initial) : 0;
    for (auto& [k, r] : rules) n += formulaSize(r.body);
    return n;
}

std::string Diagnostic::str() const {
    if (line > 0) return std::to_string(line) + ":" + std::to_string(col) + ": " + message;
    return message;
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::vector<Sort> parseSortList(const SExpr& e) {
    if (!e.isList) throw ParseError(e, "expected a sort list");
    std::vector<Sort> out;
    for (auto& s : e.items) {
        if (!s.isAtom()) throw ParseError(s, "expected a sort name");
        try {
            out.push_back(sortFromName(s.atom));
        } catch (Error& err) {
            throw ParseError(s, err.what());
        }
    }
    return out;
}

std::pair<std::string, Sort> parseBinding(const SExpr& b) {
    if (!b.isList || b.items.size() != 2 || !b.items[0].isAtom() || !b.items[1].isAtom())
        throw ParseError(b, "expected (name Sort)");
    try {
        return {b.items[0].atom, sortFromName(b.items[1].atom)};
    } catch (Error& err) {
        throw ParseError(b.items[1], err.what());
    }
}

Formula joinRule(Rule& existing, const Rule& extra) {
    Subst s;
    for (std::size_t i = 0; i < extra.params.size(); ++i)
        if (extra.params[i] != existing.params[i]) s.emplace(extra.params[i], tVar(existing.params[i]));
    return fOr(existing.body, substitute(extra.body, s));
}

}  // namespace

Foaa parseFoaa(const std::string& text) {
    auto decls = parseSExprs(text);
    Foaa a;
    bool haveTheory = false, haveEvents = false, haveInitial = false;
    std::vector<const SExpr*> deferred;
    Scope scope;
    scope.idConstants = true;
    for (const SExpr& d : decls) {
        if (!d.isList || d.items.empty() || !d.items[0].isAtom()) throw ParseError(d, "expected a declaration");
        const std::string& kw = d.items[0].atom;
        if (kw == "theory") {
            if (d.items.size() != 2 || !d.items[1].isAtom()) throw ParseError(d, "expected (theory LRA|EQ)");
            try {
                a.theory = theoryFromName(d.items[1].atom);
            } catch (Error& err) {
                throw ParseError(d.items[1], err.what());
            }
            haveTheory = true;
        } else if (kw == "events") {
            for (std::size_t i = 1; i < d.items.size(); ++i) {
                if (!d.items[i].isAtom()) throw ParseError(d.items[i], "expected an event name");
                if (a.hasEvent(d.items[i].atom)) throw ParseError(d.items[i], "duplicate event " + d.items[i].atom);
                a.events.push_back(d.items[i].atom);
            }
            haveEvents = true;
        } else if (kw == "input") {
            for (std::size_t i = 1; i < d.items.size(); ++i) {
                auto [name, sort] = parseBinding(d.items[i]);
                if (scope.vars.count(name)) throw ParseError(d.items[i], "duplicate input variable " + name);
                Var v = mkVar(name, sort);
                a.inputVars.push_back(v);
                scope.vars[name] = v;
            }
        } else if (kw == "state") {
            if (d.items.size() < 3 || !d.items[1].isAtom()) throw ParseError(d, "expected (state name (Sort ...) [:final])");
            const std::string& name = d.items[1].atom;
            if (a.state(name)) throw ParseError(d.items[1], "duplicate state " + name);
            StateDecl s{mkPred(name, parseSortList(d.items[2])), false};
            for (std::size_t i = 3; i < d.items.size(); ++i) {
                if (d.items[i].is(":final")) s.final = true;
                else throw ParseError(d.items[i], "unexpected state attribute");
            }
            a.states.push_back(s);
            scope.preds[name] = s.pred;
        } else if (kw == "initial" || kw == "rule") {
            deferred.push_back(&d);
        } else {
            throw ParseError(d.items[0], "unknown declaration '" + kw + "'");
        }
    }
    if (!haveTheory) throw ParseError(1, 1, "missing (theory ...) declaration");
    if (!haveEvents) throw ParseError(1, 1, "missing (events ...) declaration");
    Sort ds = a.sort();
    for (Var v : a.inputVars)
        if (v->sort != ds) throw ParseError(1, 1, "input variable " + v->name + " must have sort " + sortName(ds));
    for (auto& s : a.states)
        for (Sort so : s.pred->argSorts)
            if (so != ds) throw ParseError(1, 1, "state " + s.pred->name + " must take arguments of sort " + sortName(ds));

    for (const SExpr* dp : deferred) {
        const SExpr& d = *dp;
        if (d.items[0].atom == "initial") {
            if (haveInitial) throw ParseError(d, "duplicate initial formula");
            if (d.items.size() != 2) throw ParseError(d, "expected (initial <formula>)");
            Scope sc = scope;
            sc.vars.clear();
            a.initial = parseFormula(d.items[1], sc);
            if (!isPositive(a.initial)) throw ParseError(d.items[1], "initial formula is not positive");
            if (!a.initial->fv.empty()) throw ParseError(d.items[1], "initial formula is not a sentence");
            haveInitial = true;
            continue;
        }
        // (rule q ((y Sort) ...) a <formula>)
        if (d.items.size() != 5 || !d.items[1].isAtom() || !d.items[2].isList || !d.items[3].isAtom())
            throw ParseError(d, "expected (rule q ((y Sort) ...) event <formula>)");
        const StateDecl* st = a.state(d.items[1].atom);
        if (!st) throw ParseError(d.items[1], "unknown state " + d.items[1].atom);
        const std::string& ev = d.items[3].atom;
        if (!a.hasEvent(ev)) throw ParseError(d.items[3], "unknown event " + ev);
        Rule r;
        Scope sc = scope;
        for (auto& b : d.items[2].items) {
            auto [name, sort] = parseBinding(b);
            if (scope.vars.count(name)) throw ParseError(b, "params shadow input vars: " + name);
            Var v = mkVar(name, sort);
            if (std::find(r.params.begin(), r.params.end(), v) != r.params.end())
                throw ParseError(b, "duplicate parameter " + name);
            r.params.push_back(v);
            sc.vars[name] = v;
        }
        if (r.params.size() != st->pred->arity())
            throw ParseError(d.items[2], "state " + st->pred->name + " has arity " + std::to_string(st->pred->arity()));
        for (std::size_t i = 0; i < r.params.size(); ++i)
            if (r.params[i]->sort != st->pred->argSorts[i]) throw ParseError(d.items[2], "parameter sort mismatch");
        r.body = parseFormula(d.items[4], sc);
        if (!isPositive(r.body)) throw ParseError(d.items[4], "rule body is not positive");
        auto key = std::make_pair(st->pred->name, ev);
        auto it = a.rules.find(key);
        if (it == a.rules.end()) a.rules.emplace(key, r);
        else it->second.body = joinRule(it->second, r);
    }
    if (!haveInitial) throw ParseError(1, 1, "missing (initial ...) declaration");
    return a;
}

Foaa loadFoaa(const std::string& path) { return parseFoaa(readFile(path)); }

std::string printFoaa(const Foaa& a) {
    std::ostringstream os;
    os << "(theory " << theoryName(a.theory) << ")\n";
    os << "(events";
    for (auto& e : a.events) os << " " << quoteSymbol(e);
    os << ")\n";
    if (!a.inputVars.empty()) {
        os << "(input";
        for (Var v : a.inputVars) os << " (" << quoteSymbol(v->name) << " " << sortName(v->sort) << ")";
        os << ")\n";
    }
    for (auto& s : a.states) {
        os << "(state " << quoteSymbol(s.pred->name) << " (";
        for (std::size_t i = 0; i < s.pred->argSorts.size(); ++i) os << (i ? " " : "") << sortName(s.pred->argSorts[i]);
        os << ")" << (s.final ? " :final" : "") << ")\n";
    }
    os << "(initial " << toString(a.initial) << ")\n";
    for (auto& s : a.states)
        for (auto& e : a.events) {
            const Rule* r = a.rule(s.pred->name, e);
            if (!r) continue;
            os << "(rule " << quoteSymbol(s.pred->name) << " (";
            for (std::size_t i = 0; i < r->params.size(); ++i)
                os << (i ? " " : "") << "(" << quoteSymbol(r->params[i]->name) << " " << sortName(r->params[i]->sort)
                   << ")";
            os << ") " << quoteSymbol(e) << " " << toString(r->body) << ")\n";
        }
    return os.str();
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Diagnostic> validate(const Foaa& a) {
    std::vector<Diagnostic> out;
    auto diag = [&](const std::string& m) { out.push_back({m}); };
    Sort ds = a.sort();
    std::set<Pred> q = a.predSet();
    std::set<std::string> names;
    for (auto& s : a.states)
        if (!names.insert(s.pred->name).second) diag("duplicate state " + s.pred->name);
    for (Var v : a.inputVars)
        if (v->sort != ds) diag("input variable " + v->name + " has the wrong sort");
    auto checkPreds = [&](Formula f, const std::string& where) {
        for (Pred p : predSymbols(f))
            if (!q.count(p)) diag(where + " uses undeclared predicate " + p->display());
    };
    if (!a.initial) {
        diag("missing initial formula");
    } else {
        if (!a.initial->fv.empty()) diag("initial not a sentence");
        if (!isPositive(a.initial)) diag("initial not positive");
        checkPreds(a.initial, "initial");
    }
    for (auto& [key, r] : a.rules) {
        std::string where = "rule " + key.first + "/" + key.second;
        const StateDecl* st = a.state(key.first);
        if (!st) {
            diag(where + ": unknown state");
            continue;
        }
        if (!a.hasEvent(key.second)) diag(where + ": unknown event");
        if (r.params.size() != st->pred->arity()) diag(where + ": arity mismatch");
        for (Var y : r.params) {
            if (std::find(a.inputVars.begin(), a.inputVars.end(), y) != a.inputVars.end())
                diag(where + ": params shadow input vars");
        }
        for (Var v : r.body->fv) {
            bool ok = std::find(a.inputVars.begin(), a.inputVars.end(), v) != a.inputVars.end() ||
                      std::find(r.params.begin(), r.params.end(), v) != r.params.end();
            if (!ok) diag(where + ": free variable " + v->display());
        }
        if (!isPositive(r.body)) diag(where + ": body not positive");
        checkPreds(r.body, where);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Boolean closure

namespace {

std::vector<Var> defaultParams(const Foaa& a, Pred p) {
    std::vector<Var> ps;
    for (std::size_t i = 0; i < p->arity(); ++i) {
        std::string name = "y" + std::to_string(i + 1);
        for (;;) {
            bool clash = false;
            for (Var x : a.inputVars)
                if (x->name == name) clash = true;
            if (!clash) break;
            name += "_";
        }
        ps.push_back(mkVar(name, p->argSorts[i]));
    }
    return ps;
}

Foaa renameStates(const Foaa& a, const std::map<std::string, std::string>& ren) {
    if (ren.empty()) return a;
    Foaa r = a;
    std::map<Pred, Pred> pm;
    for (auto& s : r.states) {
        auto it = ren.find(s.pred->name);
        if (it == ren.end()) continue;
        Pred np = mkPred(it->second, s.pred->argSorts);
        pm[s.pred] = np;
        s.pred = np;
    }
    auto mp = [&](Formula f) {
        return mapPreds(f, [&](Pred p) {
            auto it = pm.find(p);
            return it == pm.end() ? p : it->second;
        });
    };
    r.initial = mp(a.initial);
    r.rules.clear();
    for (auto& [key, rule] : a.rules) {
        auto it = ren.find(key.first);
        std::string st = it == ren.end() ? key.first : it->second;
        r.rules.emplace(std::make_pair(st, key.second), Rule{rule.params, mp(rule.body)});
    }
    return r;
}

void checkCompatible(const Foaa& a1, const Foaa& a2) {
    if (a1.theory != a2.theory) throw Error("automata over different theories");
    std::set<std::string> e1(a1.events.begin(), a1.events.end()), e2(a2.events.begin(), a2.events.end());
    if (e1 != e2) throw Error("automata over different event alphabets");
    if (a1.inputVars != a2.inputVars) throw Error("automata over different input variables");
}

std::pair<Foaa, Foaa> disjoint(const Foaa& a1, const Foaa& a2) {
    std::map<std::string, std::string> r1, r2;
    std::set<std::string> n1, n2, all;
    for (auto& s : a1.states) n1.insert(s.pred->name);
    for (auto& s : a2.states) n2.insert(s.pred->name);
    all.insert(n1.begin(), n1.end());
    all.insert(n2.begin(), n2.end());
    auto pick = [&](const std::string& base, int i) {
        std::string n = base + "#" + std::to_string(i);
        while (all.count(n)) n += "'";
        all.insert(n);
        return n;
    };
    for (auto& n : n1)
        if (n2.count(n)) {
            r1[n] = pick(n, 1);
            r2[n] = pick(n, 2);
        }
    return {renameStates(a1, r1), renameStates(a2, r2)};
}

Foaa combine(const Foaa& a1, const Foaa& a2, bool conj) {
    checkCompatible(a1, a2);
    auto [b1, b2] = disjoint(a1, a2);
    Foaa r = b1;
    r.states.insert(r.states.end(), b2.states.begin(), b2.states.end());
    r.initial = conj ? fAnd(b1.initial, b2.initial) : fOr(b1.initial, b2.initial);
    for (auto& kv : b2.rules) r.rules.insert(kv);
    return r;
}

}  // namespace

Foaa materializeRules(const Foaa& a) {
    Foaa r = a;
    for (auto& s : a.states)
        for (auto& e : a.events)
            if (!a.rule(s.pred->name, e))
                r.rules.emplace(std::make_pair(s.pred->name, e), Rule{defaultParams(a, s.pred), fFalse()});
    return r;
}

Foaa intersect(const Foaa& a1, const Foaa& a2) { return combine(a1, a2, true); }
Foaa unite(const Foaa& a1, const Foaa& a2) { return combine(a1, a2, false); }

Foaa complement(const Foaa& a) {
    Foaa m = materializeRules(a);
    Foaa r = m;
    for (auto& s : r.states) s.final = !s.final;
    r.initial = dual(m.initial);
    for (auto& [key, rule] : r.rules) rule.body = dual(rule.body);
    return r;
}

// ---------------------------------------------------------------------------
// Data words

DataWord parseDataWord(const std::string& text, const Foaa& a) {
    DataWord w;
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty() || t == "eps") return w;
    std::size_t pos = 0;
    while (pos <= t.size()) {
        std::size_t end = t.find(';', pos);
        if (end == std::string::npos) end = t.size();
        std::string letter = t.substr(pos, end - pos);
        auto brace = letter.find('{');
        if (brace == std::string::npos || letter.back() != '}')
            throw Error("malformed letter '" + letter + "': expected event{var=value,...}");
        Letter L;
        L.event = letter.substr(0, brace);
        if (!a.hasEvent(L.event)) throw Error("unknown event '" + L.event + "'");
        std::string body = letter.substr(brace + 1, letter.size() - brace - 2);
        std::size_t p = 0;
        while (!body.empty() && p <= body.size()) {
            std::size_t comma = body.find(',', p);
            if (comma == std::string::npos) comma = body.size();
            std::string kv = body.substr(p, comma - p);
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error("malformed assignment '" + kv + "'");
            std::string name = kv.substr(0, eq), val = kv.substr(eq + 1);
            Var v = nullptr;
            for (Var x : a.inputVars)
                if (x->name == name) v = x;
            if (!v) throw Error("unknown input variable '" + name + "'");
            if (v->sort == Sort::Id) {
                if (val.size() < 2 || val[0] != 'v') throw Error("Id values are written v0, v1, ...: '" + val + "'");
                L.values[v] = parseRational(val.substr(1));
            } else {
                L.values[v] = parseRational(val);
            }
            p = comma + 1;
        }
        for (Var x : a.inputVars)
            if (!L.values.count(x)) throw Error("letter '" + letter + "' has no value for " + x->name);
        w.push_back(L);
        pos = end + 1;
    }
    return w;
}

std::string printDataWord(const DataWord& w, const Foaa& a) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ";";
        s += w[i].event + "{";
        bool first = true;
        for (Var x : a.inputVars) {
            auto it = w[i].values.find(x);
            if (it == w[i].values.end()) continue;
            if (!first) s += ",";
            first = false;
            s += x->name + "=";
            s += x->sort == Sort::Id ? "v" + it->second.get_num().get_str()
                                     : rationalToDecimalOrFraction(it->second);
        }
        s += "}";
    }
    return s;
}

}  // namespace foalt
