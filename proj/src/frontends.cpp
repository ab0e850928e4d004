#include "foalt/frontends.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "foalt/formula_io.hpp"
#include "foalt/sexpr.hpp"
#include "foalt/symbolic.hpp"

namespace foalt {

namespace {

std::string stripSpaces(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    return t;
}

std::vector<std::string> splitOn(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t end = s.find(sep, pos);
        out.push_back(s.substr(pos, end == std::string::npos ? std::string::npos : end - pos));
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return out;
}

const SExpr& single(const std::string& text, const char* head) {
    static thread_local std::vector<SExpr> keep;
    keep = parseSExprs(text);
    if (keep.size() != 1 || !keep[0].isList || keep[0].items.empty() || !keep[0].items[0].is(head))
        throw ParseError(1, 1, std::string("expected a single (") + head + " ...) form");
    return keep[0];
}

std::size_t lookup(const std::vector<std::string>& names, const SExpr& e, const char* what) {
    if (!e.isAtom()) throw ParseError(e, std::string("expected a ") + what + " name");
    auto it = std::find(names.begin(), names.end(), e.atom);
    if (it == names.end()) throw ParseError(e, std::string("unknown ") + what + " '" + e.atom + "'");
    return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

// ---------------------------------------------------------------------------
// Timed automata

bool ClockConstraint::holds(const std::vector<Rational>& clocks) const {
    switch (kind) {
        case Kind::Le: return clocks[clock] <= bound;
        case Kind::Ge: return clocks[clock] >= bound;
        case Kind::Not: return !kids[0].holds(clocks);
        case Kind::And:
            for (auto& k : kids)
                if (!k.holds(clocks)) return false;
            return true;
    }
    return false;
}

std::size_t TimedAutomaton::stateIndex(const std::string& s) const {
    auto it = std::find(states.begin(), states.end(), s);
    if (it == states.end()) throw Error("unknown state '" + s + "'");
    return static_cast<std::size_t>(it - states.begin());
}

TimedWord parseTimedWord(const std::string& text) {
    std::string t = stripSpaces(text);
    TimedWord w;
    if (t.empty() || t == "eps") return w;
    for (auto& letter : splitOn(t, ';')) {
        auto at = letter.find('@');
        if (at == std::string::npos || at == 0) throw Error("malformed timed letter '" + letter + "': expected event@time");
        w.push_back({letter.substr(0, at), parseRational(letter.substr(at + 1))});
    }
    return w;
}

std::string printTimedWord(const TimedWord& w) {
    if (w.empty()) return "eps";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i)
        s += (i ? ";" : "") + w[i].event + "@" + rationalToDecimalOrFraction(w[i].time);
    return s;
}

DataWord toDataWord(const TimedWord& w) {
    Var t = mkVar("t", Sort::Real);
    DataWord d;
    for (auto& l : w) d.push_back({l.event, {{t, l.time}}});
    return d;
}

TimedWord fromDataWord(const DataWord& w) {
    Var t = mkVar("t", Sort::Real);
    TimedWord out;
    for (auto& l : w) {
        auto it = l.values.find(t);
        if (it == l.values.end()) throw Error("letter without a value for t");
        out.push_back({l.event, it->second});
    }
    return out;
}

namespace {

ClockConstraint parseGuard(const SExpr& e, const TimedAutomaton& ta) {
    if (e.is("true")) return ClockConstraint::top();
    if (!e.isList || e.items.empty() || !e.items[0].isAtom()) throw ParseError(e, "malformed clock constraint");
    const std::string& op = e.items[0].atom;
    if (op == "and") {
        std::vector<ClockConstraint> ks;
        for (std::size_t i = 1; i < e.items.size(); ++i) ks.push_back(parseGuard(e.items[i], ta));
        return ClockConstraint::conj(std::move(ks));
    }
    if (op == "not") {
        if (e.items.size() != 2) throw ParseError(e, "not takes one argument");
        return ClockConstraint::negate(parseGuard(e.items[1], ta));
    }
    if (op == "<=" || op == ">=" || op == "<" || op == ">") {
        if (e.items.size() != 3 || !e.items[2].isAtom()) throw ParseError(e, "expected (" + op + " clock constant)");
        std::size_t x = lookup(ta.clocks, e.items[1], "clock");
        Rational c;
        try {
            c = parseRational(e.items[2].atom);
        } catch (Error& err) {
            throw ParseError(e.items[2], err.what());
        }
        if (op == "<=") return ClockConstraint::le(x, c);
        if (op == ">=") return ClockConstraint::ge(x, c);
        if (op == "<") return ClockConstraint::negate(ClockConstraint::ge(x, c));
        return ClockConstraint::negate(ClockConstraint::le(x, c));
    }
    throw ParseError(e.items[0], "unknown clock constraint operator '" + op + "'");
}

std::string printGuard(const ClockConstraint& d, const TimedAutomaton& ta) {
    using K = ClockConstraint::Kind;
    switch (d.kind) {
        case K::Le: return "(<= " + ta.clocks[d.clock] + " " + rationalToDecimalOrFraction(d.bound) + ")";
        case K::Ge: return "(>= " + ta.clocks[d.clock] + " " + rationalToDecimalOrFraction(d.bound) + ")";
        case K::Not: return "(not " + printGuard(d.kids[0], ta) + ")";
        case K::And: {
            if (d.kids.empty()) return "true";
            if (d.kids.size() == 1) return printGuard(d.kids[0], ta);
            std::string s = "(and";
            for (auto& k : d.kids) s += " " + printGuard(k, ta);
            return s + ")";
        }
    }
    return "true";
}

Formula guardFormula(const ClockConstraint& d, Var t, const std::vector<Var>& ys) {
    using K = ClockConstraint::Kind;
    switch (d.kind) {
        case K::Le: return fLe(tSub(tVar(t), tVar(ys[d.clock])), tNum(d.bound));
        case K::Ge: return fGe(tSub(tVar(t), tVar(ys[d.clock])), tNum(d.bound));
        case K::Not: return fNot(guardFormula(d.kids[0], t, ys));
        case K::And: {
            std::vector<Formula> fs;
            for (auto& k : d.kids) fs.push_back(guardFormula(k, t, ys));
            return fAnd(fs);
        }
    }
    return fTrue();
}

}  // namespace

TimedAutomaton parseTimed(const std::string& text) {
    const SExpr& top = single(text, "timed");
    TimedAutomaton ta;
    std::vector<const SExpr*> edges;
    for (std::size_t i = 1; i < top.items.size(); ++i) {
        const SExpr& d = top.items[i];
        if (!d.isList || d.items.empty() || !d.items[0].isAtom()) throw ParseError(d, "expected a declaration");
        const std::string& kw = d.items[0].atom;
        if (kw == "events" || kw == "clocks") {
            auto& into = kw == "events" ? ta.events : ta.clocks;
            for (std::size_t j = 1; j < d.items.size(); ++j) {
                if (!d.items[j].isAtom()) throw ParseError(d.items[j], "expected a name");
                if (std::count(into.begin(), into.end(), d.items[j].atom))
                    throw ParseError(d.items[j], "duplicate name " + d.items[j].atom);
                into.push_back(d.items[j].atom);
            }
        } else if (kw == "state") {
            if (d.items.size() < 2 || !d.items[1].isAtom()) throw ParseError(d, "expected (state name [:initial] [:final])");
            if (std::count(ta.states.begin(), ta.states.end(), d.items[1].atom))
                throw ParseError(d.items[1], "duplicate state " + d.items[1].atom);
            ta.states.push_back(d.items[1].atom);
            ta.initial.push_back(false);
            ta.final.push_back(false);
            for (std::size_t j = 2; j < d.items.size(); ++j) {
                if (d.items[j].is(":initial")) ta.initial.back() = true;
                else if (d.items[j].is(":final")) ta.final.back() = true;
                else throw ParseError(d.items[j], "unexpected state attribute");
            }
        } else if (kw == "edge") {
            edges.push_back(&d);
        } else {
            throw ParseError(d.items[0], "unknown declaration '" + kw + "'");
        }
    }
    for (const SExpr* dp : edges) {
        const SExpr& d = *dp;
        if (d.items.size() < 4) throw ParseError(d, "expected (edge from event to [:reset (...)] [:guard δ])");
        TimedEdge e;
        e.from = lookup(ta.states, d.items[1], "state");
        e.event = ta.events[lookup(ta.events, d.items[2], "event")];
        e.to = lookup(ta.states, d.items[3], "state");
        e.reset.assign(ta.clocks.size(), false);
        e.guard = ClockConstraint::top();
        for (std::size_t j = 4; j < d.items.size(); j += 2) {
            if (j + 1 >= d.items.size()) throw ParseError(d.items[j], "attribute without a value");
            if (d.items[j].is(":reset")) {
                if (!d.items[j + 1].isList) throw ParseError(d.items[j + 1], "expected a clock list");
                for (auto& c : d.items[j + 1].items) e.reset[lookup(ta.clocks, c, "clock")] = true;
            } else if (d.items[j].is(":guard")) {
                e.guard = parseGuard(d.items[j + 1], ta);
            } else {
                throw ParseError(d.items[j], "unexpected edge attribute");
            }
        }
        ta.edges.push_back(std::move(e));
    }
    return ta;
}

std::string printTimed(const TimedAutomaton& ta) {
    std::ostringstream os;
    os << "(timed\n  (events";
    for (auto& e : ta.events) os << " " << e;
    os << ")\n  (clocks";
    for (auto& c : ta.clocks) os << " " << c;
    os << ")\n";
    for (std::size_t i = 0; i < ta.states.size(); ++i)
        os << "  (state " << ta.states[i] << (ta.initial[i] ? " :initial" : "") << (ta.final[i] ? " :final" : "")
           << ")\n";
    for (auto& e : ta.edges) {
        os << "  (edge " << ta.states[e.from] << " " << e.event << " " << ta.states[e.to] << " :reset (";
        bool first = true;
        for (std::size_t c = 0; c < ta.clocks.size(); ++c)
            if (e.reset[c]) {
                os << (first ? "" : " ") << ta.clocks[c];
                first = false;
            }
        os << ") :guard " << printGuard(e.guard, ta) << ")\n";
    }
    os << ")\n";
    return os.str();
}

Foaa fromTimed(const TimedAutomaton& ta) {
    Foaa a;
    a.theory = TheoryId::LRA;
    a.events = ta.events;
    Var t = mkVar("t", Sort::Real);
    a.inputVars = {t};
    std::size_t k = ta.clocks.size();
    std::vector<Sort> sorts(k + 1, Sort::Real);
    std::vector<Pred> q;
    for (std::size_t i = 0; i < ta.states.size(); ++i) {
        q.push_back(mkPred(ta.states[i], sorts));
        a.states.push_back({q.back(), static_cast<bool>(ta.final[i])});
    }
    std::vector<Formula> init;
    for (std::size_t i = 0; i < ta.states.size(); ++i)
        if (ta.initial[i]) init.push_back(fPred(q[i], std::vector<Term>(k + 1, tNum(0))));
    a.initial = fOr(init);

    std::vector<Var> ys;
    for (std::size_t i = 0; i < k; ++i) ys.push_back(mkVar("y" + std::to_string(i + 1), Sort::Real));
    Var z = mkVar("z", Sort::Real);
    std::vector<Var> params = ys;
    params.push_back(z);
    std::map<std::pair<std::size_t, std::string>, std::vector<Formula>> bodies;
    for (auto& e : ta.edges) {
        std::vector<Term> args;
        for (std::size_t i = 0; i < k; ++i) args.push_back(e.reset[i] ? tVar(t) : tVar(ys[i]));
        args.push_back(tVar(t));
        bodies[{e.from, e.event}].push_back(
            fAnd({fGt(tVar(t), tVar(z)), guardFormula(e.guard, t, ys), fPred(q[e.to], args)}));
    }
    for (auto& [key, ds] : bodies) a.rules[{ta.states[key.first], key.second}] = Rule{params, fOr(ds)};
    return a;
}

bool simulateTimed(const TimedAutomaton& ta, const TimedWord& w) {
    Rational prev = 0;
    for (auto& l : w) {
        if (l.time <= prev) throw Error("timestamps must be positive and strictly increasing");
        prev = l.time;
    }
    using ConfigT = std::pair<std::size_t, std::vector<Rational>>;
    std::set<ConfigT> cur;
    for (std::size_t i = 0; i < ta.states.size(); ++i)
        if (ta.initial[i]) cur.insert({i, std::vector<Rational>(ta.clocks.size(), 0)});
    prev = 0;
    for (auto& l : w) {
        Rational delay = l.time - prev;
        prev = l.time;
        std::set<ConfigT> next;
        for (auto& [s, clocks] : cur) {
            std::vector<Rational> moved = clocks;
            for (auto& c : moved) c += delay;
            for (auto& e : ta.edges) {
                if (e.from != s || e.event != l.event || !e.guard.holds(moved)) continue;
                std::vector<Rational> after = moved;
                for (std::size_t c = 0; c < after.size(); ++c)
                    if (e.reset[c]) after[c] = 0;
                next.insert({e.to, after});
            }
        }
        cur = std::move(next);
    }
    for (auto& c : cur)
        if (ta.final[c.first]) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Register automata

IdWord parseIdWord(const std::string& text) {
    std::string t;
    for (char c : text) t += c == ';' ? ' ' : c;
    std::istringstream is(t);
    IdWord w;
    std::string tok;
    while (is >> tok) {
        if (tok == "eps") continue;
        if (tok.size() < 2 || tok[0] != 'v' || !std::all_of(tok.begin() + 1, tok.end(), ::isdigit))
            throw Error("Id values are written v0, v1, ...: '" + tok + "'");
        w.push_back(static_cast<std::uint32_t>(std::stoul(tok.substr(1))));
    }
    return w;
}

std::string printIdWord(const IdWord& w) {
    if (w.empty()) return "eps";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " v" : "v") + std::to_string(w[i]);
    return s;
}

DataWord toDataWord(const IdWord& w) {
    Var x = mkVar("x", Sort::Id);
    DataWord d;
    for (auto v : w) d.push_back({"a", {{x, Rational(static_cast<unsigned long>(v))}}});
    return d;
}

RegisterAutomaton parseRegister(const std::string& text) {
    const SExpr& top = single(text, "register");
    RegisterAutomaton ra;
    bool haveR = false, haveInit = false, haveInitial = false;
    const SExpr* initDecl = nullptr;
    std::vector<const SExpr*> trans;
    for (std::size_t i = 1; i < top.items.size(); ++i) {
        const SExpr& d = top.items[i];
        if (!d.isList || d.items.empty() || !d.items[0].isAtom()) throw ParseError(d, "expected a declaration");
        const std::string& kw = d.items[0].atom;
        if (kw == "r") {
            if (d.items.size() != 2 || !d.items[1].isAtom() || !std::all_of(d.items[1].atom.begin(), d.items[1].atom.end(), ::isdigit))
                throw ParseError(d, "expected (r N)");
            ra.registers = std::stoul(d.items[1].atom);
            if (ra.registers == 0) throw ParseError(d, "at least one register is needed");
            haveR = true;
        } else if (kw == "init") {
            initDecl = &d;
            haveInit = true;
        } else if (kw == "state") {
            if (d.items.size() < 2 || !d.items[1].isAtom()) throw ParseError(d, "expected (state name [:initial] [:final])");
            if (std::count(ra.states.begin(), ra.states.end(), d.items[1].atom))
                throw ParseError(d.items[1], "duplicate state " + d.items[1].atom);
            ra.states.push_back(d.items[1].atom);
            ra.final.push_back(false);
            for (std::size_t j = 2; j < d.items.size(); ++j) {
                if (d.items[j].is(":initial")) {
                    if (haveInitial) throw ParseError(d.items[j], "only one initial state is allowed");
                    ra.initial = ra.states.size() - 1;
                    haveInitial = true;
                } else if (d.items[j].is(":final")) {
                    ra.final.back() = true;
                } else {
                    throw ParseError(d.items[j], "unexpected state attribute");
                }
            }
        } else if (kw == "trans") {
            trans.push_back(&d);
        } else {
            throw ParseError(d.items[0], "unknown declaration '" + kw + "'");
        }
    }
    if (!haveR) throw ParseError(top, "missing (r N)");
    if (!haveInitial) throw ParseError(top, "missing initial state");
    ra.init.assign(ra.registers, std::nullopt);
    if (haveInit) {
        const SExpr& d = *initDecl;
        if (d.items.size() != ra.registers + 1) throw ParseError(d, "init needs one value per register");
        std::set<std::uint32_t> seen;
        for (std::size_t j = 0; j < ra.registers; ++j) {
            const SExpr& v = d.items[j + 1];
            if (v.is("#")) continue;
            IdWord one;
            try {
                if (!v.isAtom()) throw Error("expected a value");
                one = parseIdWord(v.atom);
            } catch (Error& err) {
                throw ParseError(v, err.what());
            }
            if (one.size() != 1 || one[0] == kBlankIndex) throw ParseError(v, "expected # or an Id value");
            if (!seen.insert(one[0]).second) throw ParseError(v, "repeated register value; only # may repeat");
            ra.init[j] = one[0];
        }
    }
    for (const SExpr* dp : trans) {
        const SExpr& d = *dp;
        if (d.items.size() != 4 || !d.items[2].isAtom()) throw ParseError(d, "expected (trans from k to)");
        RegisterTransition t;
        t.from = lookup(ra.states, d.items[1], "state");
        const std::string& k = d.items[2].atom;
        if (!std::all_of(k.begin(), k.end(), ::isdigit) || std::stoul(k) < 1 || std::stoul(k) > ra.registers)
            throw ParseError(d.items[2], "register index out of range");
        t.reg = std::stoul(k) - 1;
        t.to = lookup(ra.states, d.items[3], "state");
        ra.trans.push_back(t);
    }
    return ra;
}

std::string printRegister(const RegisterAutomaton& ra) {
    std::ostringstream os;
    os << "(register\n  (r " << ra.registers << ")\n  (init";
    for (auto& v : ra.init) os << " " << (v ? "v" + std::to_string(*v) : std::string("#"));
    os << ")\n";
    for (std::size_t i = 0; i < ra.states.size(); ++i)
        os << "  (state " << ra.states[i] << (i == ra.initial ? " :initial" : "") << (ra.final[i] ? " :final" : "")
           << ")\n";
    for (auto& t : ra.trans) os << "  (trans " << ra.states[t.from] << " " << t.reg + 1 << " " << ra.states[t.to] << ")\n";
    os << ")\n";
    return os.str();
}

Foaa fromRegister(const RegisterAutomaton& ra) {
    Foaa a;
    a.theory = TheoryId::EQ;
    a.events = {"a"};
    Var x = mkVar("x", Sort::Id);
    a.inputVars = {x};
    std::size_t r = ra.registers;
    std::vector<Pred> q;
    for (std::size_t i = 0; i < ra.states.size(); ++i) {
        q.push_back(mkPred(ra.states[i], std::vector<Sort>(r, Sort::Id)));
        a.states.push_back({q.back(), static_cast<bool>(ra.final[i])});
    }
    std::vector<Term> u;
    for (auto& v : ra.init) u.push_back(tIdConst(v ? *v : kBlankIndex));
    a.initial = ra.states.empty() ? fFalse() : fPred(q[ra.initial], u);

    std::vector<Var> ys;
    for (std::size_t i = 0; i < r; ++i) ys.push_back(mkVar("y" + std::to_string(i + 1), Sort::Id));
    std::vector<Term> yt;
    for (Var y : ys) yt.push_back(tVar(y));
    std::map<std::size_t, std::vector<Formula>> bodies;
    for (auto& t : ra.trans) {
        std::vector<Formula> fresh;
        for (Var y : ys) fresh.push_back(fNot(fEq(tVar(x), tVar(y))));
        std::vector<Term> stored = yt;
        stored[t.reg] = tVar(x);
        fresh.push_back(fPred(q[t.to], stored));
        bodies[t.from].push_back(fOr(fAnd(fEq(tVar(ys[t.reg]), tVar(x)), fPred(q[t.to], yt)), fAnd(fresh)));
    }
    for (auto& [s, ds] : bodies) a.rules[{ra.states[s], "a"}] = Rule{ys, fOr(ds)};
    return a;
}

bool simulateRegister(const RegisterAutomaton& ra, const IdWord& w) {
    using Regs = std::vector<std::optional<std::uint32_t>>;
    std::set<std::pair<std::size_t, Regs>> cur;
    if (!ra.states.empty()) cur.insert({ra.initial, ra.init});
    for (auto v : w) {
        std::set<std::pair<std::size_t, Regs>> next;
        for (auto& [s, regs] : cur) {
            bool stored = std::find(regs.begin(), regs.end(), std::optional<std::uint32_t>(v)) != regs.end();
            for (auto& t : ra.trans) {
                if (t.from != s) continue;
                if (regs[t.reg] == v) next.insert({t.to, regs});
                if (!stored) {
                    Regs after = regs;
                    after[t.reg] = v;
                    next.insert({t.to, after});
                }
            }
        }
        cur = std::move(next);
    }
    for (auto& c : cur)
        if (ra.final[c.first]) return true;
    return false;
}

// ---------------------------------------------------------------------------

Verdict inclusion(const std::vector<Foaa>& lhs, const Foaa& rhs, const EmptinessOptions& opt) {
    if (lhs.empty()) throw Error("inclusion needs at least one left-hand automaton");
    for (auto& l : lhs)
        if (l.theory != rhs.theory || l.events != rhs.events || l.inputVars != rhs.inputVars)
            throw Error("incompatible automata: theories, events and inputs must agree");
    Foaa prod = lhs[0];
    for (std::size_t i = 1; i < lhs.size(); ++i) prod = intersect(prod, lhs[i]);
    prod = intersect(prod, complement(rhs));
    Verdict v = checkEmptiness(prod, opt);
    if (v.kind == VerdictKind::NonEmpty) {
        bool ok = !member(rhs, v.witness);
        for (auto& l : lhs) ok = ok && member(l, v.witness);
        if (!ok) {
            v.kind = VerdictKind::Unknown;
            v.reason = "witness failed re-verification on the operands";
        }
    }
    return v;
}

}  // namespace foalt
