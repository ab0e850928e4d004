#include "foalt/formula_io.hpp"

#include <cctype>

namespace foalt {

Rational parseRational(const std::string& s) {
    if (s.empty()) throw Error("empty number");
    std::string t = s;
    bool neg = false;
    if (t[0] == '-') {
        neg = true;
        t = t.substr(1);
    }
    if (t.empty()) throw Error("malformed number '" + s + "'");
    Rational r;
    auto dot = t.find('.');
    auto slash = t.find('/');
    auto digits = [&](const std::string& d) {
        if (d.empty()) return false;
        for (char c : d)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    if (slash != std::string::npos) {
        std::string a = t.substr(0, slash), b = t.substr(slash + 1);
        if (!digits(a) || !digits(b)) throw Error("malformed number '" + s + "'");
        mpz_class den(b);
        if (den == 0) throw Error("zero denominator in '" + s + "'");
        r = Rational(mpz_class(a), den);
        r.canonicalize();
    } else if (dot != std::string::npos) {
        std::string a = t.substr(0, dot), b = t.substr(dot + 1);
        if (!digits(a) || (!b.empty() && !digits(b))) throw Error("malformed number '" + s + "'");
        mpz_class scale = 1;
        for (std::size_t i = 0; i < b.size(); ++i) scale *= 10;
        r = Rational(mpz_class(a + b), scale);
        r.canonicalize();
    } else {
        if (!digits(t)) throw Error("malformed number '" + s + "'");
        r = Rational(mpz_class(t));
    }
    return neg ? Rational(-r) : r;
}

std::string rationalToDecimalOrFraction(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    mpz_class d = q.get_den();
    int twos = 0, fives = 0;
    while (d % 2 == 0) d /= 2, ++twos;
    while (d % 5 == 0) d /= 5, ++fives;
    if (d != 1) return q.get_num().get_str() + "/" + q.get_den().get_str();
    int digits = std::max(twos, fives);
    mpz_class scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    mpz_class n = q.get_num() * scale / q.get_den();
    bool neg = n < 0;
    std::string s = mpz_class(abs(n)).get_str();
    while (static_cast<int>(s.size()) <= digits) s = "0" + s;
    s.insert(s.size() - digits, ".");
    return neg ? "-" + s : s;
}

namespace {

bool looksNumeric(const std::string& s) {
    std::size_t i = s[0] == '-' ? 1 : 0;
    return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
}

// name@k refers to the stamped copy of an unstamped name.
bool splitStamp(const std::string& s, std::string& base, int& k) {
    auto at = s.rfind('@');
    if (at == std::string::npos || at == 0 || at + 1 == s.size()) return false;
    for (std::size_t i = at + 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    base = s.substr(0, at);
    k = std::stoi(s.substr(at + 1));
    return true;
}

Var lookupVar(const std::string& name, const Scope& sc) {
    auto it = sc.vars.find(name);
    if (it != sc.vars.end()) return it->second;
    std::string base;
    int k;
    if (splitStamp(name, base, k)) {
        auto jt = sc.vars.find(base);
        if (jt != sc.vars.end()) return mkVar(jt->second->name, jt->second->sort, k);
    }
    return nullptr;
}

Pred lookupPred(const std::string& name, const Scope& sc) {
    auto it = sc.preds.find(name);
    if (it != sc.preds.end()) return it->second;
    std::string base;
    int k;
    if (splitStamp(name, base, k)) {
        auto jt = sc.preds.find(base);
        if (jt != sc.preds.end()) return mkPred(jt->second->name, jt->second->argSorts, k);
    }
    return nullptr;
}

bool idConstIndex(const std::string& s, std::uint32_t& k) {
    if (s.size() < 2 || s[0] != 'v') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    k = static_cast<std::uint32_t>(std::stoul(s.substr(1)));
    return true;
}

Term numericTerm(const SExpr& e, const Scope& sc, const char* what) {
    Term t = parseTerm(e, sc);
    if (t->sort != Sort::Real) throw ParseError(e, std::string(what) + " expects Real operands");
    return t;
}

Term constantOf(const SExpr& e, Term t) {
    if (t->kind != TermKind::Lin || !t->mons.empty()) throw ParseError(e, "nonlinear term: expected a constant factor");
    return t;
}

}  // namespace

Term parseTerm(const SExpr& e, const Scope& sc) {
    try {
        if (e.isAtom()) {
            if (Var v = lookupVar(e.atom, sc)) return tVar(v);
            std::uint32_t k;
            if (sc.idConstants && idConstIndex(e.atom, k)) return tIdConst(k);
            if (looksNumeric(e.atom)) return tNum(parseRational(e.atom));
            throw ParseError(e, "unknown identifier '" + e.atom + "'");
        }
        if (e.items.empty() || !e.items[0].isAtom()) throw ParseError(e, "malformed term");
        const std::string& op = e.items[0].atom;
        std::size_t n = e.items.size() - 1;
        if (op == "+") {
            Term acc = tNum(0);
            for (std::size_t i = 1; i <= n; ++i) acc = tAdd(acc, numericTerm(e.items[i], sc, "+"));
            return acc;
        }
        if (op == "-") {
            if (n == 0) throw ParseError(e, "'-' expects arguments");
            Term first = numericTerm(e.items[1], sc, "-");
            if (n == 1) return tScale(Rational(-1), first);
            for (std::size_t i = 2; i <= n; ++i) first = tSub(first, numericTerm(e.items[i], sc, "-"));
            return first;
        }
        if (op == "*") {
            Term acc = tNum(1);
            for (std::size_t i = 1; i <= n; ++i) {
                Term t = numericTerm(e.items[i], sc, "*");
                if (t->mons.empty()) {
                    acc = tScale(t->constant, acc);
                } else {
                    constantOf(e, acc);
                    acc = tScale(acc->constant, t);
                }
            }
            return acc;
        }
        if (op == "/") {
            if (n != 2) throw ParseError(e, "'/' expects two arguments");
            Term a = numericTerm(e.items[1], sc, "/");
            Term b = constantOf(e.items[2], numericTerm(e.items[2], sc, "/"));
            if (b->constant == 0) throw ParseError(e, "division by zero");
            return tScale(Rational(1) / b->constant, a);
        }
        if (op == "fresh") {
            std::vector<Term> args;
            for (std::size_t i = 1; i <= n; ++i) {
                Term t = parseTerm(e.items[i], sc);
                if (t->sort != Sort::Id) throw ParseError(e.items[i], "fresh expects Id arguments");
                args.push_back(t);
            }
            return tFresh(std::move(args));
        }
        throw ParseError(e, "unknown function '" + op + "'");
    } catch (ParseError&) {
        throw;
    } catch (Error& err) {
        throw ParseError(e, err.what());
    }
}

namespace {

Formula parseQuant(const SExpr& e, const Scope& sc, bool universal) {
    if (e.items.size() != 3 || !e.items[1].isList) throw ParseError(e, "malformed quantifier");
    Scope inner = sc;
    std::vector<Var> vs;
    for (const SExpr& b : e.items[1].items) {
        if (!b.isList || b.items.size() != 2 || !b.items[0].isAtom() || !b.items[1].isAtom())
            throw ParseError(b, "malformed binder");
        Sort s;
        try {
            s = sortFromName(b.items[1].atom);
        } catch (Error& err) {
            throw ParseError(b.items[1], err.what());
        }
        if (s == Sort::Bool) throw ParseError(b, "Bool binders are not supported");
        Var v = mkVar(b.items[0].atom, s);
        inner.vars[b.items[0].atom] = v;
        vs.push_back(v);
    }
    if (vs.empty()) throw ParseError(e, "quantifier without binders");
    Formula body = parseFormula(e.items[2], inner);
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = fQuant(universal, *it, body);
    return body;
}

Formula parseCompare(const SExpr& e, const Scope& sc, const std::string& op) {
    std::size_t n = e.items.size() - 1;
    if (n < 2) throw ParseError(e, "'" + op + "' expects at least two arguments");
    std::vector<Term> ts;
    for (std::size_t i = 1; i <= n; ++i) ts.push_back(parseTerm(e.items[i], sc));
    std::vector<Formula> out;
    if (op == "distinct") {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (ts[i]->sort != ts[j]->sort) throw ParseError(e, "sort mismatch in distinct");
                out.push_back(fNot(fEq(ts[i], ts[j])));
            }
        return fAnd(out);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Term a = ts[i], b = ts[i + 1];
        if (a->sort != b->sort) throw ParseError(e, "sort mismatch in '" + op + "'");
        if (op != "=" && a->sort != Sort::Real) throw ParseError(e, "'" + op + "' expects Real operands");
        if (op == "=") out.push_back(fEq(a, b));
        else if (op == "<") out.push_back(fLt(a, b));
        else if (op == "<=") out.push_back(fLe(a, b));
        else if (op == ">") out.push_back(fGt(a, b));
        else out.push_back(fGe(a, b));
    }
    return fAnd(out);
}

}  // namespace

Formula parseFormula(const SExpr& e, const Scope& sc) {
    if (e.isAtom()) {
        if (e.atom == "true") return fTrue();
        if (e.atom == "false") return fFalse();
        if (Pred p = lookupPred(e.atom, sc)) {
            if (p->arity() != 0) throw ParseError(e, "predicate " + e.atom + " expects arguments");
            return fPred(p, {});
        }
        throw ParseError(e, "unknown formula '" + e.atom + "'");
    }
    if (e.items.empty() || !e.items[0].isAtom()) throw ParseError(e, "malformed formula");
    const std::string& op = e.items[0].atom;
    std::size_t n = e.items.size() - 1;
    if (op == "and" || op == "or") {
        std::vector<Formula> ks;
        for (std::size_t i = 1; i <= n; ++i) ks.push_back(parseFormula(e.items[i], sc));
        return op == "and" ? fAnd(std::move(ks)) : fOr(std::move(ks));
    }
    if (op == "not") {
        if (n != 1) throw ParseError(e, "'not' expects one argument");
        return fNot(parseFormula(e.items[1], sc));
    }
    if (op == "=>") {
        if (n < 2) throw ParseError(e, "'=>' expects at least two arguments");
        Formula r = parseFormula(e.items[n], sc);
        for (std::size_t i = n - 1; i >= 1; --i) r = fImplies(parseFormula(e.items[i], sc), r);
        return r;
    }
    if (op == "exists" || op == "forall") return parseQuant(e, sc, op == "forall");
    if (op == "=" || op == "<" || op == "<=" || op == ">" || op == ">=" || op == "distinct")
        return parseCompare(e, sc, op);
    if (Pred p = lookupPred(op, sc)) {
        if (n != p->arity())
            throw ParseError(e, "predicate " + op + " expects " + std::to_string(p->arity()) + " arguments");
        std::vector<Term> args;
        for (std::size_t i = 1; i <= n; ++i) {
            Term t = parseTerm(e.items[i], sc);
            if (t->sort != p->argSorts[i - 1])
                throw ParseError(e.items[i], "argument " + std::to_string(i) + " of " + op + " must have sort " +
                                                 sortName(p->argSorts[i - 1]));
            args.push_back(t);
        }
        return fPred(p, std::move(args));
    }
    throw ParseError(e, "unknown operator '" + op + "'");
}

Formula parseFormula(const std::string& text, const Scope& scope) { return parseFormula(parseSExpr(text), scope); }

}  // namespace foalt
