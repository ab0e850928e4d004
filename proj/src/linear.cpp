#include "foalt/linear.hpp"

#include <algorithm>
#include <set>

namespace foalt {

namespace {

struct Expr {
    std::vector<std::pair<Var, Rational>> mons;  // sorted by VarLess, non-zero
    Rational k;

    Rational coef(Var v) const {
        for (auto& m : mons)
            if (m.first == v) return m.second;
        return 0;
    }
    Expr addScaled(const Rational& a, const Expr& o, const Rational& b) const {
        Expr r;
        r.k = a * k + b * o.k;
        std::size_t i = 0, j = 0;
        VarLess lt;
        while (i < mons.size() || j < o.mons.size()) {
            if (j == o.mons.size() || (i < mons.size() && lt(mons[i].first, o.mons[j].first))) {
                Rational c = a * mons[i].second;
                if (c != 0) r.mons.emplace_back(mons[i].first, c);
                ++i;
            } else if (i == mons.size() || lt(o.mons[j].first, mons[i].first)) {
                Rational c = b * o.mons[j].second;
                if (c != 0) r.mons.emplace_back(o.mons[j].first, c);
                ++j;
            } else {
                Rational c = a * mons[i].second + b * o.mons[j].second;
                if (c != 0) r.mons.emplace_back(mons[i].first, c);
                ++i;
                ++j;
            }
        }
        return r;
    }
    // Removes v by replacing it with `def` (v = def).
    Expr substitute(Var v, const Expr& def) const {
        Rational c = coef(v);
        if (c == 0) return *this;
        Expr without = *this;
        without.mons.erase(std::find_if(without.mons.begin(), without.mons.end(),
                                        [v](auto& m) { return m.first == v; }));
        return without.addScaled(1, def, c);
    }
    Rational eval(const RealModel& m) const {
        Rational r = k;
        for (auto& [v, c] : mons) {
            auto it = m.find(v);
            if (it != m.end()) r += c * it->second;
        }
        return r;
    }
};

enum class Kind { Le, Lt, Eq };

struct Con {
    Expr e;  // e kind 0
    Kind kind;
};

Expr fromTerm(Term t) {
    Expr e;
    e.mons = t->mons;
    e.k = t->constant;
    return e;
}

struct Stage {
    Var var;
    bool isDef;
    Expr def;                // isDef: var = def
    std::vector<Con> bounds;  // constraints mentioning var
};

// Scales so the first coefficient has absolute value one.
Con normalize(Con c) {
    if (c.e.mons.empty()) return c;
    Rational lead = c.e.mons[0].second;
    if (c.kind != Kind::Eq) lead = abs(lead);
    if (lead != 1) {
        Rational inv = Rational(1) / lead;
        for (auto& m : c.e.mons) m.second *= inv;
        c.e.k *= inv;
    }
    return c;
}

struct ConKey {
    bool operator()(const Con& a, const Con& b) const {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.e.mons.size() != b.e.mons.size()) return a.e.mons.size() < b.e.mons.size();
        for (std::size_t i = 0; i < a.e.mons.size(); ++i) {
            if (a.e.mons[i].first != b.e.mons[i].first) return VarLess{}(a.e.mons[i].first, b.e.mons[i].first);
            if (a.e.mons[i].second != b.e.mons[i].second) return a.e.mons[i].second < b.e.mons[i].second;
        }
        return a.e.k < b.e.k;
    }
};

bool constantHolds(const Con& c) {
    switch (c.kind) {
        case Kind::Le: return c.e.k <= 0;
        case Kind::Lt: return c.e.k < 0;
        case Kind::Eq: return c.e.k == 0;
    }
    return false;
}

std::optional<RealModel> solveBasic(std::vector<Con> cons) {
    std::vector<Stage> stages;
    for (;;) {
        // Constant constraints and deduplication.
        std::set<Con, ConKey> uniq;
        std::vector<Con> live;
        for (auto& c : cons) {
            if (c.e.mons.empty()) {
                if (!constantHolds(c)) return std::nullopt;
                continue;
            }
            Con n = normalize(c);
            if (uniq.insert(n).second) live.push_back(n);
        }
        cons = std::move(live);
        if (cons.empty()) break;

        auto eq = std::find_if(cons.begin(), cons.end(), [](const Con& c) { return c.kind == Kind::Eq; });
        if (eq != cons.end()) {
            Var x = eq->e.mons[0].first;
            Rational c = eq->e.mons[0].second;
            // x = -(e - c x)/c
            Expr rest = eq->e;
            rest.mons.erase(rest.mons.begin());
            Expr def = rest.addScaled(Rational(-1) / c, Expr{}, 0);
            Con eqCopy = *eq;
            cons.erase(eq);
            for (auto& o : cons) o.e = o.e.substitute(x, def);
            stages.push_back({x, true, def, {eqCopy}});
            continue;
        }

        // Pick the variable with the smallest product of bound counts.
        std::map<Var, std::pair<int, int>, VarLess> counts;
        for (auto& c : cons)
            for (auto& [v, q] : c.e.mons) {
                auto& p = counts[v];
                (q > 0 ? p.second : p.first)++;
            }
        Var best = nullptr;
        long bestScore = 0;
        for (auto& [v, p] : counts) {
            long score = static_cast<long>(p.first) * p.second - p.first - p.second;
            if (!best || score < bestScore) {
                best = v;
                bestScore = score;
            }
        }
        std::vector<Con> lower, upper, next;
        for (auto& c : cons) {
            Rational q = c.e.coef(best);
            if (q == 0) next.push_back(c);
            else if (q < 0) lower.push_back(c);
            else upper.push_back(c);
        }
        for (auto& l : lower)
            for (auto& u : upper) {
                Rational a = l.e.coef(best), b = u.e.coef(best);
                Con n;
                n.e = l.e.addScaled(b, u.e, -a);
                n.kind = (l.kind == Kind::Lt || u.kind == Kind::Lt) ? Kind::Lt : Kind::Le;
                next.push_back(n);
            }
        Stage st{best, false, {}, lower};
        st.bounds.insert(st.bounds.end(), upper.begin(), upper.end());
        stages.push_back(std::move(st));
        cons = std::move(next);
    }

    RealModel m;
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        Var x = it->var;
        if (it->isDef) {
            m[x] = it->def.eval(m);
            continue;
        }
        bool hasLo = false, hasHi = false, loStrict = false, hiStrict = false;
        Rational lo, hi;
        for (auto& c : it->bounds) {
            Rational q = c.e.coef(x);
            m[x] = 0;
            Rational rest = c.e.eval(m);  // value with x = 0
            Rational b = -rest / q;
            bool strict = c.kind == Kind::Lt;
            if (q < 0) {
                if (!hasLo || b > lo || (b == lo && strict)) {
                    lo = b;
                    loStrict = strict;
                }
                hasLo = true;
            } else {
                if (!hasHi || b < hi || (b == hi && strict)) {
                    hi = b;
                    hiStrict = strict;
                }
                hasHi = true;
            }
        }
        Rational v = 0;
        if (hasLo && hasHi) v = lo == hi ? lo : (lo + hi) / 2;
        else if (hasLo) v = loStrict ? lo + 1 : lo;
        else if (hasHi) v = hiStrict ? hi - 1 : hi;
        m[x] = v;
    }
    return m;
}

}  // namespace

std::optional<RealModel> solveLinear(const std::vector<LinConstraint>& cs) {
    std::vector<Con> base;
    std::vector<Expr> diseqs;
    for (auto& c : cs) {
        Expr e = fromTerm(c.term);
        switch (c.op) {
            case LinOp::Lt: base.push_back({e, Kind::Lt}); break;
            case LinOp::Le: base.push_back({e, Kind::Le}); break;
            case LinOp::Eq: base.push_back({e, Kind::Eq}); break;
            case LinOp::Ne: diseqs.push_back(e); break;
        }
    }
    if (!solveBasic(base)) return std::nullopt;
    for (auto& d : diseqs) {
        auto tryBase = base;
        tryBase.push_back({d, Kind::Lt});
        if (solveBasic(tryBase)) {
            base = std::move(tryBase);
            continue;
        }
        tryBase = base;
        tryBase.push_back({d.addScaled(-1, Expr{}, 0), Kind::Lt});
        if (!solveBasic(tryBase)) return std::nullopt;
        base = std::move(tryBase);
    }
    return solveBasic(base);
}

}  // namespace foalt
