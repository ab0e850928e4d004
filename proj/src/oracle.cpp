#include "foalt/oracle.hpp"

#include <algorithm>
#include <map>

namespace foalt {

BoundedDomain idDomain(std::size_t n) {
    BoundedDomain d;
    for (std::size_t i = 0; i < n; ++i) d.push_back(Rational(static_cast<long>(i)));
    return d;
}

bool Config::operator<(const Config& o) const {
    if (pred != o.pred) return pred->id < o.pred->id;
    return args < o.args;
}

std::string Config::str() const {
    std::string s = pred->display() + "(";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + valueString(pred->argSorts[i], args[i]);
    return s + ")";
}

namespace {

using Dnf = std::vector<Cube>;

bool subsetOf(const Cube& a, const Cube& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

void minimize(Dnf& d) {
    std::sort(d.begin(), d.end(), [](const Cube& a, const Cube& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    d.erase(std::unique(d.begin(), d.end()), d.end());
    Dnf out;
    for (auto& c : d) {
        bool dominated = false;
        for (auto& o : out)
            if (subsetOf(o, c)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(c);
    }
    d = std::move(out);
}

struct Grounder {
    const BoundedDomain& dom;
    std::size_t cap;

    void check(const Dnf& d) const {
        if (d.size() > cap) throw Error("oracle domain too large: more than " + std::to_string(cap) + " models");
    }

    Dnf run(Formula f, Valuation& nu) {
        switch (f->kind) {
            case FKind::True: return {Cube{}};
            case FKind::False: return {};
            case FKind::Pred: {
                Config c{f->pred, {}};
                for (Term t : f->args) c.args.push_back(evalTerm(t, nu));
                return {Cube{c}};
            }
            case FKind::Not:
                if (f->kids[0]->kind == FKind::Pred) throw Error("minimal models need a positive formula");
                [[fallthrough]];
            case FKind::EqId:
            case FKind::Lin: return evaluate(f, nu) ? Dnf{Cube{}} : Dnf{};
            case FKind::And: {
                Dnf acc{Cube{}};
                for (Formula k : f->kids) {
                    Dnf d = run(k, nu);
                    Dnf next;
                    for (auto& a : acc)
                        for (auto& b : d) {
                            Cube c = a;
                            c.insert(b.begin(), b.end());
                            next.push_back(std::move(c));
                        }
                    minimize(next);
                    check(next);
                    acc = std::move(next);
                    if (acc.empty()) break;
                }
                return acc;
            }
            case FKind::Or: {
                Dnf acc;
                for (Formula k : f->kids) {
                    Dnf d = run(k, nu);
                    acc.insert(acc.end(), d.begin(), d.end());
                }
                minimize(acc);
                check(acc);
                return acc;
            }
            case FKind::Exists:
            case FKind::Forall: {
                Var v = f->bound;
                auto saved = nu.find(v) != nu.end() ? std::optional<Rational>(nu[v]) : std::nullopt;
                Dnf acc = f->kind == FKind::Forall ? Dnf{Cube{}} : Dnf{};
                for (const Rational& d : dom) {
                    nu[v] = d;
                    Dnf b = run(f->body(), nu);
                    if (f->kind == FKind::Exists) {
                        acc.insert(acc.end(), b.begin(), b.end());
                    } else {
                        Dnf next;
                        for (auto& x : acc)
                            for (auto& y : b) {
                                Cube c = x;
                                c.insert(y.begin(), y.end());
                                next.push_back(std::move(c));
                            }
                        acc = std::move(next);
                    }
                    minimize(acc);
                    check(acc);
                }
                if (saved) nu[v] = *saved;
                else nu.erase(v);
                return acc;
            }
        }
        return {};
    }
};

Interpretation toInterpretation(const Cube& c) {
    Interpretation I;
    for (auto& cf : c) I[cf.pred].insert(cf.args);
    return I;
}

// Every configuration of the predicates in phi over dom and the values nu
// already uses.
std::vector<Config> groundAtoms(Formula phi, const Valuation& nu, const BoundedDomain& dom) {
    std::vector<Rational> vals(dom.begin(), dom.end());
    for (auto& [v, q] : nu) vals.push_back(q);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::vector<Config> out;
    for (Pred p : predSymbols(phi)) {
        std::vector<std::vector<Rational>> tuples{{}};
        for (std::size_t i = 0; i < p->arity(); ++i) {
            std::vector<std::vector<Rational>> next;
            for (auto& t : tuples)
                for (auto& v : vals) {
                    auto u = t;
                    u.push_back(v);
                    next.push_back(std::move(u));
                }
            tuples = std::move(next);
        }
        for (auto& t : tuples) out.push_back({p, t});
    }
    return out;
}

}  // namespace

std::vector<Cube> minimalModels(Formula phi, const Valuation& nu, const BoundedDomain& dom, std::size_t cap) {
    if (dom.empty()) throw Error("empty domain");
    Valuation v = nu;
    Grounder g{dom, cap};
    return g.run(phi, v);
}

std::vector<Cube> minimalModelsByEnumeration(Formula phi, const Valuation& nu, const BoundedDomain& dom,
                                             std::size_t cap) {
    std::vector<Config> atoms = groundAtoms(phi, nu, dom);
    if (atoms.size() >= 63 || (std::size_t(1) << atoms.size()) > cap)
        throw Error("oracle domain too large: " + std::to_string(atoms.size()) + " ground atoms");
    std::vector<Cube> models;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << atoms.size()); ++mask) {
        Cube c;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (mask >> i & 1) c.insert(atoms[i]);
        Interpretation I = toInterpretation(c);
        if (evaluate(phi, nu, &I, &dom)) models.push_back(std::move(c));
    }
    std::vector<Cube> out;
    for (auto& m : models) {
        bool minimal = true;
        for (auto& o : models)
            if (o.size() < m.size() && subsetOf(o, m)) {
                minimal = false;
                break;
            }
        if (minimal) out.push_back(m);
    }
    return out;
}

namespace {

struct Runner {
    const Foaa& a;
    const DataWord& w;
    const BoundedDomain& dom;
    bool allModels;
    std::map<std::pair<std::size_t, Config>, bool> memo;

    Valuation stepValuation(const Rule& r, const Config& c, std::size_t k) const {
        Valuation nu;
        for (std::size_t i = 0; i < r.params.size(); ++i) nu[r.params[i]] = c.args[i];
        for (auto& [x, q] : w[k].values) nu[x] = q;
        return nu;
    }

    bool accepts(const Config& c, std::size_t k) {
        if (k == w.size()) return a.isFinal(c.pred);
        auto key = std::make_pair(k, c);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const Rule* r = a.rule(c.pred->name, w[k].event);
        bool res = false;
        if (r) {
            Valuation nu = stepValuation(*r, c, k);
            res = allModels ? someModel(r->body, nu, k + 1) : someMinimal(r->body, nu, k + 1);
        }
        memo.emplace(key, res);
        return res;
    }

    bool cubeAccepts(const Cube& m, std::size_t k) {
        for (auto& c : m)
            if (!accepts(c, k)) return false;
        return true;
    }

    bool someMinimal(Formula f, const Valuation& nu, std::size_t k) {
        for (auto& m : minimalModels(f, nu, dom))
            if (cubeAccepts(m, k)) return true;
        return false;
    }

    // Any model of f all of whose configurations accept from step k.
    bool someModel(Formula f, const Valuation& nu, std::size_t k) {
        std::vector<Config> good;
        for (auto& c : groundAtoms(f, nu, dom))
            if (accepts(c, k)) good.push_back(c);
        if (good.size() <= 12) {
            for (std::uint32_t mask = 0; mask < (1u << good.size()); ++mask) {
                Cube c;
                for (std::size_t i = 0; i < good.size(); ++i)
                    if (mask >> i & 1) c.insert(good[i]);
                Interpretation I = toInterpretation(c);
                if (evaluate(f, nu, &I, &dom)) return true;
            }
            return false;
        }
        Interpretation I = toInterpretation(Cube(good.begin(), good.end()));
        return evaluate(f, nu, &I, &dom);
    }

    bool run() {
        for (auto& l : w)
            for (Var x : a.inputVars)
                if (!l.values.count(x)) throw Error("letter without a value for " + x->name);
        return allModels ? someModel(a.initial, {}, 0) : someMinimal(a.initial, {}, 0);
    }
};

}  // namespace

bool acceptsExplicit(const Foaa& a, const DataWord& w, const BoundedDomain& dom) {
    Runner r{a, w, dom, false, {}};
    return r.run();
}

bool acceptsAllModels(const Foaa& a, const DataWord& w, const BoundedDomain& dom) {
    Runner r{a, w, dom, true, {}};
    return r.run();
}

}  // namespace foalt
