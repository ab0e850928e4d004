#include "foalt/emptiness.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <unordered_set>

#include "foalt/theory.hpp"

namespace foalt {

const char* verdictName(VerdictKind k) {
    switch (k) {
        case VerdictKind::Empty: return "empty";
        case VerdictKind::NonEmpty: return "nonempty";
        case VerdictKind::Unknown: return "unknown";
    }
    return "?";
}

bool Unfolding::sealed(int i) const { return nodes[i].label->kind == FKind::False; }

int Unfolding::coveringAncestor(int i) const {
    for (int j = i; j >= 0; j = nodes[j].parent) {
        int b = nodes[j].coveredBy;
        if (b >= 0 && !covered(b)) return j;
    }
    return -1;
}

bool Unfolding::covered(int i) const { return coveringAncestor(i) >= 0; }

bool Unfolding::isAncestorOrSelf(int a, int b) const {
    for (int j = b; j >= 0; j = nodes[j].parent)
        if (j == a) return true;
    return false;
}

std::optional<int> Unfolding::find(const EventSequence& alpha) const {
    int cur = 0;
    for (auto& e : alpha) {
        int next = -1;
        for (int c : nodes[cur].children)
            if (nodes[c].alpha.back() == e) next = c;
        if (next < 0) return std::nullopt;
        cur = next;
    }
    return cur;
}

std::string Unfolding::dump() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const UNode& n = nodes[i];
        os << eventSequenceString(n.alpha) << " | " << toString(n.label) << " | covered-by: ";
        if (n.coveredBy >= 0 && !covered(n.coveredBy)) os << eventSequenceString(nodes[n.coveredBy].alpha);
        else os << "-";
        os << "\n";
    }
    return os.str();
}

Unfolding initialUnfolding(const Foaa& a) {
    Unfolding u;
    UNode root;
    root.label = a.initial;
    u.nodes.push_back(std::move(root));
    return u;
}

void expand(Unfolding& u, const Foaa& a, int node) {
    if (u.nodes[node].expanded) throw Error("node " + eventSequenceString(u.nodes[node].alpha) + " is already expanded");
    if (u.covered(node)) throw Error("node " + eventSequenceString(u.nodes[node].alpha) + " is covered");
    u.nodes[node].expanded = true;
    for (auto& e : a.events) {
        UNode c;
        c.alpha = u.nodes[node].alpha;
        c.alpha.push_back(e);
        c.parent = node;
        c.label = fTrue();
        u.nodes[node].children.push_back(static_cast<int>(u.nodes.size()));
        u.nodes.push_back(std::move(c));
    }
}

// ---------------------------------------------------------------------------

namespace {

// A positive formula is satisfiable iff it is with every state atom true.
bool positiveSat(Formula f) {
    Formula g = mapAtoms(f, [](Formula at) -> Formula { return at->kind == FKind::Pred ? fTrue() : nullptr; });
    return isSatQf(eliminateQuantifiers(g));
}

// l1 = ∃e. A with A quantifier-free: l1 ⊨ l2 iff A ⊨ l2 with every state
// atom of l2 restricted to the atoms A mentions.
std::optional<bool> entailsExistential(Formula l1, Formula l2) {
    PrenexFormula p = prenex(l1);
    Subst ren;
    for (auto& q : p.prefix) {
        if (q.universal) return std::nullopt;
        ren.emplace(q.var, tVar(freshVar("e", q.var->sort)));
    }
    Formula m = substitute(p.matrix, ren);
    std::vector<Formula> atoms = predAtoms(m);
    Formula l2r = mapAtoms(l2, [&](Formula b) -> Formula {
        if (b->kind != FKind::Pred) return nullptr;
        std::vector<Formula> ds;
        for (Formula at : atoms) {
            if (at->pred != b->pred) continue;
            std::vector<Formula> cs;
            for (std::size_t i = 0; i < b->args.size(); ++i) cs.push_back(fEq(b->args[i], at->args[i]));
            cs.push_back(at);
            ds.push_back(fAnd(std::move(cs)));
        }
        return fOr(std::move(ds));
    });
    return !isSatQf(fAnd(m, fNot(eliminateQuantifiers(l2r))));
}

Entailment entailsImpl(Formula l1, Formula l2, const SolverConfig* solver, bool* usedSolver) {
    if (l1 == l2 || l2->kind == FKind::True || l1->kind == FKind::False) return Entailment::Holds;
    if (l2->kind == FKind::False) return positiveSat(l1) ? Entailment::Fails : Entailment::Holds;
    {
        auto c1 = conjuncts(l1);
        std::unordered_set<Formula> have(c1.begin(), c1.end());
        bool all = true;
        for (Formula c : conjuncts(l2))
            if (!have.count(c)) all = false;
        if (all) return Entailment::Holds;
    }
    if (auto r = entailsExistential(l1, l2)) return *r ? Entailment::Holds : Entailment::Fails;
    if (!solver || !solverAvailable(*solver)) return Entailment::Unknown;
    if (usedSolver) *usedSolver = true;
    SolverAnswer ans = checkSatExternal(*solver, fAnd(l1, fNot(l2)));
    if (ans.status == SolverStatus::Unsat) return Entailment::Holds;
    return ans.status == SolverStatus::Sat ? Entailment::Fails : Entailment::Unknown;
}

Entailment cachedEntails(Formula l1, Formula l2, const CoverageContext& ctx) {
    if (ctx.cache) {
        auto it = ctx.cache->find({l1, l2});
        if (it != ctx.cache->end()) return it->second;
    }
    if (ctx.checks) ++*ctx.checks;
    bool used = false;
    Entailment e = entailsImpl(l1, l2, ctx.solver, &used);
    if (used && ctx.solverQueries) ++*ctx.solverQueries;
    if (ctx.cache) ctx.cache->emplace(std::make_pair(l1, l2), e);
    return e;
}

}  // namespace

Entailment entails(Formula l1, Formula l2, const SolverConfig* solver) {
    return entailsImpl(l1, l2, solver, nullptr);
}

bool labelSafe(const Foaa& a, Formula label) {
    Formula g = mapAtoms(label, [&](Formula at) -> Formula {
        if (at->kind != FKind::Pred) return nullptr;
        return a.isFinal(at->pred) ? fTrue() : fFalse();
    });
    return !isSatQf(eliminateQuantifiers(g));
}

bool isSafe(const Unfolding& u, const Foaa& a) {
    for (auto& n : u.nodes)
        if (!labelSafe(a, n.label)) return false;
    return true;
}

bool isClosed(const Unfolding& u) {
    for (int i = 0; i < static_cast<int>(u.nodes.size()); ++i)
        if (u.isLeaf(i) && !u.sealed(i) && !u.covered(i)) return false;
    return true;
}

std::optional<int> checkCoverage(Unfolding& u, int node, const CoverageContext& ctx) {
    std::vector<int> path;
    for (int j = node; j >= 0; j = u.nodes[j].parent) path.push_back(j);
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        int ap = *it;
        for (int b = 0; b < ap; ++b) {
            if (!u.nodes[b].visited || u.covered(b)) continue;
            if (cachedEntails(u.nodes[ap].label, u.nodes[b].label, ctx) == Entailment::Holds) {
                u.nodes[ap].coveredBy = b;
                return b;
            }
        }
    }
    return std::nullopt;
}

std::vector<int> refine(Unfolding& u, const Foaa& a, const EventSequence& alpha, const Gli& g) {
    GliCheck c = validateGli(a, alpha, g);
    if (!c.ok()) throw Error("refusing to refine with an invalid interpolant: " + c.reason);
    std::vector<int> changed;
    int cur = 0;
    for (std::size_t k = 0; k <= alpha.size(); ++k) {
        if (k > 0) {
            auto next = u.find(EventSequence(alpha.begin(), alpha.begin() + static_cast<long>(k)));
            if (!next) throw Error("event sequence is not in the unfolding");
            cur = *next;
        }
        Formula j = closeInterpolant(g, k);
        Formula old = u.nodes[cur].label;
        if (j->kind == FKind::True) continue;
        auto have = conjuncts(old);
        if (std::find(have.begin(), have.end(), j) != have.end()) continue;
        u.nodes[cur].label = j->kind == FKind::False ? fFalse() : fAnd(old, j);
        ++u.nodes[cur].refinements;
        changed.push_back(cur);
    }
    return changed;
}

// ---------------------------------------------------------------------------

Verdict checkEmptiness(const Foaa& a, const EmptinessOptions& opt) {
    using Clock = std::chrono::steady_clock;
    auto start = Clock::now();
    Verdict v;
    v.unfolding = initialUnfolding(a);
    Unfolding& u = v.unfolding;
    EmptinessStats& st = v.stats;
    std::map<std::pair<Formula, Formula>, Entailment> cache;
    SolverConfig solver = opt.solver;
    solver.timeoutMs = opt.budget.solverTimeoutMs;
    bool haveSolver = opt.useSolver && solverAvailable(solver);
    CoverageContext ctx{haveSolver ? &solver : nullptr, &cache, &st.coverageChecks, &st.solverQueries};
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
    auto finish = [&](VerdictKind k, std::string reason = "") {
        v.kind = k;
        v.reason = std::move(reason);
        st.seconds = elapsed();
        return v;
    };

    try {
        for (;;) {
            if (elapsed() > opt.budget.wallSeconds) return finish(VerdictKind::Unknown, "budget: time");
            int pick = -1;
            for (int i = 0; i < static_cast<int>(u.nodes.size()) && pick < 0; ++i)
                if (u.isLeaf(i) && !u.sealed(i) && !u.covered(i)) pick = i;
            if (pick < 0) {
                if (!isSafe(u, a) || !isClosed(u)) return finish(VerdictKind::Unknown, "internal: certificate check failed");
                return finish(VerdictKind::Empty);
            }
            ++st.nodesVisited;
            u.nodes[pick].visited = true;
            if (checkCoverage(u, pick, ctx)) continue;

            if (!labelSafe(a, u.nodes[pick].label)) {
                const EventSequence alpha = u.nodes[pick].alpha;
                SequenceCheck sc = checkEventSequence(a, alpha);
                if (sc.accepting) {
                    if (!member(a, sc.word)) return finish(VerdictKind::Unknown, "internal: witness word rejected");
                    v.witness = sc.word;
                    return finish(VerdictKind::NonEmpty);
                }
                Gli g = interpolate(a, alpha);
                if (opt.onInterpolant) opt.onInterpolant(alpha, g);
                std::vector<int> changed = refine(u, a, alpha, g);
                ++st.refinements;
                for (auto& n : u.nodes) {
                    if (n.coveredBy < 0) continue;
                    if (std::find(changed.begin(), changed.end(), n.coveredBy) == changed.end()) continue;
                    if (cachedEntails(n.label, u.nodes[n.coveredBy].label, ctx) != Entailment::Holds) n.coveredBy = -1;
                }
                if (u.sealed(pick)) continue;
                if (!labelSafe(a, u.nodes[pick].label))
                    return finish(VerdictKind::Unknown, "internal: refined label is unsafe");
                if (checkCoverage(u, pick, ctx)) continue;
            }
            if (u.nodes.size() + a.events.size() > opt.budget.maxNodes)
                return finish(VerdictKind::Unknown, "budget: nodes");
            expand(u, a, pick);
            ++st.nodesExpanded;
        }
    } catch (const Error& e) {
        return finish(VerdictKind::Unknown, std::string("error: ") + e.what());
    }
}

CertificateReport auditCertificate(const Foaa& a0, const Unfolding& u, const SolverConfig* solver) {
    Foaa a = materializeRules(a0);
    CertificateReport r;
    r.safe = isSafe(u, a);
    r.complete = true;
    for (auto& n : u.nodes)
        if (n.expanded && n.children.size() != a.events.size()) r.complete = false;
    r.closed = isClosed(u);
    // Re-prove each coverage pair that closedness relies on.
    for (int i = 0; i < static_cast<int>(u.nodes.size()) && r.closed; ++i) {
        if (!u.isLeaf(i) || u.sealed(i)) continue;
        int ap = u.coveringAncestor(i);
        int b = u.nodes[ap].coveredBy;
        if (b >= ap || entails(u.nodes[ap].label, u.nodes[b].label, solver) != Entailment::Holds) r.closed = false;
    }
    if (!solver || !solverAvailable(*solver)) return r;
    for (auto& n : u.nodes) {
        if (n.parent < 0) continue;
        const UNode& p = u.nodes[n.parent];
        if (n.label->kind == FKind::True || p.label->kind == FKind::False) continue;
        ++r.consecutionChecked;
        Formula q = fAnd({stamp(p.label, 0, a.inputVars), stepAxioms(a, n.alpha.back(), 0),
                          fNot(stamp(n.label, 1, a.inputVars))});
        SolverAnswer ans = checkSatExternal(*solver, q);
        if (ans.status == SolverStatus::Sat) ++r.consecutionFailed;
        else if (ans.status == SolverStatus::Unknown) ++r.consecutionUnknown;
    }
    return r;
}

}  // namespace foalt
