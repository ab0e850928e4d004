// Lazy-annotation emptiness check: an unfolding of event sequences labeled
// with positive sentences, refined by interpolants and pruned by coverage.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foalt/automaton.hpp"
#include "foalt/interp.hpp"
#include "foalt/solver.hpp"
#include "foalt/symbolic.hpp"

namespace foalt {

struct UNode {
    EventSequence alpha;
    int parent = -1;
    std::vector<int> children;
    Formula label = nullptr;
    int coveredBy = -1;  // β with label(this) ⊨ label(β)
    bool visited = false;
    bool expanded = false;
    std::size_t refinements = 0;
};

struct Unfolding {
    std::vector<UNode> nodes;  // nodes[0] is ε; children follow their parent

    bool isLeaf(int i) const { return !nodes[i].expanded; }
    bool sealed(int i) const;
    // Some ancestor-or-self is covered by a node that is itself uncovered.
    bool covered(int i) const;
    // Ancestor-or-self of i carrying the coverage pair, or -1.
    int coveringAncestor(int i) const;
    bool isAncestorOrSelf(int a, int b) const;
    std::optional<int> find(const EventSequence& alpha) const;
    // One node per line: `<alpha> | <label> | covered-by: <beta or ->`.
    std::string dump() const;
};

Unfolding initialUnfolding(const Foaa& a);
// Adds one child per event, labeled ⊤. Rejects covered or expanded nodes.
void expand(Unfolding& u, const Foaa& a, int node);

enum class Entailment { Holds, Fails, Unknown };
// l1 ⊨ l2 for positive sentences over unstamped state predicates. Decided
// internally when l1 is existential; otherwise asks the external solver.
Entailment entails(Formula l1, Formula l2, const SolverConfig* solver);

// label ∧ ⋀_{q ∉ F} ∀y. q(y) → ⊥ is unsatisfiable.
bool labelSafe(const Foaa& a, Formula label);
bool isSafe(const Unfolding& u, const Foaa& a);
// Every leaf is sealed or covered by an uncovered node.
bool isClosed(const Unfolding& u);

struct CoverageContext {
    const SolverConfig* solver = nullptr;
    std::map<std::pair<Formula, Formula>, Entailment>* cache = nullptr;
    std::size_t* checks = nullptr;
    std::size_t* solverQueries = nullptr;
};
// Tries to cover `node` (through it or an ancestor) by an earlier visited
// uncovered node; records the pair and returns the covering node.
std::optional<int> checkCoverage(Unfolding& u, int node, const CoverageContext& ctx);

// Conjoins J_k to the label of every prefix α_k after validating g. Returns
// the indices of nodes whose label changed.
std::vector<int> refine(Unfolding& u, const Foaa& a, const EventSequence& alpha, const Gli& g);

struct Budget {
    std::size_t maxNodes = 10000;
    double wallSeconds = 60;
    unsigned solverTimeoutMs = 2000;
};

struct EmptinessStats {
    std::size_t nodesExpanded = 0;
    std::size_t nodesVisited = 0;
    std::size_t refinements = 0;
    std::size_t coverageChecks = 0;
    std::size_t solverQueries = 0;
    double seconds = 0;
};

enum class VerdictKind { Empty, NonEmpty, Unknown };
const char* verdictName(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    DataWord witness;    // NonEmpty
    std::string reason;  // Unknown
    Unfolding unfolding;
    EmptinessStats stats;
};

struct EmptinessOptions {
    Budget budget;
    SolverConfig solver;
    bool useSolver = true;
    // Called for every spurious event sequence with its interpolant.
    std::function<void(const EventSequence&, const Gli&)> onInterpolant;
};

Verdict checkEmptiness(const Foaa& a, const EmptinessOptions& opt = {});

struct CertificateReport {
    bool safe = false;
    bool closed = false;
    bool complete = false;  // every expanded node has one child per event
    std::size_t consecutionChecked = 0;
    std::size_t consecutionFailed = 0;
    std::size_t consecutionUnknown = 0;
    bool ok() const { return safe && closed && complete && consecutionFailed == 0; }
};
// Independent audit of an Empty certificate: safety, completeness, closedness
// with every coverage pair re-proved, and one-step consecution per edge when
// a solver is given.
CertificateReport auditCertificate(const Foaa& a, const Unfolding& u, const SolverConfig* solver);

}  // namespace foalt
