// Small incremental CDCL SAT solver. Literals are non-zero ints: +v / -v.
#pragma once

#include <cstdint>
#include <vector>

namespace foalt {

class SatSolver {
public:
    int newVar();
    int numVars() const { return static_cast<int>(assign_.size()) - 1; }
    // Returns false if the clause set became trivially unsatisfiable.
    bool addClause(std::vector<int> lits);
    bool solve();
    // Valid after solve() returned true.
    bool modelValue(int var) const { return model_[var] > 0; }

private:
    struct Clause {
        std::vector<int> lits;
        bool learnt = false;
    };

    std::size_t idx(int lit) const { return 2 * static_cast<std::size_t>(lit > 0 ? lit : -lit) + (lit < 0); }
    int value(int lit) const {
        int v = assign_[lit > 0 ? lit : -lit];
        return lit > 0 ? v : -v;
    }
    void enqueue(int lit, int reason);
    int propagate();  // returns conflicting clause index or -1
    void analyze(int confl, std::vector<int>& learnt, int& btLevel);
    void backtrack(int level);
    int pickBranch();
    void bump(int var);

    std::vector<Clause> clauses_;
    std::vector<std::vector<int>> watches_;  // by literal index
    std::vector<int> assign_{0};             // +1 true, -1 false, 0 unassigned
    std::vector<int> level_{0};
    std::vector<int> reason_{-1};
    std::vector<double> activity_{0.0};
    std::vector<int> phase_{-1};
    std::vector<int> trail_;
    std::vector<std::size_t> trailLim_;
    std::vector<int> model_;
    std::size_t qhead_ = 0;
    double inc_ = 1.0;
    bool unsat_ = false;
    std::vector<char> seen_{0};
};

}  // namespace foalt
