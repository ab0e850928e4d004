#include "foalt/sat.hpp"

#include <algorithm>
#include <cstdlib>

namespace foalt {

int SatSolver::newVar() {
    int v = static_cast<int>(assign_.size());
    assign_.push_back(0);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    phase_.push_back(-1);
    seen_.push_back(0);
    watches_.resize(2 * assign_.size() + 2);
    return v;
}

bool SatSolver::addClause(std::vector<int> lits) {
    if (unsat_) return false;
    backtrack(0);
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<int> kept;
    for (int l : lits) {
        if (std::binary_search(lits.begin(), lits.end(), -l)) return true;  // tautology
        int v = value(l);
        if (v > 0) return true;
        if (v == 0) kept.push_back(l);
    }
    if (kept.empty()) {
        unsat_ = true;
        return false;
    }
    if (kept.size() == 1) {
        enqueue(kept[0], -1);
        if (propagate() >= 0) unsat_ = true;
        return !unsat_;
    }
    int ci = static_cast<int>(clauses_.size());
    clauses_.push_back({kept, false});
    watches_[idx(-kept[0])].push_back(ci);
    watches_[idx(-kept[1])].push_back(ci);
    return true;
}

void SatSolver::enqueue(int lit, int reason) {
    int v = std::abs(lit);
    assign_[v] = lit > 0 ? 1 : -1;
    level_[v] = static_cast<int>(trailLim_.size());
    reason_[v] = reason;
    trail_.push_back(lit);
}

int SatSolver::propagate() {
    while (qhead_ < trail_.size()) {
        int p = trail_[qhead_++];
        // clauses watching -p... stored under idx(p) meaning "p became true falsifies watched -p"
        auto& ws = watches_[idx(p)];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            int ci = ws[i];
            auto& c = clauses_[ci].lits;
            if (c[0] == -p) std::swap(c[0], c[1]);
            if (value(c[0]) > 0) {
                ws[j++] = ws[i++];
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (value(c[k]) >= 0) {
                    std::swap(c[1], c[k]);
                    watches_[idx(-c[1])].push_back(ci);
                    moved = true;
                    break;
                }
            }
            if (moved) {
                ++i;
                continue;
            }
            ws[j++] = ws[i++];
            if (value(c[0]) < 0) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return ci;
            }
            enqueue(c[0], ci);
        }
        ws.resize(j);
    }
    return -1;
}

void SatSolver::bump(int var) {
    activity_[var] += inc_;
    if (activity_[var] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        inc_ *= 1e-100;
    }
}

void SatSolver::analyze(int confl, std::vector<int>& learnt, int& btLevel) {
    learnt.assign(1, 0);
    int counter = 0;
    int p = 0;
    std::size_t index = trail_.size();
    int curLevel = static_cast<int>(trailLim_.size());
    do {
        const auto& c = clauses_[confl].lits;
        for (int q : c) {
            if (q == p) continue;
            int v = std::abs(q);
            if (seen_[v] || level_[v] == 0) continue;
            seen_[v] = 1;
            bump(v);
            if (level_[v] == curLevel) ++counter;
            else learnt.push_back(q);
        }
        while (!seen_[std::abs(trail_[--index])]) {
        }
        p = trail_[index];
        confl = reason_[std::abs(p)];
        seen_[std::abs(p)] = 0;
        --counter;
    } while (counter > 0);
    learnt[0] = -p;
    btLevel = 0;
    std::size_t maxI = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
        int lv = level_[std::abs(learnt[i])];
        if (lv > btLevel) {
            btLevel = lv;
            maxI = i;
        }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[maxI]);
    for (int q : learnt) seen_[std::abs(q)] = 0;
    inc_ *= 1.05;
}

void SatSolver::backtrack(int level) {
    if (static_cast<int>(trailLim_.size()) <= level) return;
    for (std::size_t i = trail_.size(); i > trailLim_[level]; --i) {
        int v = std::abs(trail_[i - 1]);
        phase_[v] = assign_[v];
        assign_[v] = 0;
        reason_[v] = -1;
    }
    trail_.resize(trailLim_[level]);
    trailLim_.resize(level);
    qhead_ = trail_.size();
}

int SatSolver::pickBranch() {
    int best = 0;
    double bestA = -1;
    for (int v = 1; v < static_cast<int>(assign_.size()); ++v)
        if (assign_[v] == 0 && activity_[v] > bestA) {
            bestA = activity_[v];
            best = v;
        }
    if (best == 0) return 0;
    return phase_[best] > 0 ? best : -best;
}

bool SatSolver::solve() {
    if (unsat_) return false;
    backtrack(0);
    if (propagate() >= 0) {
        unsat_ = true;
        return false;
    }
    std::vector<int> learnt;
    for (;;) {
        int confl = propagate();
        if (confl >= 0) {
            if (trailLim_.empty()) {
                unsat_ = true;
                return false;
            }
            int bt;
            analyze(confl, learnt, bt);
            backtrack(bt);
            if (learnt.size() == 1) {
                enqueue(learnt[0], -1);
            } else {
                int ci = static_cast<int>(clauses_.size());
                clauses_.push_back({learnt, true});
                watches_[idx(-learnt[0])].push_back(ci);
                watches_[idx(-learnt[1])].push_back(ci);
                enqueue(learnt[0], ci);
            }
            continue;
        }
        int lit = pickBranch();
        if (lit == 0) {
            model_ = assign_;
            return true;
        }
        trailLim_.push_back(trail_.size());
        enqueue(lit, -1);
    }
}

}  // namespace foalt
