#include "foalt/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include "foalt/formula_io.hpp"
#include "foalt/sexpr.hpp"

extern char** environ;

namespace foalt {

const char* solverStatusName(SolverStatus s) {
    switch (s) {
        case SolverStatus::Sat: return "sat";
        case SolverStatus::Unsat: return "unsat";
        case SolverStatus::Unknown: return "unknown";
    }
    return "?";
}

namespace {

bool executable(const std::string& p) {
    struct stat st{};
    return !p.empty() && stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && access(p.c_str(), X_OK) == 0;
}

std::string onPath(const std::string& name) {
    const char* path = std::getenv("PATH");
    if (!path) return "";
    std::stringstream ss(path);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
        std::string cand = (dir.empty() ? "." : dir) + "/" + name;
        if (executable(cand)) return cand;
    }
    return "";
}

std::string varSym(Var v) { return quoteSymbol("v_" + v->display()); }
std::string predSym(Pred p) { return quoteSymbol("p_" + p->display()); }
std::string constSym(std::uint32_t k) { return "c_v" + std::to_string(k); }
std::string freshSym(std::size_t k) { return "fresh" + std::to_string(k); }

std::string sortSym(Sort s) {
    switch (s) {
        case Sort::Real: return "Real";
        case Sort::Id: return "Id";
        case Sort::Bool: return "Bool";
    }
    return "?";
}

std::string realLit(const Rational& q) {
    Rational a = abs(q);
    std::string body = a.get_den() == 1 ? a.get_num().get_str() + ".0"
                                        : "(/ " + a.get_num().get_str() + ".0 " + a.get_den().get_str() + ".0)";
    return sgn(q) < 0 ? "(- " + body + ")" : body;
}

struct Printer {
    std::set<Var, VarLess> free;
    std::set<Pred> preds;
    std::set<std::uint32_t> consts;
    std::set<std::size_t> freshArities;
    bool usesId = false, usesReal = false;

    std::string term(Term t, const std::set<Var, VarLess>& bound) {
        switch (t->kind) {
            case TermKind::Lin: {
                usesReal = true;
                std::vector<std::string> ps;
                for (auto& [v, c] : t->mons) {
                    note(v, bound);
                    ps.push_back(c == 1 ? varSym(v) : "(* " + realLit(c) + " " + varSym(v) + ")");
                }
                if (t->constant != 0 || ps.empty()) ps.push_back(realLit(t->constant));
                if (ps.size() == 1) return ps[0];
                std::string s = "(+";
                for (auto& p : ps) s += " " + p;
                return s + ")";
            }
            case TermKind::IdVar: usesId = true; note(t->var, bound); return varSym(t->var);
            case TermKind::IdConst: usesId = true; consts.insert(t->index); return constSym(t->index);
            case TermKind::Fresh: {
                usesId = true;
                if (t->args.empty()) {
                    freshArities.insert(0);
                    return freshSym(0);
                }
                freshArities.insert(t->args.size());
                std::string s = "(" + freshSym(t->args.size());
                for (Term a : t->args) s += " " + term(a, bound);
                return s + ")";
            }
        }
        return "?";
    }

    void note(Var v, const std::set<Var, VarLess>& bound) {
        if (!bound.count(v)) free.insert(v);
    }

    std::string formula(Formula f, std::set<Var, VarLess>& bound) {
        switch (f->kind) {
            case FKind::True: return "true";
            case FKind::False: return "false";
            case FKind::EqId: return "(= " + term(f->lhs, bound) + " " + term(f->rhs, bound) + ")";
            case FKind::Lin: {
                const char* op = f->rel == Rel::Lt ? "<" : f->rel == Rel::Le ? "<=" : "=";
                return std::string("(") + op + " " + term(f->lhs, bound) + " 0.0)";
            }
            case FKind::Pred: {
                preds.insert(f->pred);
                if (f->args.empty()) return predSym(f->pred);
                std::string s = "(" + predSym(f->pred);
                for (Term a : f->args) s += " " + term(a, bound);
                return s + ")";
            }
            case FKind::Not: return "(not " + formula(f->kids[0], bound) + ")";
            case FKind::And:
            case FKind::Or: {
                std::string s = f->kind == FKind::And ? "(and" : "(or";
                for (Formula k : f->kids) s += " " + formula(k, bound);
                return s + ")";
            }
            case FKind::Exists:
            case FKind::Forall: {
                Var v = f->bound;
                if (v->sort == Sort::Id) usesId = true;
                if (v->sort == Sort::Real) usesReal = true;
                bool had = bound.count(v) > 0;
                bound.insert(v);
                std::string body = formula(f->body(), bound);
                if (!had) bound.erase(v);
                return std::string("(") + (f->kind == FKind::Exists ? "exists" : "forall") + " ((" + varSym(v) + " " +
                       sortSym(v->sort) + ")) " + body + ")";
            }
        }
        return "?";
    }
};

}  // namespace

std::string resolveSolver(const SolverConfig& cfg) {
    std::string p = cfg.path;
    if (p.empty())
        if (const char* env = std::getenv("FOALT_SOLVER")) p = env;
    if (p.empty()) p = "z3";
    if (p.find('/') != std::string::npos) return executable(p) ? p : "";
    return onPath(p);
}

bool solverAvailable(const SolverConfig& cfg) { return !resolveSolver(cfg).empty(); }

std::string logicFor(Formula f) {
    Printer pr;
    std::set<Var, VarLess> bound;
    pr.formula(f, bound);
    for (Var v : pr.free) {
        if (v->sort == Sort::Id) pr.usesId = true;
        if (v->sort == Sort::Real) pr.usesReal = true;
    }
    bool uf = pr.usesId || !pr.preds.empty();
    if (!pr.usesReal) return "UF";
    return uf ? "UFLRA" : "LRA";
}

std::string smtLibScript(const SolverQuery& q) {
    Printer pr;
    std::set<Var, VarLess> bound;
    std::string body = pr.formula(q.assertion, bound);
    for (Var v : pr.free) {
        if (v->sort == Sort::Id) pr.usesId = true;
        if (v->sort == Sort::Real) pr.usesReal = true;
    }
    std::ostringstream os;
    os << "(set-option :print-success false)\n";
    if (q.wantModel) os << "(set-option :produce-models true)\n";
    os << "(set-logic " << logicFor(q.assertion) << ")\n";
    if (pr.usesId) os << "(declare-sort Id 0)\n";
    for (std::uint32_t k : pr.consts) os << "(declare-fun " << constSym(k) << " () Id)\n";
    if (pr.consts.size() > 1) {
        os << "(assert (distinct";
        for (std::uint32_t k : pr.consts) os << " " << constSym(k);
        os << "))\n";
    }
    for (std::size_t k : pr.freshArities) {
        os << "(declare-fun " << freshSym(k) << " (";
        for (std::size_t i = 0; i < k; ++i) os << (i ? " " : "") << "Id";
        os << ") Id)\n";
        if (k == 0) continue;
        os << "(assert (forall (";
        for (std::size_t i = 0; i < k; ++i) os << "(a" << i << " Id)";
        os << ") (and";
        for (std::size_t i = 0; i < k; ++i) {
            os << " (not (= (" << freshSym(k);
            for (std::size_t j = 0; j < k; ++j) os << " a" << j;
            os << ") a" << i << "))";
        }
        os << ")))\n";
    }
    for (Pred p : pr.preds) {
        os << "(declare-fun " << predSym(p) << " (";
        for (std::size_t i = 0; i < p->arity(); ++i) os << (i ? " " : "") << sortSym(p->argSorts[i]);
        os << ") Bool)\n";
    }
    for (Var v : pr.free) os << "(declare-fun " << varSym(v) << " () " << sortSym(v->sort) << ")\n";
    os << "(assert " << body << ")\n(check-sat)\n";
    if (q.wantModel) os << "(get-model)\n";
    os << "(exit)\n";
    return os.str();
}

namespace {

struct RunResult {
    bool ok = false;
    bool timedOut = false;
    std::string out;
    std::string error;
};

RunResult runProcess(const std::string& bin, const std::vector<std::string>& args, const std::string& input,
                     unsigned timeoutMs) {
    RunResult rr;
    int in[2], out[2];
    if (pipe(in) != 0) return {false, false, "", "pipe failed"};
    if (pipe(out) != 0) {
        close(in[0]);
        close(in[1]);
        return {false, false, "", "pipe failed"};
    }
    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_adddup2(&fa, in[0], 0);
    posix_spawn_file_actions_adddup2(&fa, out[1], 1);
    posix_spawn_file_actions_adddup2(&fa, out[1], 2);
    posix_spawn_file_actions_addclose(&fa, in[1]);
    posix_spawn_file_actions_addclose(&fa, out[0]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(bin.c_str()));
    for (auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    pid_t pid;
    int rc = posix_spawn(&pid, bin.c_str(), &fa, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&fa);
    close(in[0]);
    close(out[1]);
    if (rc != 0) {
        close(in[1]);
        close(out[0]);
        return {false, false, "", std::string("cannot launch solver: ") + std::strerror(rc)};
    }
    signal(SIGPIPE, SIG_IGN);
    fcntl(in[1], F_SETFL, O_NONBLOCK);
    fcntl(out[0], F_SETFL, O_NONBLOCK);
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeoutMs);
    std::size_t written = 0;
    bool inOpen = true, outOpen = true;
    char buf[4096];
    while (outOpen) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            rr.timedOut = true;
            break;
        }
        pollfd fds[2];
        int nf = 0;
        fds[nf++] = {out[0], POLLIN, 0};
        if (inOpen) fds[nf++] = {in[1], POLLOUT, 0};
        int ms = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
        if (poll(fds, nf, ms) < 0) continue;
        if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
            ssize_t r = read(out[0], buf, sizeof buf);
            if (r > 0) rr.out.append(buf, static_cast<std::size_t>(r));
            else if (r == 0) outOpen = false;
        }
        if (inOpen && nf > 1 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
            ssize_t w = write(in[1], input.data() + written, input.size() - written);
            if (w > 0) written += static_cast<std::size_t>(w);
            if (w < 0 || written == input.size()) {
                close(in[1]);
                inOpen = false;
            }
        }
    }
    if (inOpen) close(in[1]);
    close(out[0]);
    if (rr.timedOut) kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
    rr.ok = !rr.timedOut;
    return rr;
}

Rational parseValue(const SExpr& e) {
    if (e.isAtom()) return parseRational(e.atom);
    if (e.items.size() == 2 && e.items[0].is("-")) return -parseValue(e.items[1]);
    if (e.items.size() == 3 && e.items[0].is("/")) return parseValue(e.items[1]) / parseValue(e.items[2]);
    throw Error("unexpected value " + e.str());
}

void readModel(const std::vector<SExpr>& items, const std::map<std::string, Var>& names, SolverAnswer& ans) {
    std::map<std::string, std::uint32_t> idElems;
    std::uint32_t nextId = 0;
    std::vector<std::pair<Var, std::string>> pendingId;
    for (const SExpr& d : items) {
        if (!d.isList || d.items.size() != 5 || !d.items[0].is("define-fun")) continue;
        const std::string& name = d.items[1].atom;
        if (!d.items[2].items.empty()) continue;
        std::string sym = name;
        if (sym.size() > 2 && sym.front() == '|') sym = sym.substr(1, sym.size() - 2);
        if (sym.rfind("c_v", 0) == 0 && d.items[4].isAtom()) {
            std::uint32_t k = static_cast<std::uint32_t>(std::stoul(sym.substr(3)));
            idElems[d.items[4].atom] = k;
            nextId = std::max(nextId, k + 1);
            continue;
        }
        auto it = names.find(sym);
        if (it == names.end()) continue;
        if (it->second->sort == Sort::Id) pendingId.emplace_back(it->second, d.items[4].str());
        else ans.model[it->second] = parseValue(d.items[4]);
    }
    for (auto& [v, elem] : pendingId) {
        auto it = idElems.find(elem);
        if (it == idElems.end()) it = idElems.emplace(elem, nextId++).first;
        ans.model[v] = Rational(it->second);
    }
}

}  // namespace

SolverAnswer query(const SolverConfig& cfg, const SolverQuery& q) {
    SolverAnswer ans;
    std::string bin = resolveSolver(cfg);
    if (bin.empty()) {
        ans.reason = "io: no solver binary";
        return ans;
    }
    unsigned ms = q.timeoutMs ? q.timeoutMs : cfg.timeoutMs;
    std::string script = smtLibScript(q);
    RunResult rr = runProcess(bin, {"-smt2", "-in", "-t:" + std::to_string(ms)}, script, ms + 500);
    if (cfg.keepTranscript) ans.transcript = script + ";; ----\n" + rr.out;
    if (rr.timedOut) {
        ans.reason = "timeout";
        return ans;
    }
    if (!rr.ok) {
        ans.reason = "io: " + rr.error;
        return ans;
    }
    std::vector<SExpr> resp;
    try {
        resp = parseSExprs(rr.out);
    } catch (const Error& e) {
        ans.reason = "io: malformed solver output";
        if (ans.transcript.empty()) ans.transcript = script + ";; ----\n" + rr.out;
        return ans;
    }
    if (resp.empty()) {
        ans.reason = "io: empty solver output";
        return ans;
    }
    if (resp[0].is("unsat")) {
        ans.status = SolverStatus::Unsat;
    } else if (resp[0].is("sat")) {
        ans.status = SolverStatus::Sat;
        if (q.wantModel && resp.size() > 1) {
            std::map<std::string, Var> names;
            for (Var v : freeVars(q.assertion)) names["v_" + v->display()] = v;
            auto& m = resp[1];
            std::vector<SExpr> defs = m.items;
            if (!defs.empty() && defs[0].is("model")) defs.erase(defs.begin());
            try {
                readModel(defs, names, ans);
            } catch (const std::exception&) {
                ans.model.clear();
            }
        }
    } else if (resp[0].is("unknown")) {
        ans.reason = "solver: unknown";
    } else {
        ans.reason = "io: " + resp[0].str();
    }
    return ans;
}

SolverAnswer checkSatExternal(const SolverConfig& cfg, Formula f, bool wantModel) {
    SolverQuery q;
    q.assertion = f;
    q.wantModel = wantModel;
    return query(cfg, q);
}

}  // namespace foalt
