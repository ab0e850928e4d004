#include "foalt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "foalt/emptiness.hpp"
#include "foalt/frontends.hpp"
#include "foalt/gen.hpp"
#include "foalt/sexpr.hpp"
#include "foalt/symbolic.hpp"

namespace foalt {

namespace {

using json = nlohmann::ordered_json;

enum class InputKind { Foaa, Timed, Register };

struct Input {
    InputKind kind = InputKind::Foaa;
    std::string path;
    Foaa foaa;
    TimedAutomaton timed;
    RegisterAutomaton reg;
};

InputKind sniff(const std::string& text) {
    auto es = parseSExprs(text);
    if (!es.empty() && es[0].isList && !es[0].items.empty()) {
        if (es[0].items[0].is("timed")) return InputKind::Timed;
        if (es[0].items[0].is("register")) return InputKind::Register;
    }
    return InputKind::Foaa;
}

Input load(const std::string& path) {
    std::string text = readFile(path);
    Input in;
    in.path = path;
    try {
        in.kind = sniff(text);
        switch (in.kind) {
            case InputKind::Timed:
                in.timed = parseTimed(text);
                in.foaa = fromTimed(in.timed);
                break;
            case InputKind::Register:
                in.reg = parseRegister(text);
                in.foaa = fromRegister(in.reg);
                break;
            case InputKind::Foaa:
                in.foaa = parseFoaa(text);
                break;
        }
    } catch (Error& e) {
        throw Error(path + ":" + e.what());
    }
    auto diags = validate(in.foaa);
    if (!diags.empty()) throw Error(path + ": " + diags.front().str());
    return in;
}

DataWord parseWordFor(const Input& in, const std::string& text) {
    switch (in.kind) {
        case InputKind::Timed: return toDataWord(parseTimedWord(text));
        case InputKind::Register: return toDataWord(parseIdWord(text));
        case InputKind::Foaa: break;
    }
    return parseDataWord(text, in.foaa);
}

void writeOut(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    f << text;
}

struct Settings {
    std::string solver;
    std::size_t maxNodes = 10000;
    double wallSeconds = 60;
    double solverTimeout = 2;
    std::string format = "text";
    std::string dumpUnfolding;
};

EmptinessOptions emptinessOptions(const Settings& s) {
    if (s.maxNodes == 0 || s.wallSeconds <= 0 || s.solverTimeout <= 0) throw Error("budgets must be positive");
    EmptinessOptions o;
    o.budget.maxNodes = s.maxNodes;
    o.budget.wallSeconds = s.wallSeconds;
    o.budget.solverTimeoutMs = static_cast<unsigned>(s.solverTimeout * 1000);
    o.solver.path = s.solver;
    return o;
}

int exitFor(VerdictKind k) {
    switch (k) {
        case VerdictKind::Empty: return 0;
        case VerdictKind::NonEmpty: return 1;
        case VerdictKind::Unknown: return 2;
    }
    return 2;
}

int report(const std::string& command, const Verdict& v, const Foaa& a, const Input* timedSource,
           const Settings& s, std::ostream& out) {
    if (!s.dumpUnfolding.empty()) writeOut(s.dumpUnfolding, v.unfolding.dump(), out);
    std::string witness = v.kind == VerdictKind::NonEmpty ? printDataWord(v.witness, a) : "";
    std::string timedWitness;
    if (v.kind == VerdictKind::NonEmpty && timedSource) timedWitness = printTimedWord(fromDataWord(v.witness));
    if (s.format == "json") {
        json j;
        j["command"] = command;
        j["verdict"] = verdictName(v.kind);
        j["witness"] = v.kind == VerdictKind::NonEmpty ? json(witness) : json(nullptr);
        if (!timedWitness.empty()) j["timed_witness"] = timedWitness;
        j["reason"] = v.reason;
        j["stats"] = {{"nodes_expanded", v.stats.nodesExpanded},
                      {"nodes_visited", v.stats.nodesVisited},
                      {"refinements", v.stats.refinements},
                      {"coverage_checks", v.stats.coverageChecks},
                      {"solver_queries", v.stats.solverQueries},
                      {"time_seconds", v.stats.seconds}};
        out << j.dump(2) << "\n";
    } else {
        out << "verdict: " << verdictName(v.kind) << "\n";
        if (v.kind == VerdictKind::NonEmpty) out << "witness: " << witness << "\n";
        if (!timedWitness.empty()) out << "timed witness: " << timedWitness << "\n";
        if (!v.reason.empty()) out << "reason: " << v.reason << "\n";
        out << "nodes expanded: " << v.stats.nodesExpanded << "\n"
            << "nodes visited: " << v.stats.nodesVisited << "\n"
            << "refinements: " << v.stats.refinements << "\n"
            << "coverage checks: " << v.stats.coverageChecks << "\n"
            << "solver queries: " << v.stats.solverQueries << "\n"
            << "time: " << v.stats.seconds << " s\n";
    }
    return exitFor(v.kind);
}

int printBool(const std::string& command, const char* key, bool b, const Settings& s, std::ostream& out,
              const std::vector<std::string>& details = {}) {
    if (s.format == "json") {
        json j;
        j["command"] = command;
        j[key] = b;
        if (!details.empty()) j["diagnostics"] = details;
        out << j.dump(2) << "\n";
    } else {
        out << key << ": " << (b ? "true" : "false") << "\n";
        for (auto& d : details) out << d << "\n";
    }
    return b ? 0 : 1;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"First-order alternating automata: emptiness, inclusion and membership", "foalt"};
    app.fallthrough();
    app.require_subcommand(1);
    Settings s;
    app.add_option("--solver", s.solver, "SMT-LIB 2 solver binary (default: $FOALT_SOLVER, then z3)");
    app.add_option("--max-nodes", s.maxNodes, "unfolding node budget")->capture_default_str();
    app.add_option("--time", s.wallSeconds, "wall-clock budget in seconds")->capture_default_str();
    app.add_option("--solver-timeout", s.solverTimeout, "per-query solver timeout in seconds")->capture_default_str();
    app.add_option("--format", s.format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("--dump-unfolding", s.dumpUnfolding, "write the final unfolding to this path");

    std::string file, rhs, word, outPath, from, kind = "foaa";
    std::vector<std::string> files;
    std::uint64_t seed = 1;

    auto* empty = app.add_subcommand("empty", "decide emptiness");
    empty->add_option("file", file)->required();
    auto* include = app.add_subcommand("include", "decide L(LHS1) ∩ ... ⊆ L(RHS)");
    include->add_option("lhs", files)->required();
    include->add_option("--rhs", rhs)->required();
    auto* mem = app.add_subcommand("member", "decide membership of a word");
    mem->add_option("file", file)->required();
    mem->add_option("--word", word)->required();
    auto* comp = app.add_subcommand("complement", "complement automaton");
    comp->add_option("file", file)->required();
    comp->add_option("-o", outPath);
    auto* inter = app.add_subcommand("intersect", "intersection automaton");
    inter->add_option("files", files)->required();
    inter->add_option("-o", outPath);
    auto* uni = app.add_subcommand("union", "union automaton");
    uni->add_option("files", files)->required();
    uni->add_option("-o", outPath);
    auto* trans = app.add_subcommand("translate", "translate a timed or register automaton");
    trans->add_option("--from", from)->required()->check(CLI::IsMember({"timed", "register"}));
    trans->add_option("file", file)->required();
    trans->add_option("-o", outPath);
    auto* val = app.add_subcommand("validate", "check well-formedness");
    val->add_option("file", file)->required();
    auto* gen = app.add_subcommand("gen", "print a random instance");
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--kind", kind)->check(CLI::IsMember({"foaa", "timed", "register"}))->capture_default_str();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "foalt: " << e.what() << "\n";
        return 3;
    }

    try {
        if (*empty) {
            Input in = load(file);
            Verdict v = checkEmptiness(in.foaa, emptinessOptions(s));
            return report("empty", v, in.foaa, in.kind == InputKind::Timed ? &in : nullptr, s, out);
        }
        if (*include) {
            std::vector<Foaa> lhs;
            bool timed = true;
            for (auto& f : files) {
                Input in = load(f);
                timed = timed && in.kind == InputKind::Timed;
                lhs.push_back(in.foaa);
            }
            Input r = load(rhs);
            timed = timed && r.kind == InputKind::Timed;
            Verdict v = inclusion(lhs, r.foaa, emptinessOptions(s));
            return report("include", v, r.foaa, timed ? &r : nullptr, s, out);
        }
        if (*mem) {
            Input in = load(file);
            DataWord w = parseWordFor(in, word);
            return printBool("member", "accepted", member(in.foaa, w), s, out);
        }
        if (*comp) {
            writeOut(outPath, printFoaa(complement(load(file).foaa)), out);
            return 0;
        }
        if (*inter || *uni) {
            if (files.size() < 2) throw Error("at least two automata are needed");
            Foaa acc = load(files[0]).foaa;
            for (std::size_t i = 1; i < files.size(); ++i) {
                Foaa next = load(files[i]).foaa;
                acc = *inter ? intersect(acc, next) : unite(acc, next);
            }
            writeOut(outPath, printFoaa(acc), out);
            return 0;
        }
        if (*trans) {
            std::string text = readFile(file);
            Foaa a;
            try {
                a = from == "timed" ? fromTimed(parseTimed(text)) : fromRegister(parseRegister(text));
            } catch (Error& e) {
                throw Error(file + ":" + e.what());
            }
            writeOut(outPath, printFoaa(a), out);
            return 0;
        }
        if (*val) {
            std::string text = readFile(file);
            std::vector<std::string> msgs;
            try {
                InputKind k = sniff(text);
                Foaa a = k == InputKind::Timed      ? fromTimed(parseTimed(text))
                         : k == InputKind::Register ? fromRegister(parseRegister(text))
                                                    : parseFoaa(text);
                for (auto& d : validate(a)) msgs.push_back(d.str());
            } catch (ParseError& e) {
                msgs.push_back(e.what());
            }
            return printBool("validate", "valid", msgs.empty(), s, out, msgs);
        }
        if (*gen) {
            Rng rng(seed);
            if (kind == "timed") out << printTimed(randomTimed(rng));
            else if (kind == "register") out << printRegister(randomRegister(rng));
            else out << printFoaa(randomEqAutomaton(rng));
            return 0;
        }
    } catch (std::exception& e) {
        err << "foalt: " << e.what() << "\n";
        return 3;
    }
    return 3;
}

}  // namespace foalt
