#include <unistd.h>

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symlp/engine.hpp"
#include "symlp/metaint.hpp"
#include "symlp/prop.hpp"
#include "symlp/session.hpp"
#include "symlp/writer.hpp"

namespace {

using namespace symlp;

// 0: at least one answer / output produced; 1: finite failure;
// 2: usage or parse error; 3: engine error (depth limit, non-ground not,
// non-stratified program, unknown atom).
constexpr int kExitAnswer = 0;
constexpr int kExitNoAnswer = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEngine = 3;

struct Options {
    std::vector<std::string> files;
    std::vector<std::string> queries;
    bool lenient = false;
    bool trace = false;
    bool occurs_check = false;
    std::optional<std::uint32_t> depth_limit;
    std::string default_module = "true";
    std::string engine = "auto";  // auto | sld | prop
};

void print_diagnostics(const Session& session) {
    for (const auto& d : session.diagnostics()) std::cerr << d.to_string() << "\n";
}

SessionConfig session_config(const Options& opt) {
    SessionConfig cfg;
    cfg.parse_mode = opt.lenient ? ParseMode::lenient : ParseMode::strict;
    cfg.engine.depth_limit = opt.depth_limit;
    cfg.engine.occurs_check = opt.occurs_check;
    cfg.engine.trace = opt.trace;
    if (opt.trace)
        cfg.engine.trace_sink = [](const TraceEvent& ev) {
            std::cerr << render_trace(ev) << "\n";
        };
    cfg.default_module =
        opt.default_module == "false" ? Module::falsity : Module::truth;
    return cfg;
}

bool load_all(Session& session, const Options& opt) {
    for (const auto& f : opt.files) {
        const bool ok = session.load_file(f);
        print_diagnostics(session);
        if (!ok) return false;
    }
    return true;
}

std::string render_answer(const Answer& a) {
    std::string line;
    for (const auto& [name, value] : a.bindings) {
        if (name.starts_with("_")) continue;  // answer-suppressed
        if (!line.empty()) line += ", ";
        line += name;
        line += " = ";
        line += write_term(value, 999);
    }
    return line.empty() ? "true" : line;
}

// A query the model can answer directly: one ground, non-negated goal.
const BodyGoal* prop_routable(const Query& q) {
    if (q.alternatives.size() != 1 || q.alternatives[0].size() != 1) return nullptr;
    const BodyGoal& g = q.alternatives[0][0];
    if (g.naf || !is_ground(g.goal)) return nullptr;
    return &g;
}

int eval_query(Session& session, const std::string& text, const Options& opt,
               std::ostream& out) {
    Query query = make_query(text, session.config().default_module);

    bool use_prop = false;
    const BodyGoal* goal = prop_routable(query);
    if (opt.engine == "prop") {
        if (!goal) {
            std::cerr << "error: the model engine answers single ground goals only\n";
            return kExitEngine;
        }
        use_prop = true;
    } else if (opt.engine == "auto" && goal && session.propositional()) {
        use_prop = true;
    }

    if (use_prop) {
        try {
            const bool yes = entails(session.prop(), session.model(), goal->mod,
                                     write_term(goal->goal));
            out << (yes ? "true" : "false") << "\n";
            return yes ? kExitAnswer : kExitNoAnswer;
        } catch (const PropError& e) {
            if (opt.engine == "auto" &&
                e.kind() == PropErrorKind::non_stratified) {
                // fall back to resolution, which runs plain negation as failure
            } else {
                std::cerr << "error: " << e.what() << "\n";
                return kExitEngine;
            }
        }
    }

    const bool enumerate = std::any_of(
        query.vars.begin(), query.vars.end(),
        [](const auto& v) { return !v.first.starts_with("_"); });
    Solver solver(session.kb(), std::move(query), session.config().engine);
    std::vector<std::string> lines;
    for (auto answer = solver.next(); answer; answer = solver.next()) {
        lines.push_back(render_answer(*answer));
        if (opt.trace && answer->proof) std::cerr << explain(*answer);
        if (!enumerate) break;  // satisfiability query: first answer settles it
    }
    if (lines.empty()) {
        if (solver.depth_limited()) {
            std::cerr << "error: no answer within the depth limit; result unknown\n";
            return kExitEngine;
        }
        out << "false\n";
        return kExitNoAnswer;
    }
    if (!enumerate) {
        out << "true\n";
        return kExitAnswer;
    }
    for (std::size_t i = 0; i < lines.size(); ++i)
        out << lines[i] << (i + 1 < lines.size() ? " ;\n" : ".\n");
    return kExitAnswer;
}

int run_queries(Session& session, const std::vector<std::string>& queries,
                const Options& opt) {
    int worst = kExitAnswer;
    for (const auto& q : queries) {
        try {
            worst = std::max(worst, eval_query(session, q, opt, std::cout));
        } catch (const ParseError& e) {
            std::cerr << e.span().location() << ": error: " << e.what() << "\n";
            worst = std::max(worst, kExitUsage);
        } catch (const CompileError& e) {
            std::cerr << "error: " << e.what() << "\n";
            worst = std::max(worst, kExitUsage);
        } catch (const EngineError& e) {
            std::cerr << "error: " << e.what() << "\n";
            worst = std::max(worst, kExitEngine);
        }
    }
    return worst;
}

int cmd_model(Session& session) {
    try {
        const PropProgram& p = session.prop();
        const Model& m = session.model();
        for (Module mod : {Module::truth, Module::falsity}) {
            // atom texts are stored in written (re-quotable) form already
            std::vector<std::string> atoms;
            for (const auto id : m.atoms(mod)) atoms.push_back(p.atom_text(id));
            std::sort(atoms.begin(), atoms.end());
            for (const auto& a : atoms)
                std::cout << module_name(mod) << ":" << a << "\n";
        }
        return kExitAnswer;
    } catch (const PropError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEngine;
    }
}

int cmd_check(Session& session) {
    try {
        const PropProgram& p = session.prop();
        const Model& m = session.model();  // rejects non-stratified programs
        const auto violations = check_constraints(p, m);
        if (violations.empty()) {
            std::cout << "ok\n";
            return kExitAnswer;
        }
        for (const auto& v : violations)
            std::cout << "violation: " << (v.denial ? "denial " : "assertion ")
                      << v.rendered << "  [" << v.span.location() << "]\n";
        return kExitAnswer;
    } catch (const PropError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEngine;
    }
}

int cmd_oracle(Session& session, const std::vector<std::string>& queries,
               const Options& opt) {
    int worst = kExitAnswer;
    for (const auto& text : queries) {
        try {
            ParsedQuery parsed = parse_query_text(text);
            Module mod = session.config().default_module;
            TermPtr goal = parsed.goal;
            if (goal->is_functor(":", 2)) {
                auto m = module_from_name(goal->args()[0]->text());
                if (!m) throw ParseError("unknown module qualifier", {});
                mod = *m;
                goal = goal->args()[1];
            }
            if (!goal->is_callable())
                throw ParseError("the oracle answers single plain goals", {});

            const bool enumerate =
                std::any_of(parsed.vars.begin(), parsed.vars.end(),
                            [](const auto& v) { return !v.first.starts_with("_"); });
            MetaintSolver solver(to_diff_clauses(session.kb(), mod), {goal},
                                 parsed.vars, session.config().engine);
            std::vector<std::string> lines;
            for (auto a = solver.next(); a; a = solver.next()) {
                Answer view;
                view.bindings = a->bindings;
                lines.push_back(render_answer(view));
                if (!enumerate) break;
            }
            if (lines.empty()) {
                if (solver.depth_limited()) {
                    std::cerr << "error: no answer within the depth limit\n";
                    worst = std::max(worst, kExitEngine);
                    continue;
                }
                std::cout << "false\n";
                worst = std::max(worst, kExitNoAnswer);
                continue;
            }
            if (!enumerate) {
                std::cout << "true\n";
                continue;
            }
            for (std::size_t i = 0; i < lines.size(); ++i)
                std::cout << lines[i] << (i + 1 < lines.size() ? " ;\n" : ".\n");
        } catch (const ParseError& e) {
            std::cerr << "error: " << e.what() << "\n";
            worst = std::max(worst, kExitUsage);
        } catch (const MetaintError& e) {
            std::cerr << "error: " << e.what() << "\n";
            worst = std::max(worst, kExitEngine);
        } catch (const EngineError& e) {
            std::cerr << "error: " << e.what() << "\n";
            worst = std::max(worst, kExitEngine);
        }
    }
    return worst;
}

int cmd_repl(Session& session, const Options& opt) {
    const bool tty = isatty(fileno(stdin)) != 0;
    Options effective = opt;
    std::string line;
    for (;;) {
        if (tty) std::cout << "?- " << std::flush;
        if (!std::getline(std::cin, line)) break;
        const auto begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t");
        std::string text = line.substr(begin, end - begin + 1);

        if (text[0] == ':') {
            if (text == ":quit" || text == ":q") break;
            if (text == ":model") {
                cmd_model(session);
                continue;
            }
            if (text.starts_with(":load ")) {
                const std::string path = text.substr(6);
                session.load_file(path);
                print_diagnostics(session);
                continue;
            }
            if (text == ":trace on" || text == ":trace off") {
                const bool on = text.ends_with("on");
                effective.trace = on;
                session.config().engine.trace = on;
                session.config().engine.trace_sink =
                    on ? [](const TraceEvent& ev) {
                        std::cerr << render_trace(ev) << "\n";
                    }
                       : std::function<void(const TraceEvent&)>{};
                continue;
            }
            if (text == ":help") {
                std::cout << ":load FILE   load a program\n"
                             ":model       print the minimal model\n"
                             ":trace on|off\n"
                             ":quit\n";
                continue;
            }
            std::cerr << "unknown directive: " << text << "\n";
            continue;
        }
        run_queries(session, {text}, effective);
    }
    return kExitAnswer;
}

void add_common(CLI::App* cmd, Options& opt, bool with_queries) {
    cmd->add_option("files", opt.files, "program files (.symlp / .pro)")
        ->required()
        ->check(CLI::ExistingFile);
    if (with_queries)
        cmd->add_option("-q,--query", opt.queries, "query to evaluate")->required();
    cmd->add_flag("--lenient", opt.lenient, "recover from parse errors");
    auto* strict = cmd->add_flag_function(
        "--strict", [&opt](std::int64_t) { opt.lenient = false; },
        "abort on the first parse error (default)");
    strict->excludes("--lenient");
    cmd->add_flag("--trace", opt.trace, "emit resolution trace and proofs");
    cmd->add_option("--depth-limit", opt.depth_limit,
                    "resolution steps per derivation branch");
    cmd->add_flag("--occurs-check", opt.occurs_check,
                  "enable the occurs check in unification");
    cmd->add_option("--default-module", opt.default_module,
                    "module for unqualified goals")
        ->check(CLI::IsMember({"true", "false"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SymLP: logic programs over paired true/false modules"};
    app.require_subcommand(1);

    Options opt;
    CLI::App* run = app.add_subcommand("run", "evaluate queries against a program");
    add_common(run, opt, true);
    run->add_option("--engine", opt.engine, "auto | sld | prop")
        ->check(CLI::IsMember({"auto", "sld", "prop"}));
    CLI::App* repl = app.add_subcommand("repl", "interactive query loop");
    add_common(repl, opt, false);
    CLI::App* model = app.add_subcommand("model", "print the minimal model");
    add_common(model, opt, false);
    CLI::App* compile =
        app.add_subcommand("compile", "dump the compiled clause form");
    add_common(compile, opt, false);
    CLI::App* check =
        app.add_subcommand("check", "constraint and stratification report");
    add_common(check, opt, false);
    CLI::App* oracle =
        app.add_subcommand("oracle", "evaluate queries with the list interpreter");
    add_common(oracle, opt, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    Session session(session_config(opt));
    if (!load_all(session, opt))
        return kExitUsage;

    if (app.got_subcommand(run)) return run_queries(session, opt.queries, opt);
    if (app.got_subcommand(repl)) return cmd_repl(session, opt);
    if (app.got_subcommand(model)) return cmd_model(session);
    if (app.got_subcommand(compile)) {
        std::cout << write_compiled(session.kb());
        return kExitAnswer;
    }
    if (app.got_subcommand(check)) return cmd_check(session);
    if (app.got_subcommand(oracle)) return cmd_oracle(session, opt.queries, opt);
    return kExitUsage;
}
