#include "symlp/engine.hpp"

#include <algorithm>
#include <cassert>

#include "symlp/writer.hpp"

namespace symlp {

namespace {

struct EngineGoal {
    enum class Kind : std::uint8_t { call, naf, exit_note };
    Kind kind;
    Module mod;
    TermPtr term;
    std::uint32_t depth;
    const CompiledClause* clause = nullptr;  // exit_note: the resolving clause
};

struct GoalNode {
    EngineGoal goal;
    std::shared_ptr<const GoalNode> next;
};
using GoalList = std::shared_ptr<const GoalNode>;

GoalList cons(EngineGoal g, GoalList next) {
    return std::make_shared<const GoalNode>(GoalNode{std::move(g), std::move(next)});
}

struct JournalRec {
    std::uint32_t depth;
    Module mod;
    bool naf;
    TermPtr goal;
    const CompiledClause* clause;
};

struct ChoicePoint {
    GoalList pending;  // resolvent whose head is the goal being retried
    std::size_t next_clause;
    const std::vector<std::size_t>* ids;
    Bindings::Checkpoint trail;
    std::size_t journal_len;
    bool produced = false;
};

}  // namespace

struct Solver::Impl {
    const KnowledgeBase& kb;
    Query query;
    EngineConfig cfg;
    Bindings bindings;

    std::vector<ChoicePoint> cps;
    GoalList current;
    std::vector<JournalRec> journal;
    std::size_t step = 0;
    std::size_t alt = 0;
    Bindings::Checkpoint base;
    bool truncated = false;
    bool started = false;
    bool finished = false;

    Impl(const KnowledgeBase& kb_in, Query q, EngineConfig c)
        : kb(kb_in), query(std::move(q)), cfg(std::move(c)),
          bindings(std::max(kb_in.var_ceiling(), query.next_var)) {
        base = bindings.mark();
    }

    void emit(Port port, Module mod, bool naf, const TermPtr& goal,
              const SourceSpan* clause_span) {
        if (!cfg.trace_sink) return;
        TraceEvent ev;
        ev.step = ++step;
        ev.port = port;
        ev.mod = mod;
        ev.naf = naf;
        ev.goal = symlp::apply(bindings, goal);
        if (clause_span) ev.clause = *clause_span;
        cfg.trace_sink(ev);
    }

    bool seed(std::size_t index) {
        if (index >= query.alternatives.size()) return false;
        bindings.undo_to(base);
        cps.clear();
        journal.clear();
        current = nullptr;
        const auto& goals = query.alternatives[index];
        for (std::size_t i = goals.size(); i-- > 0;) {
            const BodyGoal& g = goals[i];
            current = cons({g.naf ? EngineGoal::Kind::naf : EngineGoal::Kind::call,
                            g.mod, g.goal, 0},
                           current);
        }
        return true;
    }

    // Resume the deepest choice point that still has a clause to try.
    bool backtrack() {
        while (!cps.empty()) {
            ChoicePoint& cp = cps.back();
            bindings.undo_to(cp.trail);
            journal.resize(cp.journal_len);
            const EngineGoal& g = cp.pending->goal;
            if (cp.produced) emit(Port::redo, g.mod, false, g.term, nullptr);
            if (resolve_from(cp)) return true;
            emit(Port::fail, g.mod, false, g.term, nullptr);
            cps.pop_back();
        }
        return false;
    }

    // Exhausted the current query alternative; move to the next.
    bool advance() {
        if (backtrack()) return true;
        return seed(++alt);
    }

    bool resolve_from(ChoicePoint& cp) {
        const EngineGoal g = cp.pending->goal;
        const TermPtr goal = deref(bindings, g.term);
        const auto& master = kb.clauses(g.mod);
        while (cp.next_clause < cp.ids->size()) {
            const CompiledClause& clause = master[(*cp.ids)[cp.next_clause++]];

            std::vector<TermPtr> roots;
            roots.reserve(1 + clause.body.size());
            roots.push_back(clause.head);
            for (const auto& b : clause.body) roots.push_back(b.goal);
            std::vector<TermPtr> fresh = rename_apart(roots, bindings);

            if (!unify(goal, fresh[0], bindings, cfg.occurs_check)) {
                bindings.undo_to(cp.trail);
                continue;
            }
            cp.produced = true;
            if (cfg.trace)
                journal.push_back({g.depth, g.mod, false, g.term, &clause});

            GoalList rest = cons({EngineGoal::Kind::exit_note, g.mod, g.term,
                                  g.depth, &clause},
                                 cp.pending->next);
            for (std::size_t i = clause.body.size(); i-- > 0;) {
                const BodyGoal& b = clause.body[i];
                rest = cons({b.naf ? EngineGoal::Kind::naf : EngineGoal::Kind::call,
                             b.mod, fresh[1 + i], g.depth + 1},
                            rest);
            }
            current = rest;
            return true;
        }
        return false;
    }

    // not(m:G): G must be ground here; a failed sub-search that was cut off
    // by the depth limit must not be read as failure.
    bool eval_naf(const EngineGoal& g) {
        TermPtr goal = symlp::apply(bindings, g.term);
        if (!is_ground(goal))
            throw EngineError(EngineErrorKind::non_ground_naf,
                              "not(" + std::string(module_name(g.mod)) + ":" +
                                  write_term(goal, 199) +
                                  "): goal has unbound variables");
        if (!goal->is_callable())
            throw EngineError(EngineErrorKind::not_callable,
                              "negated goal is not callable: " + write_term(goal));
        emit(Port::call, g.mod, true, goal, nullptr);

        EngineConfig sub_cfg;
        sub_cfg.depth_limit = cfg.depth_limit;
        sub_cfg.occurs_check = cfg.occurs_check;
        Solver sub(kb, make_goal_query(g.mod, goal), std::move(sub_cfg));
        if (sub.next()) {
            emit(Port::fail, g.mod, true, goal, nullptr);
            return false;
        }
        if (sub.depth_limited())
            throw EngineError(EngineErrorKind::depth_limit_exceeded,
                              "not(" + std::string(module_name(g.mod)) + ":" +
                                  write_term(goal, 199) +
                                  "): search truncated by the depth limit");
        emit(Port::exit, g.mod, true, goal, nullptr);
        if (cfg.trace) journal.push_back({g.depth, g.mod, true, goal, nullptr});
        return true;
    }

    Answer make_answer() {
        Answer a;
        a.bindings.reserve(query.vars.size());
        for (const auto& [name, var] : query.vars)
            a.bindings.emplace_back(name, symlp::apply(bindings, var));
        if (cfg.trace) a.proof = build_proof();
        return a;
    }

    std::shared_ptr<const ProofNode> build_proof() {
        std::size_t idx = 0;
        auto nodes_at = [&](auto&& self, std::uint32_t depth) -> std::vector<ProofNode> {
            std::vector<ProofNode> out;
            while (idx < journal.size() && journal[idx].depth == depth) {
                const JournalRec& rec = journal[idx++];
                ProofNode node;
                node.mod = rec.mod;
                node.naf = rec.naf;
                node.goal = symlp::apply(bindings, rec.goal);
                if (rec.clause) node.clause = rec.clause->span;
                node.children = self(self, depth + 1);
                out.push_back(std::move(node));
            }
            return out;
        };
        std::vector<ProofNode> roots = nodes_at(nodes_at, 0);
        auto root = std::make_shared<ProofNode>();
        if (roots.size() == 1) {
            *root = std::move(roots.front());
        } else {
            root->goal = nullptr;  // synthetic root: children are the conjuncts
            root->children = std::move(roots);
        }
        return root;
    }

    std::optional<Answer> run() {
        for (;;) {
            if (!current) {
                Answer a = make_answer();
                return a;
            }
            const GoalList pre = current;
            const EngineGoal g = current->goal;
            current = current->next;

            if (g.kind == EngineGoal::Kind::exit_note) {
                emit(Port::exit, g.mod, false, g.term,
                     g.clause ? &g.clause->span : nullptr);
                continue;
            }
            if (g.kind == EngineGoal::Kind::naf) {
                if (!eval_naf(g)) {
                    if (!advance()) return std::nullopt;
                }
                continue;
            }

            // plain call
            const TermPtr goal = deref(bindings, g.term);
            if (goal->is_var())
                throw EngineError(EngineErrorKind::unbound_goal,
                                  "unbound variable used as a goal");
            if (goal->is_number())
                throw EngineError(EngineErrorKind::not_callable,
                                  "number used as a goal: " + write_term(goal));

            if (goal->is_atom() &&
                (goal->text() == "true" || goal->text() == "false")) {
                const bool vacuous = (g.mod == Module::truth) ==
                                     (goal->text() == "true");
                emit(Port::call, g.mod, false, goal, nullptr);
                if (vacuous) {
                    emit(Port::exit, g.mod, false, goal, nullptr);
                    continue;
                }
                emit(Port::fail, g.mod, false, goal, nullptr);
                if (!advance()) return std::nullopt;
                continue;
            }

            if (cfg.depth_limit && g.depth >= *cfg.depth_limit) {
                truncated = true;
                emit(Port::call, g.mod, false, goal, nullptr);
                emit(Port::fail, g.mod, false, goal, nullptr);
                if (!advance()) return std::nullopt;
                continue;
            }

            emit(Port::call, g.mod, false, goal, nullptr);
            const auto* ids = kb.lookup(g.mod, goal->text(), goal->arity());
            if (!ids || ids->empty()) {
                emit(Port::fail, g.mod, false, goal, nullptr);
                if (!advance()) return std::nullopt;
                continue;
            }
            cps.push_back(
                {pre, 0, ids, bindings.mark(), journal.size(), false});
            if (!resolve_from(cps.back())) {
                emit(Port::fail, g.mod, false, goal, nullptr);
                cps.pop_back();
                if (!advance()) return std::nullopt;
            }
        }
    }

    std::optional<Answer> next() {
        if (finished) return std::nullopt;
        if (!started) {
            started = true;
            if (!seed(alt)) {
                finished = true;
                return std::nullopt;
            }
        } else if (!advance()) {
            finished = true;
            return std::nullopt;
        }
        auto answer = run();
        if (!answer) finished = true;
        return answer;
    }
};

Solver::Solver(const KnowledgeBase& kb, Query query, EngineConfig config)
    : impl_(std::make_unique<Impl>(kb, std::move(query), std::move(config))) {}

Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;

std::optional<Answer> Solver::next() { return impl_->next(); }
bool Solver::depth_limited() const { return impl_->truncated; }

Query make_query(std::string_view text, Module default_module) {
    ParsedQuery parsed = parse_query_text(text);
    FlattenOptions opts;
    opts.default_module = default_module;
    Query q;
    q.alternatives = flatten_goal(parsed.goal, opts);
    q.vars = std::move(parsed.vars);
    q.next_var = parsed.next_var;
    return q;
}

Query make_goal_query(Module m, const TermPtr& goal) {
    Query q;
    q.alternatives = {{BodyGoal{m, goal, false}}};
    q.next_var = max_var_id(goal) + 1;
    return q;
}

namespace {

bool naf_probe(const KnowledgeBase& kb, Module m, const TermPtr& goal,
               const EngineConfig& config) {
    if (!is_ground(goal))
        throw EngineError(EngineErrorKind::non_ground_naf,
                          "goal must be ground: " + write_term(goal));
    EngineConfig cfg;
    cfg.depth_limit = config.depth_limit;
    cfg.occurs_check = config.occurs_check;
    Solver s(kb, make_goal_query(m, goal), std::move(cfg));
    if (s.next()) return false;
    if (s.depth_limited())
        throw EngineError(EngineErrorKind::depth_limit_exceeded,
                          "search truncated by the depth limit: " + write_term(goal));
    return true;
}

}  // namespace

bool unverifiable(const KnowledgeBase& kb, const TermPtr& goal,
                  const EngineConfig& config) {
    return naf_probe(kb, Module::truth, goal, config);
}

bool unfalsifiable(const KnowledgeBase& kb, const TermPtr& goal,
                   const EngineConfig& config) {
    return naf_probe(kb, Module::falsity, goal, config);
}

namespace {

void render_proof(const ProofNode& node, int depth, std::string& out) {
    if (node.goal) {
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
        if (node.naf) out += "not ";
        out += module_name(node.mod);
        out += ':';
        out += write_term(node.goal, 199);
        if (node.clause.known()) {
            out += "  [";
            out += node.clause.location();
            out += ']';
        }
        out += '\n';
        ++depth;
    }
    for (const auto& child : node.children) render_proof(child, depth, out);
}

}  // namespace

std::string explain(const Answer& answer) {
    if (!answer.proof)
        throw EngineError(EngineErrorKind::trace_unavailable,
                          "answer carries no proof; run with trace enabled");
    std::string out;
    render_proof(*answer.proof, 0, out);
    return out;
}

std::string render_trace(const TraceEvent& ev) {
    static const char* const ports[] = {"call", "exit", "fail", "redo"};
    std::string out = std::to_string(ev.step);
    out += ' ';
    out += ports[static_cast<int>(ev.port)];
    out += ' ';
    if (ev.naf) out += "not ";
    out += module_name(ev.mod);
    out += ':';
    out += write_term(ev.goal, 199);
    if (ev.clause.known()) {
        out += "  [";
        out += ev.clause.location();
        out += ']';
    }
    return out;
}

}  // namespace symlp
