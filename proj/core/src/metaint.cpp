#include "symlp/metaint.hpp"

#include <algorithm>
#include <array>

#include "symlp/writer.hpp"

namespace symlp {

namespace {

TermPtr cons(TermPtr head, TermPtr tail) {
    return Term::make_compound(".", {std::move(head), std::move(tail)});
}

const TermPtr& nil() {
    static const TermPtr n = Term::make_atom("[]");
    return n;
}

}  // namespace

std::vector<DiffClause> to_diff_clauses(const KnowledgeBase& kb, Module m) {
    std::vector<DiffClause> out;
    VarId next_tail = kb.var_ceiling();
    for (const auto& clause : kb.clauses(m)) {
        for (const auto& g : clause.body) {
            if (g.naf)
                throw MetaintError(MetaintErrorKind::naf_goal,
                                   "the list interpreter covers negation-free "
                                   "programs only",
                                   clause.span);
            if (g.mod != m)
                throw MetaintError(MetaintErrorKind::cross_module_call,
                                   "the list interpreter covers single-module "
                                   "programs only; clause calls " +
                                       std::string(module_name(g.mod)) + ":" +
                                       write_term(g.goal, 199),
                                   clause.span);
        }
        DiffClause d;
        d.span = clause.span;
        d.tail = Term::make_var(next_tail++, "Tail");
        TermPtr list = d.tail;
        for (std::size_t i = clause.body.size(); i-- > 0;)
            list = cons(clause.body[i].goal, list);
        d.open_list = cons(clause.head, std::move(list));
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

struct ChoicePoint {
    TermPtr goals;
    std::size_t next_clause;
    Bindings::Checkpoint trail;
    std::uint32_t depth;
};

}  // namespace

struct MetaintSolver::Impl {
    std::vector<DiffClause> clauses;
    std::vector<TermPtr> initial_goals;
    std::vector<std::pair<std::string, TermPtr>> vars;
    EngineConfig cfg;
    Bindings bindings;

    std::vector<ChoicePoint> cps;
    TermPtr current;
    std::uint32_t depth = 0;
    bool truncated = false;
    bool started = false;
    bool finished = false;

    static VarId start_id(const std::vector<DiffClause>& cs,
                          const std::vector<TermPtr>& goals,
                          const std::vector<std::pair<std::string, TermPtr>>& vs) {
        VarId top = 0;
        for (const auto& c : cs) top = std::max(top, max_var_id(c.open_list) + 1);
        for (const auto& g : goals) top = std::max(top, max_var_id(g) + 1);
        for (const auto& [name, v] : vs) top = std::max(top, v->var_id() + 1);
        return top;
    }

    Impl(std::vector<DiffClause> cs, std::vector<TermPtr> goals,
         std::vector<std::pair<std::string, TermPtr>> vs, EngineConfig c)
        : clauses(std::move(cs)), initial_goals(std::move(goals)),
          vars(std::move(vs)), cfg(std::move(c)),
          bindings(start_id(clauses, initial_goals, vars)) {}

    bool resolve_from(ChoicePoint& cp) {
        TermPtr goals = deref(bindings, cp.goals);
        // goals is [G|Gs] here
        const TermPtr& first = goals->args()[0];
        const TermPtr& rest = goals->args()[1];
        while (cp.next_clause < clauses.size()) {
            const DiffClause& clause = clauses[cp.next_clause++];
            std::array<TermPtr, 2> pair{clause.open_list, clause.tail};
            std::vector<TermPtr> fresh =
                rename_apart(std::span<const TermPtr>(pair), bindings);
            // cls([G|Bs], Gs): select a clause whose head matches G and
            // splice its body before the remaining goals via the open tail.
            TermPtr body_var = bindings.fresh_var("_Bs");
            if (unify(cons(first, body_var), fresh[0], bindings, cfg.occurs_check) &&
                unify(rest, fresh[1], bindings, cfg.occurs_check)) {
                current = body_var;
                depth = cp.depth + 1;
                return true;
            }
            bindings.undo_to(cp.trail);
        }
        return false;
    }

    bool backtrack() {
        while (!cps.empty()) {
            ChoicePoint& cp = cps.back();
            bindings.undo_to(cp.trail);
            if (resolve_from(cp)) return true;
            cps.pop_back();
        }
        return false;
    }

    std::optional<MetaintAnswer> run() {
        for (;;) {
            TermPtr goals = deref(bindings, current);
            if (goals->is_atom_named("[]")) {
                MetaintAnswer a;
                for (const auto& [name, v] : vars)
                    a.bindings.emplace_back(name, symlp::apply(bindings, v));
                return a;
            }
            // goal lists are built closed, so this is always a cons cell
            if (!goals->is_functor(".", 2))
                throw std::logic_error("metaint: malformed goal list");
            if (cfg.depth_limit && depth >= *cfg.depth_limit) {
                truncated = true;
                if (!backtrack()) return std::nullopt;
                continue;
            }
            cps.push_back({goals, 0, bindings.mark(), depth});
            if (!resolve_from(cps.back())) {
                cps.pop_back();
                if (!backtrack()) return std::nullopt;
            }
        }
    }

    std::optional<MetaintAnswer> next() {
        if (finished) return std::nullopt;
        if (!started) {
            started = true;
            TermPtr list = nil();
            for (std::size_t i = initial_goals.size(); i-- > 0;)
                list = cons(initial_goals[i], list);
            current = list;
            depth = 0;
        } else if (!backtrack()) {
            finished = true;
            return std::nullopt;
        }
        auto answer = run();
        if (!answer) finished = true;
        return answer;
    }
};

MetaintSolver::MetaintSolver(std::vector<DiffClause> clauses,
                             std::vector<TermPtr> goals,
                             std::vector<std::pair<std::string, TermPtr>> vars,
                             EngineConfig config)
    : impl_(std::make_unique<Impl>(std::move(clauses), std::move(goals),
                                   std::move(vars), std::move(config))) {}

MetaintSolver::~MetaintSolver() = default;
MetaintSolver::MetaintSolver(MetaintSolver&&) noexcept = default;

std::optional<MetaintAnswer> MetaintSolver::next() { return impl_->next(); }
bool MetaintSolver::depth_limited() const { return impl_->truncated; }

bool metaint_proves(const KnowledgeBase& kb, Module m, const TermPtr& goal,
                    const EngineConfig& config) {
    MetaintSolver s(to_diff_clauses(kb, m), {goal}, {}, config);
    if (s.next()) return true;
    if (s.depth_limited())
        throw EngineError(EngineErrorKind::depth_limit_exceeded,
                          "list interpreter search truncated by the depth limit");
    return false;
}

}  // namespace symlp
