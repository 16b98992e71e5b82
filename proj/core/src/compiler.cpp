#include "symlp/compiler.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "symlp/writer.hpp"

namespace symlp {

std::optional<Module> module_from_name(std::string_view name) {
    if (name == "true") return Module::truth;
    if (name == "false") return Module::falsity;
    return std::nullopt;
}

void KnowledgeBase::add(Module m, CompiledClause clause) {
    var_ceiling_ = std::max(var_ceiling_, max_var_id(clause.head) + 1);
    for (const auto& g : clause.body)
        var_ceiling_ = std::max(var_ceiling_, max_var_id(g.goal) + 1);
    Store& s = store(m);
    const std::size_t idx = s.clauses.size();
    s.index[Key{clause.head->text(), clause.head->arity()}].push_back(idx);
    s.clauses.push_back(std::move(clause));
}

const std::vector<std::size_t>* KnowledgeBase::lookup(Module m, std::string_view functor,
                                                      std::size_t arity) const {
    const Store& s = store(m);
    auto it = s.index.find(Key{std::string(functor), arity});
    return it == s.index.end() ? nullptr : &it->second;
}

TermPtr dualize(const TermPtr& body) {
    if (body->is_functor(",", 2) || body->is_functor(";", 2)) {
        const std::string swapped = body->text() == "," ? ";" : ",";
        return Term::make_compound(
            swapped, {dualize(body->args()[0]), dualize(body->args()[1])});
    }
    return body;
}

namespace {

[[noreturn]] void goal_error(CompileErrorKind kind, const std::string& msg) {
    throw CompileError(kind, msg);
}

// One leaf of a body after module resolution.
struct Leaf {
    enum class Kind : std::uint8_t { goal, vacuous, impossible };
    Kind kind = Kind::goal;
    BodyGoal goal;
};

void check_callable(const TermPtr& t, const char* what) {
    if (t->is_var())
        goal_error(CompileErrorKind::invalid_goal,
                   std::string("variable used as ") + what);
    if (t->is_number())
        goal_error(CompileErrorKind::invalid_goal,
                   std::string("number used as ") + what);
    if (t->is_compound() &&
        (t->text() == "," || t->text() == ";" || t->text() == ":" ||
         t->text() == "=>" || t->text() == "<=" || t->text() == "not"))
        goal_error(CompileErrorKind::invalid_goal,
                   "'" + t->text() + "' term used as " + what);
}

Leaf classify_leaf(const TermPtr& t, const FlattenOptions& opts) {
    Module mod = opts.default_module;
    TermPtr goal = t;
    bool naf = false;

    // unverifiable/unfalsifiable are shorthand for not(true:G) / not(false:G)
    if (goal->is_functor("unverifiable", 1) || goal->is_functor("unfalsifiable", 1)) {
        if (!opts.allow_naf)
            goal_error(CompileErrorKind::naf_in_dual_body,
                       "'" + goal->text() + "' is negation as failure and cannot "
                       "occur in a dual clause body");
        naf = true;
        mod = goal->text() == "unverifiable" ? Module::truth : Module::falsity;
        goal = goal->args()[0];
        if (goal->is_functor(":", 2))
            goal_error(CompileErrorKind::invalid_goal,
                       "module-qualified goal inside unverifiable/unfalsifiable");
    } else if (goal->is_functor("not", 1)) {
        if (!opts.allow_naf)
            goal_error(CompileErrorKind::naf_in_dual_body,
                       "'not' cannot occur in a dual clause body");
        naf = true;
        goal = goal->args()[0];
        if (goal->is_functor(":", 2)) {
            const TermPtr& q = goal->args()[0];
            auto m = q->is_atom() ? module_from_name(q->text()) : std::nullopt;
            if (!m)
                goal_error(CompileErrorKind::unknown_module,
                           "unknown module qualifier '" + write_term(q) + "'");
            mod = *m;
            goal = goal->args()[1];
        }
        if (goal->is_functor("not", 1) || goal->is_functor("unverifiable", 1) ||
            goal->is_functor("unfalsifiable", 1))
            goal_error(CompileErrorKind::invalid_goal, "nested negation is not supported");
    }

    if (goal->is_functor(":", 2)) {
        if (!opts.allow_qualified)
            goal_error(CompileErrorKind::qualified_goal_in_dual_body,
                       "module-qualified goal in a dual clause body");
        const TermPtr& q = goal->args()[0];
        auto m = q->is_atom() ? module_from_name(q->text()) : std::nullopt;
        if (!m)
            goal_error(CompileErrorKind::unknown_module,
                       "unknown module qualifier '" + write_term(q) + "'");
        mod = *m;
        goal = goal->args()[1];
        if (goal->is_functor(":", 2))
            goal_error(CompileErrorKind::invalid_goal, "nested module qualification");
        if (goal->is_functor("not", 1))
            goal_error(CompileErrorKind::invalid_goal,
                       "negation must wrap the qualified goal: not(" +
                           write_term(goal->args()[0], 199) + ")");
    }

    // A variable under negation is resolved at run time (and must be bound
    // by then); a bare variable as a positive goal is a meta-call, which the
    // language does not have.
    if (!(naf && goal->is_var()))
        check_callable(goal, naf ? "a negated goal" : "a goal");

    // Reserved atoms: 'true' is vacuous on the truth side and unprovable on
    // the falsity side; 'false' is the mirror image.
    if (goal->is_atom()) {
        const bool t_atom = goal->text() == "true";
        const bool f_atom = goal->text() == "false";
        if (t_atom || f_atom) {
            const bool vacuous = (mod == Module::truth) == t_atom;
            Leaf leaf;
            if (naf)  // not(vacuous) is impossible and vice versa
                leaf.kind = vacuous ? Leaf::Kind::impossible : Leaf::Kind::vacuous;
            else
                leaf.kind = vacuous ? Leaf::Kind::vacuous : Leaf::Kind::impossible;
            return leaf;
        }
    }

    return Leaf{Leaf::Kind::goal, BodyGoal{mod, goal, naf}};
}

void flatten_rec(const TermPtr& tree, const FlattenOptions& opts,
                 std::vector<std::vector<BodyGoal>>& out) {
    if (tree->is_functor(";", 2)) {
        flatten_rec(tree->args()[0], opts, out);
        flatten_rec(tree->args()[1], opts, out);
        return;
    }
    if (tree->is_functor(",", 2)) {
        std::vector<std::vector<BodyGoal>> left;
        std::vector<std::vector<BodyGoal>> right;
        flatten_rec(tree->args()[0], opts, left);
        flatten_rec(tree->args()[1], opts, right);
        for (const auto& l : left)
            for (const auto& r : right) {
                std::vector<BodyGoal> joined = l;
                joined.insert(joined.end(), r.begin(), r.end());
                out.push_back(std::move(joined));
            }
        return;
    }
    Leaf leaf = classify_leaf(tree, opts);
    switch (leaf.kind) {
        case Leaf::Kind::vacuous:
            out.push_back({});
            return;
        case Leaf::Kind::impossible:
            return;  // no alternative
        case Leaf::Kind::goal:
            out.push_back({std::move(leaf.goal)});
            return;
    }
}

}  // namespace

std::vector<std::vector<BodyGoal>> flatten_goal(const TermPtr& tree,
                                                const FlattenOptions& opts) {
    std::vector<std::vector<BodyGoal>> out;
    flatten_rec(tree, opts, out);
    return out;
}

namespace {

void validate_compiled_head(const TermPtr& head, const SourceSpan& span) {
    if (!head)
        throw CompileError(CompileErrorKind::invalid_head, "clause has no head", span);
    if (head->is_var())
        throw CompileError(CompileErrorKind::variable_head,
                           "clause head is a variable", span);
    if (!head->is_callable())
        throw CompileError(CompileErrorKind::invalid_head,
                           "clause head must be an atom or compound term", span);
    const std::string& f = head->text();
    if (f == "," || f == ";" || f == ":" || f == "=>" || f == "<=" ||
        f == "not" || f == "true" || f == "false")
        throw CompileError(CompileErrorKind::invalid_head,
                           "reserved name '" + f + "' cannot head a clause", span);
}

void validate_constraint_tree(const TermPtr& tree, const SourceSpan& span) {
    if (tree->is_functor(",", 2) || tree->is_functor(";", 2)) {
        validate_constraint_tree(tree->args()[0], span);
        validate_constraint_tree(tree->args()[1], span);
        return;
    }
    if (tree->is_functor("not", 1) || tree->is_functor(":", 2))
        throw CompileError(CompileErrorKind::invalid_goal,
                           "constraints are declarative: only plain atoms may occur",
                           span);
    if (!tree->is_callable())
        throw CompileError(CompileErrorKind::invalid_goal,
                           "constraint atoms must be atoms or compound terms", span);
}

std::vector<CompiledClause> clauses_from_alternatives(
    const TermPtr& head, std::vector<std::vector<BodyGoal>> alts,
    const SourceSpan& span) {
    std::vector<CompiledClause> out;
    out.reserve(alts.size());
    for (auto& alt : alts) out.push_back({head, std::move(alt), span});
    return out;
}

}  // namespace

ClauseCompilation compile_clause(const SourceClause& c) {
    ClauseCompilation result;
    try {
        switch (c.kind) {
            case ClauseKind::positive_fact:
                validate_compiled_head(c.head, c.span);
                result.mod = Module::truth;
                result.clauses.push_back({c.head, {}, c.span});
                return result;
            case ClauseKind::negative_fact:
                validate_compiled_head(c.head, c.span);
                result.mod = Module::falsity;
                result.clauses.push_back({c.head, {}, c.span});
                return result;
            case ClauseKind::horn_rule: {
                validate_compiled_head(c.head, c.span);
                result.mod = Module::truth;
                FlattenOptions opts;
                opts.default_module = Module::truth;
                result.clauses = clauses_from_alternatives(
                    c.head, flatten_goal(c.body, opts), c.span);
                return result;
            }
            case ClauseKind::dual_rule: {
                validate_compiled_head(c.head, c.span);
                result.mod = Module::falsity;
                FlattenOptions opts;
                opts.default_module = Module::falsity;
                opts.allow_naf = false;
                opts.allow_qualified = false;
                result.clauses = clauses_from_alternatives(
                    c.head, flatten_goal(dualize(c.body), opts), c.span);
                return result;
            }
            case ClauseKind::denial:
                validate_constraint_tree(c.body, c.span);
                result.kind = ClauseCompilation::Kind::denial;
                result.constraint = Constraint{c.body, c.span};
                return result;
            case ClauseKind::dual_assertion:
                validate_constraint_tree(c.body, c.span);
                result.kind = ClauseCompilation::Kind::dual_assertion;
                result.constraint = Constraint{c.body, c.span};
                return result;
        }
    } catch (const CompileError& e) {
        if (e.span().known()) throw;
        throw CompileError(e.kind(), e.what(), c.span);
    }
    throw CompileError(CompileErrorKind::invalid_head, "unreachable", c.span);
}

namespace {

// Safety: every variable of a negated goal must be bound by the head or an
// earlier positive goal, or the negation may be reached non-ground.
void check_naf_safety(const CompiledClause& clause,
                      std::vector<Diagnostic>& diags) {
    std::unordered_set<VarId> seen;
    for (const auto& v : collect_vars(clause.head)) seen.insert(v->var_id());
    for (const auto& g : clause.body) {
        if (g.naf) {
            for (const auto& v : collect_vars(g.goal)) {
                if (!seen.count(v->var_id())) {
                    diags.push_back(
                        {Diagnostic::Severity::warning,
                         "variable " + v->text() +
                             " is not bound before not(...); the clause is unsafe",
                         clause.span});
                    break;
                }
            }
        } else {
            for (const auto& v : collect_vars(g.goal)) seen.insert(v->var_id());
        }
    }
}

}  // namespace

CompileResult compile_program(const std::vector<SourceClause>& clauses) {
    CompileResult res;
    std::unordered_map<std::string, SourceSpan> truth_facts;
    std::unordered_map<std::string, SourceSpan> falsity_facts;

    for (const auto& c : clauses) {
        ClauseCompilation one;
        try {
            one = compile_clause(c);
        } catch (const CompileError& e) {
            res.diagnostics.push_back(
                {Diagnostic::Severity::error, e.what(), e.span()});
            res.ok = false;
            continue;
        }
        switch (one.kind) {
            case ClauseCompilation::Kind::denial:
                res.kb.add_denial(std::move(*one.constraint));
                break;
            case ClauseCompilation::Kind::dual_assertion:
                res.kb.add_dual_assertion(std::move(*one.constraint));
                break;
            case ClauseCompilation::Kind::clauses:
                for (auto& clause : one.clauses) {
                    check_naf_safety(clause, res.diagnostics);
                    if (clause.body.empty() && is_ground(clause.head)) {
                        auto& own = one.mod == Module::truth ? truth_facts : falsity_facts;
                        own.emplace(write_term(clause.head), clause.span);
                    }
                    res.kb.add(one.mod, std::move(clause));
                }
                break;
        }
    }

    std::vector<std::string> contradicted;
    for (const auto& [text, span] : falsity_facts)
        if (truth_facts.count(text)) contradicted.push_back(text);
    std::sort(contradicted.begin(), contradicted.end());
    for (const auto& text : contradicted) {
        res.diagnostics.push_back(
            {Diagnostic::Severity::warning,
             "contradictory ground fact: " + text + " is asserted both as true (" +
                 truth_facts.at(text).location() + ") and as false",
             falsity_facts.at(text)});
    }
    return res;
}

KnowledgeBase flip(const KnowledgeBase& kb) {
    auto check = [](const std::vector<CompiledClause>& clauses) {
        for (const auto& c : clauses) {
            if (!is_ground(c.head))
                throw CompileError(CompileErrorKind::not_propositional,
                                   "flip requires a ground program", c.span);
            for (const auto& g : c.body) {
                if (g.naf)
                    throw CompileError(CompileErrorKind::not_propositional,
                                       "flip requires a negation-free program", c.span);
                if (!is_ground(g.goal))
                    throw CompileError(CompileErrorKind::not_propositional,
                                       "flip requires a ground program", c.span);
            }
        }
    };
    check(kb.clauses(Module::truth));
    check(kb.clauses(Module::falsity));

    KnowledgeBase out;
    for (Module m : {Module::truth, Module::falsity}) {
        for (const auto& c : kb.clauses(m)) {
            CompiledClause copy = c;
            for (auto& g : copy.body) g.mod = other_module(g.mod);
            out.add(other_module(m), std::move(copy));
        }
    }
    for (const auto& d : kb.denials()) out.add_denial(d);
    for (const auto& a : kb.dual_assertions()) out.add_dual_assertion(a);
    return out;
}

std::string write_compiled(Module m, const CompiledClause& c) {
    std::string out(module_name(m));
    out += ": ";
    out += write_term(c.head, 999);
    if (!c.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            if (i) out += ", ";
            const BodyGoal& g = c.body[i];
            if (g.naf) {
                out += "not(";
                out += module_name(g.mod);
                out += ':';
                out += write_term(g.goal, 199);
                out += ')';
            } else if (g.mod != m) {
                out += module_name(g.mod);
                out += ':';
                out += write_term(g.goal, 199);
            } else {
                out += write_term(g.goal, 999);
            }
        }
    }
    out += '.';
    return out;
}

std::string write_compiled(const KnowledgeBase& kb) {
    std::string out;
    for (Module m : {Module::truth, Module::falsity})
        for (const auto& c : kb.clauses(m)) {
            out += write_compiled(m, c);
            out += '\n';
        }
    for (const auto& d : kb.denials()) {
        out += "constraint: false <= ";
        out += write_term(d.body, 1198);
        out += ".\n";
    }
    for (const auto& a : kb.dual_assertions()) {
        out += "constraint: true => ";
        out += write_term(a.body, 1198);
        out += ".\n";
    }
    return out;
}

}  // namespace symlp
