#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symlp/diagnostics.hpp"
#include "symlp/reader.hpp"
#include "symlp/term.hpp"

namespace symlp {

/// The two polarity modules: `true` holds the Horn side (verification),
/// `false` holds the compiled dual side (falsification).
enum class Module : std::uint8_t { truth, falsity };

constexpr std::string_view module_name(Module m) {
    return m == Module::truth ? "true" : "false";
}
constexpr Module other_module(Module m) {
    return m == Module::truth ? Module::falsity : Module::truth;
}
std::optional<Module> module_from_name(std::string_view name);

/// One goal of a compiled clause body: a call into a module, or negation as
/// failure of such a call. Bodies are flat conjunctions; a fact has an empty
/// body (the compiler drops `true` no-op goals).
struct BodyGoal {
    Module mod;
    TermPtr goal;
    bool naf = false;
};

struct CompiledClause {
    TermPtr head;
    std::vector<BodyGoal> body;
    SourceSpan span;
};

/// Constraint body kept as its goal tree: a conjunction for denials
/// (false <= B), a disjunction for dual assertions (true => B).
struct Constraint {
    TermPtr body;
    SourceSpan span;
};

enum class CompileErrorKind : std::uint8_t {
    variable_head,
    invalid_head,
    naf_in_dual_body,
    qualified_goal_in_dual_body,
    invalid_goal,
    unknown_module,
    not_propositional,
};

class CompileError : public std::runtime_error {
public:
    CompileError(CompileErrorKind kind, std::string message, SourceSpan span = {})
        : std::runtime_error(std::move(message)), kind_(kind), span_(std::move(span)) {}
    CompileErrorKind kind() const { return kind_; }
    const SourceSpan& span() const { return span_; }

private:
    CompileErrorKind kind_;
    SourceSpan span_;
};

/// Indexed clause store for both modules plus the declarative constraints.
/// Clause order within a (functor, arity) key follows insertion order, which
/// the engine relies on for answer order. Immutable once compiled; safe to
/// share across solver sessions.
class KnowledgeBase {
public:
    void add(Module m, CompiledClause clause);
    void add_denial(Constraint c) { denials_.push_back(std::move(c)); }
    void add_dual_assertion(Constraint c) { dual_assertions_.push_back(std::move(c)); }

    /// All clauses of a module in source order.
    const std::vector<CompiledClause>& clauses(Module m) const {
        return store(m).clauses;
    }
    /// Indices into clauses(m) of the clauses for functor/arity, or null.
    const std::vector<std::size_t>* lookup(Module m, std::string_view functor,
                                           std::size_t arity) const;

    const std::vector<Constraint>& denials() const { return denials_; }
    const std::vector<Constraint>& dual_assertions() const { return dual_assertions_; }

    /// First variable id above every id occurring in stored clauses; clause
    /// renaming allocates from here.
    VarId var_ceiling() const { return var_ceiling_; }

    bool empty() const {
        return truth_.clauses.empty() && falsity_.clauses.empty() &&
               denials_.empty() && dual_assertions_.empty();
    }

private:
    struct Key {
        std::string functor;
        std::size_t arity;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<std::string>{}(k.functor) ^ (k.arity * 0x9e3779b97f4a7c15ULL);
        }
    };
    struct Store {
        std::vector<CompiledClause> clauses;
        std::unordered_map<Key, std::vector<std::size_t>, KeyHash> index;
    };

    Store& store(Module m) { return m == Module::truth ? truth_ : falsity_; }
    const Store& store(Module m) const { return m == Module::truth ? truth_ : falsity_; }

    Store truth_;
    Store falsity_;
    std::vector<Constraint> denials_;
    std::vector<Constraint> dual_assertions_;
    VarId var_ceiling_ = 0;
};

/// Swap every ';' for ',' and every ',' for ';' in a body tree. Involution.
TermPtr dualize(const TermPtr& body);

struct FlattenOptions {
    Module default_module = Module::truth;
    bool allow_naf = true;
    bool allow_qualified = true;
};

/// Flatten a goal tree into its list of conjunctive alternatives (one per
/// disjunct after distributing ';' over ','). Reserved leaves are resolved
/// here: a vacuous goal ('true' on the truth side, 'false' on the falsity
/// side) is dropped from its alternative, and an unsatisfiable one drops the
/// whole alternative. Throws CompileError on malformed goals.
std::vector<std::vector<BodyGoal>> flatten_goal(const TermPtr& tree,
                                                const FlattenOptions& opts);

/// Result of compiling one source clause: either clauses for one module or a
/// stored constraint.
struct ClauseCompilation {
    enum class Kind : std::uint8_t { clauses, denial, dual_assertion };
    Kind kind = Kind::clauses;
    Module mod = Module::truth;
    std::vector<CompiledClause> clauses;   // kind == clauses
    std::optional<Constraint> constraint;  // kind == denial / dual_assertion
};

ClauseCompilation compile_clause(const SourceClause& c);

struct CompileResult {
    KnowledgeBase kb;
    std::vector<Diagnostic> diagnostics;
    bool ok = true;
};

/// Compile a whole program. Errors are collected per clause; warnings are
/// emitted for contradictory ground facts (same fact in both modules) and
/// for negation goals whose variables are not bound by the time the goal is
/// reached.
CompileResult compile_program(const std::vector<SourceClause>& clauses);

/// The duality view: the two modules swapped. Requires both modules to be
/// propositional (throws CompileError not_propositional otherwise).
/// flip(flip(kb)) == kb.
KnowledgeBase flip(const KnowledgeBase& kb);

/// --dump-compiled line for one clause, e.g. "false: p :- q, r."
std::string write_compiled(Module m, const CompiledClause& c);
/// Whole knowledge base in dump format, one clause/constraint per line.
std::string write_compiled(const KnowledgeBase& kb);

}  // namespace symlp
