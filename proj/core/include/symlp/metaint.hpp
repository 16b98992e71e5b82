#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "symlp/engine.hpp"

namespace symlp {

/// A clause as one open-ended list term: [Head, B1, ..., Bn | Tail] paired
/// with its tail variable. Matching a goal list against it both selects the
/// clause and splices its body in front of the remaining goals in one
/// unification - constant-time resolvent construction.
struct DiffClause {
    TermPtr open_list;  // cons chain ending in the tail variable
    TermPtr tail;       // the tail variable itself
    SourceSpan span;
};

enum class MetaintErrorKind : std::uint8_t { cross_module_call, naf_goal };

class MetaintError : public std::runtime_error {
public:
    MetaintError(MetaintErrorKind kind, std::string message, SourceSpan span = {})
        : std::runtime_error(std::move(message)), kind_(kind), span_(std::move(span)) {}
    MetaintErrorKind kind() const { return kind_; }
    const SourceSpan& span() const { return span_; }

private:
    MetaintErrorKind kind_;
    SourceSpan span_;
};

/// Difference-list form of one module's clauses, body order preserved, facts
/// as single-element lists. The oracle covers single-module programs only:
/// cross-module calls and negation goals are rejected.
std::vector<DiffClause> to_diff_clauses(const KnowledgeBase& kb, Module m);

/// List-interpreter answer: bindings of the caller's named variables.
struct MetaintAnswer {
    std::vector<std::pair<std::string, TermPtr>> bindings;
};

/// The two-clause list interpreter run lazily:
///   the empty goal list succeeds; otherwise match the first goal against a
///   clause head (fresh renaming), splice the body, recurse.
/// The control structure is deliberately different from Solver (goal lists
/// as terms, no clause indexing); term-core unification is shared.
class MetaintSolver {
public:
    MetaintSolver(std::vector<DiffClause> clauses, std::vector<TermPtr> goals,
                  std::vector<std::pair<std::string, TermPtr>> vars,
                  EngineConfig config = {});
    ~MetaintSolver();
    MetaintSolver(MetaintSolver&&) noexcept;

    std::optional<MetaintAnswer> next();
    bool depth_limited() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience: does the module derive the (single) goal?
bool metaint_proves(const KnowledgeBase& kb, Module m, const TermPtr& goal,
                    const EngineConfig& config = {});

}  // namespace symlp
