#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symlp/bindings.hpp"
#include "symlp/compiler.hpp"

namespace symlp {

struct EngineConfig {
    /// Maximum resolution steps along one derivation branch; unset means
    /// unbounded. Exceeding it is a distinguishable outcome, not failure.
    std::optional<std::uint32_t> depth_limit;
    bool occurs_check = false;
    /// Collect proof traces on answers and emit trace events.
    bool trace = false;
    std::function<void(const struct TraceEvent&)> trace_sink;
};

enum class Port : std::uint8_t { call, exit, fail, redo };

struct TraceEvent {
    std::size_t step;
    Port port;
    Module mod;
    bool naf;
    TermPtr goal;       // instantiated at event time
    SourceSpan clause;  // resolving clause, when the port has one
};

std::string render_trace(const TraceEvent& ev);

/// A query compiled to its conjunctive alternatives, tried in order.
struct Query {
    std::vector<std::vector<BodyGoal>> alternatives;
    std::vector<std::pair<std::string, TermPtr>> vars;  // display, variable
    VarId next_var = 0;
};

/// Parse and compile a query. Unqualified goals call `default_module`;
/// `not(G)` negates in the truth module unless G is itself qualified.
Query make_query(std::string_view text, Module default_module = Module::truth);
Query make_goal_query(Module m, const TermPtr& goal);

struct ProofNode {
    Module mod{};
    bool naf = false;
    TermPtr goal;       // fully instantiated under the answer bindings
    SourceSpan clause;  // span of the resolving clause (empty for naf)
    std::vector<ProofNode> children;
};

struct Answer {
    /// Query variables (display name, value) in first-occurrence order.
    /// Values are fully dereferenced snapshots.
    std::vector<std::pair<std::string, TermPtr>> bindings;
    std::shared_ptr<const ProofNode> proof;  // null unless trace was on
};

enum class EngineErrorKind : std::uint8_t {
    depth_limit_exceeded,
    non_ground_naf,
    unbound_goal,
    not_callable,
    trace_unavailable,
};

class EngineError : public std::runtime_error {
public:
    EngineError(EngineErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}
    EngineErrorKind kind() const { return kind_; }

private:
    EngineErrorKind kind_;
};

/// Depth-first SLD resolution over a compiled knowledge base. Clauses are
/// tried in source order; answers are enumerated lazily through next().
/// A Solver owns its bindings and is single-threaded; any number of solvers
/// may share one immutable KnowledgeBase.
class Solver {
public:
    Solver(const KnowledgeBase& kb, Query query, EngineConfig config = {});
    ~Solver();
    Solver(Solver&&) noexcept;
    Solver& operator=(Solver&&) = delete;

    /// Next answer, or nullopt when the search space is exhausted.
    /// Throws EngineError for non-ground negation and truncated negation.
    std::optional<Answer> next();

    /// True once any branch was cut off by the depth limit. An exhausted
    /// enumeration with this flag set is "unknown", not a proven failure.
    bool depth_limited() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Negation as failure per module: unverifiable(g) holds iff true:g has no
/// derivation, unfalsifiable(g) iff false:g has none. `goal` must be ground;
/// a truncated failed search raises depth_limit_exceeded instead of lying.
bool unverifiable(const KnowledgeBase& kb, const TermPtr& goal,
                  const EngineConfig& config = {});
bool unfalsifiable(const KnowledgeBase& kb, const TermPtr& goal,
                   const EngineConfig& config = {});

/// Render an answer's proof tree, one node per line, indented by depth.
/// Throws EngineError trace_unavailable when the answer has no proof.
std::string explain(const Answer& answer);

}  // namespace symlp
