#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symlp/compiler.hpp"

namespace symlp {

enum class PropErrorKind : std::uint8_t {
    not_propositional,
    non_stratified,
    unknown_atom,
    needs_stratification,  // minimal_model called on a program with negation
};

class PropError : public std::runtime_error {
public:
    PropError(PropErrorKind kind, std::string message,
              std::vector<SourceSpan> spans = {}, std::string witness = {})
        : std::runtime_error(std::move(message)), kind_(kind),
          spans_(std::move(spans)), witness_(std::move(witness)) {}
    PropErrorKind kind() const { return kind_; }
    const std::vector<SourceSpan>& spans() const { return spans_; }
    /// For non_stratified: a rendered negative cycle.
    const std::string& witness() const { return witness_; }

private:
    PropErrorKind kind_;
    std::vector<SourceSpan> spans_;
    std::string witness_;
};

/// Ground program in dense-id form. Atom texts (the canonical written form
/// of each ground head/goal) are interned once; propagation afterwards works
/// purely on integer ids. A (module, atom) pair is a "node":
/// node = 2 * atom + (module == falsity).
class PropProgram {
public:
    using AtomId = std::uint32_t;
    using Node = std::uint32_t;

    static Node node_of(Module m, AtomId a) {
        return 2 * a + (m == Module::falsity ? 1u : 0u);
    }
    static Module node_module(Node n) {
        return (n & 1u) ? Module::falsity : Module::truth;
    }
    static AtomId node_atom(Node n) { return n >> 1; }

    struct Clause {
        Module mod;
        AtomId head;
        std::vector<Node> body;  // positive goals
        std::vector<Node> naf;   // negated goals
        SourceSpan span;
    };

    AtomId atom_count() const { return static_cast<AtomId>(texts_.size()); }
    std::uint32_t node_count() const { return 2 * atom_count(); }
    const std::string& atom_text(AtomId a) const { return texts_[a]; }
    std::optional<AtomId> find_atom(std::string_view text) const;

    const std::vector<Clause>& clauses() const { return clauses_; }
    /// Clause indices whose positive body contains the node.
    const std::vector<std::uint32_t>& occurrences(Node n) const { return occ_[n]; }

    bool has_naf() const { return has_naf_; }
    std::size_t total_body_size() const { return total_body_; }

    const std::vector<Constraint>& denials() const { return denials_; }
    const std::vector<Constraint>& dual_assertions() const { return dual_assertions_; }

    /// Intern an atom text; used while the program is being built.
    AtomId intern(const std::string& text);

private:
    friend PropProgram ground_check(const KnowledgeBase&);

    std::vector<std::string> texts_;
    std::unordered_map<std::string, AtomId> ids_;
    std::vector<Clause> clauses_;
    std::vector<std::vector<std::uint32_t>> occ_;
    std::vector<Constraint> denials_;
    std::vector<Constraint> dual_assertions_;
    bool has_naf_ = false;
    std::size_t total_body_ = 0;
};

/// Indexed form of a ground knowledge base. Throws PropError
/// not_propositional listing every clause (and constraint) span that
/// contains a variable.
PropProgram ground_check(const KnowledgeBase& kb);

/// Atoms true per module. Closed means the set is exactly the least fixpoint
/// it was computed as.
class Model {
public:
    explicit Model(std::uint32_t node_count) : truth_(node_count, false) {}

    bool holds_node(PropProgram::Node n) const { return truth_[n]; }
    bool holds(Module m, PropProgram::AtomId a) const {
        return truth_[PropProgram::node_of(m, a)];
    }
    std::vector<PropProgram::AtomId> atoms(Module m) const;
    bool closed() const { return closed_; }

private:
    friend Model minimal_model(const PropProgram&, struct PropStats*);
    friend Model stratified_eval(const PropProgram&, struct PropStats*);

    void set(PropProgram::Node n) { truth_[n] = true; }
    void close() { closed_ = true; }

    std::vector<bool> truth_;
    bool closed_ = false;
};

/// Propagation instrumentation. Each clause body position is decremented at
/// most once, which is the linearity argument; tests assert it.
struct PropStats {
    std::uint64_t decrements = 0;
    std::uint64_t fired = 0;  // clauses whose counter reached zero
};

/// Least model by counting-based unit propagation: seed with facts, pop an
/// atom, decrement the pending counter of every clause whose body mentions
/// it, enqueue heads of clauses that reach zero. Linear in program size.
/// Requires a negation-free program (PropError needs_stratification).
Model minimal_model(const PropProgram& p, PropStats* stats = nullptr);

/// Membership in the closed model; unknown atom text is an error (a typo in
/// a generated corpus must not read as false).
bool entails(const PropProgram& p, const Model& m, Module mod, std::string_view atom);
/// entails on the falsity side: constructive falsification of the atom.
bool falsifies(const PropProgram& p, const Model& m, std::string_view atom);

struct ConstraintViolation {
    bool denial;  // false: dual assertion
    std::string rendered;
    SourceSpan span;
};

/// Denial false <= p1..pn is violated when its body holds in the truth-side
/// model; dual assertion true => p1..pn is violated when every witness is
/// constructively falsified.
std::vector<ConstraintViolation> check_constraints(const PropProgram& p, const Model& m);

/// Perfect-model evaluation for ground programs whose negation use is
/// stratified: strongly connected components of the (module, atom)
/// dependency graph are evaluated bottom-up, negated goals resolved against
/// already-closed lower components. A cycle through a negated edge raises
/// PropError non_stratified carrying a rendered witness cycle. Without any
/// negation the result equals minimal_model.
Model stratified_eval(const PropProgram& p, PropStats* stats = nullptr);

}  // namespace symlp
