#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "symlp/term.hpp"

namespace symlp {

/// Substitution built up during resolution: a map from variable id to term
/// plus an undo trail. Checkpoints (`mark`/`undo_to`) give backtracking its
/// exact restore semantics. The generation counter hands out fresh variable
/// ids for clause renaming, so one Bindings instance owns the whole variable
/// namespace of a resolution session.
class Bindings {
public:
    explicit Bindings(VarId first_fresh_id = 0) : next_(first_fresh_id) {}

    using Checkpoint = std::size_t;

    Checkpoint mark() const { return trail_.size(); }
    void undo_to(Checkpoint c);

    /// Bound value of a variable, or nullptr when unbound.
    const TermPtr* lookup(VarId id) const;

    /// Bind an unbound variable; recorded on the trail.
    void bind(VarId id, TermPtr value);

    TermPtr fresh_var(std::string display);
    VarId fresh_id() { return next_++; }
    /// Next id to be issued; grows monotonically.
    VarId generation() const { return next_; }

    std::size_t size() const { return map_.size(); }

    /// Sorted (id, value) copy, for tests that compare binding states.
    std::vector<std::pair<VarId, TermPtr>> snapshot() const;

private:
    std::unordered_map<VarId, TermPtr> map_;
    std::vector<VarId> trail_;
    VarId next_;
};

/// Walk a variable chain until a non-variable or an unbound variable.
TermPtr deref(const Bindings& b, TermPtr t);

/// Extend `b` to a most general unifier of t1 and t2. On failure `b` is
/// restored to its state at entry. Failure is a normal outcome.
bool unify(const TermPtr& t1, const TermPtr& t2, Bindings& b, bool occurs_check);

/// Replace every bound variable by its fully dereferenced value. If a cyclic
/// binding was created (occurs check off), a revisited variable is rendered
/// as the atom '...' instead of looping.
TermPtr apply(const Bindings& b, const TermPtr& t);

/// Copies of `roots` with all variables renamed to fresh ones from `b`;
/// sharing of variables across the roots is preserved. Fresh variables get
/// a "_G<id>" display name.
std::vector<TermPtr> rename_apart(std::span<const TermPtr> roots, Bindings& b);
TermPtr rename_apart(const TermPtr& root, Bindings& b);

}  // namespace symlp
