#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace symlp {

class Term;
using TermPtr = std::shared_ptr<const Term>;
using VarId = std::uint64_t;

enum class TermKind : std::uint8_t { atom, var, compound, number };

/// Immutable first-order term: atom, variable, compound or integer constant.
///
/// Terms are shared freely through `TermPtr`; once built they are never
/// mutated, so a loaded program can be walked by any number of concurrent
/// sessions. Variables carry a globally meaningless display name (kept for
/// answer printing) and a numeric id that is what unification actually binds.
/// Zero-arity symbols are atoms; compounds always have at least one argument.
class Term {
public:
    static TermPtr make_atom(std::string name);
    static TermPtr make_var(VarId id, std::string display);
    static TermPtr make_compound(std::string functor, std::vector<TermPtr> args);
    static TermPtr make_number(std::int64_t value);

    TermKind kind() const { return kind_; }
    bool is_atom() const { return kind_ == TermKind::atom; }
    bool is_var() const { return kind_ == TermKind::var; }
    bool is_compound() const { return kind_ == TermKind::compound; }
    bool is_number() const { return kind_ == TermKind::number; }
    bool is_callable() const { return is_atom() || is_compound(); }
    bool is_atom_named(std::string_view name) const {
        return is_atom() && text_ == name;
    }
    /// Compound with the given functor/arity.
    bool is_functor(std::string_view functor, std::size_t arity) const {
        return is_compound() && arity_matches(arity) && text_ == functor;
    }

    /// Atom name, compound functor, or variable display name.
    const std::string& text() const { return text_; }
    VarId var_id() const { return var_id_; }
    std::int64_t number_value() const { return value_; }
    const std::vector<TermPtr>& args() const { return args_; }
    std::size_t arity() const { return args_.size(); }

private:
    Term(TermKind kind, std::string text, std::vector<TermPtr> args, VarId id,
         std::int64_t value)
        : kind_(kind), var_id_(id), value_(value), text_(std::move(text)),
          args_(std::move(args)) {}

    bool arity_matches(std::size_t a) const { return args_.size() == a; }

    TermKind kind_;
    VarId var_id_ = 0;
    std::int64_t value_ = 0;
    std::string text_;
    std::vector<TermPtr> args_;
};

/// Structural equality. Variables compare by id.
bool structurally_equal(const TermPtr& a, const TermPtr& b);

/// Structural equality up to a bijective renaming of variable ids; renamed
/// variables must keep the same display text. Used by round-trip checks.
bool equal_up_to_var_ids(const TermPtr& a, const TermPtr& b);

bool is_ground(const TermPtr& t);

/// Distinct variables of `t` in first-occurrence order.
std::vector<TermPtr> collect_vars(const TermPtr& t);

/// Largest variable id occurring in `t`, or 0 if none.
VarId max_var_id(const TermPtr& t);

}  // namespace symlp
