#pragma once

#include <string>
#include <string_view>

#include "symlp/reader.hpp"
#include "symlp/term.hpp"

namespace symlp {

/// True when the atom text cannot be written bare (must be quoted to
/// re-tokenize as one atom).
bool atom_needs_quotes(std::string_view text);

/// Atom text as source: bare when possible, otherwise quoted with internal
/// quotes doubled.
std::string write_atom(std::string_view text);

/// Canonical source form of a term. Writes ','/';'/':' infix with standard
/// parenthesization, everything else functor(args). Variables print their
/// display name.
std::string write_term(const TermPtr& t);
std::string write_term(const TermPtr& t, int max_prec);

/// Source form of a clause, terminated by ".". parse_clause_text of the
/// result is structurally identical to the input clause.
std::string write_clause(const SourceClause& c);

}  // namespace symlp
