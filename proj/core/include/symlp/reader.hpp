#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symlp/diagnostics.hpp"
#include "symlp/term.hpp"

namespace symlp {

enum class TokenKind : std::uint8_t {
    atom,         // unquoted name: lowercase start, then alnum/_
    quoted_atom,  // lexeme holds the unquoted content ('' -> ')
    variable,     // uppercase or _ start
    number,       // decimal integer
    punct,        // ( ) , ; : + - => <= :-
    clause_end,   // '.' followed by layout or end of input
    eof
};

struct Token {
    TokenKind kind;
    std::string text;
    SourceSpan span;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, SourceSpan span)
        : std::runtime_error(std::move(message)), span_(std::move(span)) {}
    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

/// Full token stream for `source`; comments (% to end of line) and layout are
/// skipped but accounted for, so token spans partition the input together
/// with the skipped regions. Throws ParseError (UnterminatedQuote /
/// IllegalCharacter) with the offending position.
std::vector<Token> tokenize(std::string_view source,
                            std::shared_ptr<const std::string> file = {});

/// One clause of a program. `head` is null for the two headless constraint
/// forms; `body` is null for facts. Bodies are kept as the parsed goal tree
/// (','/';'/':'/'not' compounds); classifying goals is the compiler's job.
enum class ClauseKind : std::uint8_t {
    horn_rule,       // H <= B
    positive_fact,   // +H   (also H <= true, and bare H.)
    dual_rule,       // H => B
    negative_fact,   // -H   (also H => false)
    denial,          // false <= B
    dual_assertion,  // true => B
};

struct SourceClause {
    ClauseKind kind;
    TermPtr head;  // null for denial / dual_assertion
    TermPtr body;  // null for facts
    SourceSpan span;
};

enum class ParseMode { strict, lenient };

struct ParseResult {
    std::vector<SourceClause> clauses;
    std::vector<Diagnostic> diagnostics;
    bool ok = true;       // false once an error diagnostic was recorded
    VarId next_var = 0;   // first variable id not used by the parse
};

/// Parse a whole program. Strict mode stops at the first error; lenient mode
/// recovers at the next clause end ('.') and, for clauses glued together by a
/// stray ';' terminator, splits them at that ';' with a diagnostic. Include
/// directives are recognized and skipped with a note.
ParseResult parse_program(std::string_view source, ParseMode mode = ParseMode::strict,
                          std::shared_ptr<const std::string> file = {});

/// Parse exactly one clause (throws ParseError). Convenience for tests.
SourceClause parse_clause_text(std::string_view source);

/// A query is a clause-body goal tree. `vars` lists the query's named
/// variables in first-occurrence order (anonymous `_` excluded).
struct ParsedQuery {
    TermPtr goal;
    std::vector<std::pair<std::string, TermPtr>> vars;
    VarId next_var = 0;
};

/// Accepts an optional leading "?-" and an optional final ".".
ParsedQuery parse_query_text(std::string_view source);

}  // namespace symlp
