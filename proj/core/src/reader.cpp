#include "symlp/reader.hpp"

#include <cctype>
#include <charconv>
#include <span>
#include <unordered_map>

namespace symlp {

namespace {

bool is_layout(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
bool is_ident(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)); }
bool is_upper_or_underscore(char c) {
    return std::isupper(static_cast<unsigned char>(c)) || c == '_';
}
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

struct Cursor {
    std::string_view src;
    std::shared_ptr<const std::string> file;
    std::size_t pos = 0;
    std::uint32_t line = 1;
    std::uint32_t col = 1;

    bool eof() const { return pos >= src.size(); }
    char peek(std::size_t k = 0) const {
        return pos + k < src.size() ? src[pos + k] : '\0';
    }
    void advance() {
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    SourceSpan mark() const {
        SourceSpan s;
        s.file = file;
        s.line = line;
        s.column = col;
        s.end_line = line;
        s.end_column = col;
        s.byte_begin = pos;
        s.byte_end = pos;
        return s;
    }
    void finish(SourceSpan& s) const {
        s.end_line = line;
        s.end_column = col;
        s.byte_end = pos;
    }
};

// Lenient mode skips illegal characters with a diagnostic instead of
// throwing; an unterminated quote is unrecoverable either way.
std::vector<Token> tokenize_impl(std::string_view source,
                                 std::shared_ptr<const std::string> file,
                                 std::vector<Diagnostic>* lenient_diags) {
    std::vector<Token> out;
    Cursor cur{source, std::move(file)};
    while (!cur.eof()) {
        const char c = cur.peek();
        if (is_layout(c)) {
            cur.advance();
            continue;
        }
        if (c == '%') {
            while (!cur.eof() && cur.peek() != '\n') cur.advance();
            continue;
        }
        SourceSpan span = cur.mark();
        if (is_lower(c)) {
            std::string text;
            while (!cur.eof() && is_ident(cur.peek())) {
                text += cur.peek();
                cur.advance();
            }
            cur.finish(span);
            out.push_back({TokenKind::atom, std::move(text), std::move(span)});
            continue;
        }
        if (is_upper_or_underscore(c)) {
            std::string text;
            while (!cur.eof() && is_ident(cur.peek())) {
                text += cur.peek();
                cur.advance();
            }
            cur.finish(span);
            out.push_back({TokenKind::variable, std::move(text), std::move(span)});
            continue;
        }
        if (is_digit(c)) {
            std::string text;
            while (!cur.eof() && is_digit(cur.peek())) {
                text += cur.peek();
                cur.advance();
            }
            cur.finish(span);
            std::int64_t value = 0;
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc() || p != text.data() + text.size())
                throw ParseError("integer literal out of range", span);
            out.push_back({TokenKind::number, std::move(text), std::move(span)});
            continue;
        }
        if (c == '\'') {
            cur.advance();
            std::string text;
            bool closed = false;
            while (!cur.eof()) {
                const char q = cur.peek();
                if (q == '\'') {
                    cur.advance();
                    if (cur.peek() == '\'') {  // '' escapes one quote
                        text += '\'';
                        cur.advance();
                        continue;
                    }
                    closed = true;
                    break;
                }
                text += q;
                cur.advance();
            }
            if (!closed) throw ParseError("unterminated quoted atom", span);
            cur.finish(span);
            out.push_back({TokenKind::quoted_atom, std::move(text), std::move(span)});
            continue;
        }
        if (c == '.') {
            const char next = cur.peek(1);
            if (next == '\0' || is_layout(next) || next == '%') {
                cur.advance();
                cur.finish(span);
                out.push_back({TokenKind::clause_end, ".", std::move(span)});
                continue;
            }
            // fall through to the illegal-character path
        }
        auto two = [&](const char* p) {
            return cur.peek() == p[0] && cur.peek(1) == p[1];
        };
        std::string punct;
        if (two(":-") || two("=>") || two("<=")) {
            punct = {cur.peek(), cur.peek(1)};
            cur.advance();
            cur.advance();
        } else if (c == '(' || c == ')' || c == ',' || c == ';' || c == ':' ||
                   c == '+' || c == '-') {
            punct = std::string(1, c);
            cur.advance();
        }
        if (!punct.empty()) {
            cur.finish(span);
            out.push_back({TokenKind::punct, std::move(punct), std::move(span)});
            continue;
        }
        std::string msg = "illegal character '" + std::string(1, c) + "'";
        if (!lenient_diags) throw ParseError(std::move(msg), span);
        cur.advance();
        cur.finish(span);
        lenient_diags->push_back(
            {Diagnostic::Severity::error, std::move(msg), std::move(span)});
    }
    SourceSpan end = cur.mark();
    out.push_back({TokenKind::eof, "", std::move(end)});
    return out;
}

// Internal parse failure carrying the offending token index, which the
// lenient ';'-split recovery needs.
struct ParseFail {
    std::string message;
    std::size_t index;
};

struct OpInfo {
    int prec;
    bool xfx;
};

const OpInfo* infix_op(const Token& t) {
    static const OpInfo comma{1000, false};
    static const OpInfo semicolon{1100, false};
    static const OpInfo colon{200, false};
    static const OpInfo arrow{1199, true};
    if (t.kind != TokenKind::punct) return nullptr;
    if (t.text == ",") return &comma;
    if (t.text == ";") return &semicolon;
    if (t.text == ":") return &colon;
    if (t.text == "=>" || t.text == "<=") return &arrow;
    return nullptr;
}

bool starts_term(const Token& t) {
    switch (t.kind) {
        case TokenKind::atom:
        case TokenKind::quoted_atom:
        case TokenKind::variable:
        case TokenKind::number:
            return true;
        case TokenKind::punct:
            return t.text == "(";
        default:
            return false;
    }
}

/// Variable scope of one clause or query: occurrences of the same name share
/// one variable; '_' is fresh at every occurrence.
class VarScope {
public:
    explicit VarScope(VarId& counter) : counter_(counter) {}

    TermPtr get(const std::string& name) {
        if (name == "_") return Term::make_var(counter_++, "_");
        auto it = named_.find(name);
        if (it != named_.end()) return it->second;
        TermPtr v = Term::make_var(counter_++, name);
        named_.emplace(name, v);
        order_.emplace_back(name, v);
        return v;
    }

    const std::vector<std::pair<std::string, TermPtr>>& order() const {
        return order_;
    }

private:
    VarId& counter_;
    std::unordered_map<std::string, TermPtr> named_;
    std::vector<std::pair<std::string, TermPtr>> order_;
};

class ClauseParser {
public:
    ClauseParser(std::span<const Token> tokens, VarId& counter)
        : tokens_(tokens), scope_(counter) {}

    const Token& peek(std::size_t k = 0) const {
        const std::size_t i = pos_ + k;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    const Token& take() {
        const Token& t = peek();
        if (pos_ < tokens_.size()) ++pos_;
        return t;
    }
    [[noreturn]] void fail(std::string msg, std::size_t at) const {
        throw ParseFail{std::move(msg), at};
    }
    [[noreturn]] void fail_here(std::string msg) const { fail(std::move(msg), pos_); }

    bool at_punct(std::string_view p) const {
        return peek().kind == TokenKind::punct && peek().text == p;
    }

    TermPtr parse_term(int max_prec) {
        TermPtr left = parse_primary();
        int left_prec = 0;
        for (;;) {
            const Token& t = peek();
            const OpInfo* op = infix_op(t);
            if (!op || op->prec > max_prec) break;
            if (left_prec >= op->prec) {
                if (op->xfx)
                    fail_here("misplaced '" + t.text +
                              "': non-associative operator at this precedence");
                break;
            }
            const std::string name = t.text;
            take();
            TermPtr right = parse_term(op->xfx ? op->prec - 1 : op->prec);
            left = Term::make_compound(name, {left, right});
            left_prec = op->prec;
        }
        return left;
    }

    TermPtr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::atom:
            case TokenKind::quoted_atom: {
                const Token& name = take();
                // functor( must be adjacent, Prolog style
                if (at_punct("(") &&
                    peek().span.byte_begin == name.span.byte_end)
                    return parse_compound(name.text);
                if (name.kind == TokenKind::atom && name.text == "not" &&
                    starts_term(peek()))
                    return Term::make_compound("not", {parse_term(200)});
                return Term::make_atom(name.text);
            }
            case TokenKind::variable:
                return scope_.get(take().text);
            case TokenKind::number: {
                const Token& n = take();
                std::int64_t v = 0;
                std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
                return Term::make_number(v);
            }
            case TokenKind::punct:
                if (t.text == "(") {
                    take();
                    TermPtr inner = parse_term(1200);
                    if (!at_punct(")")) fail_here("expected ')'");
                    take();
                    return inner;
                }
                if (t.text == "-" && peek(1).kind == TokenKind::number) {
                    take();
                    const Token& n = take();
                    std::int64_t v = 0;
                    std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
                    return Term::make_number(-v);
                }
                fail_here("expected a term, found '" + t.text + "'");
            default:
                fail_here("expected a term");
        }
    }

    TermPtr parse_compound(const std::string& functor) {
        take();  // '('
        std::vector<TermPtr> args;
        for (;;) {
            args.push_back(parse_term(999));
            if (at_punct(",")) {
                take();
                continue;
            }
            break;
        }
        if (!at_punct(")")) fail_here("expected ')' or ',' in argument list");
        take();
        return Term::make_compound(functor, std::move(args));
    }

    void expect_end() {
        if (peek().kind != TokenKind::clause_end)
            fail_here("expected '.' at end of clause, found '" + peek().text + "'");
        take();
        if (pos_ != tokens_.size() && peek().kind != TokenKind::eof)
            fail_here("unexpected input after clause end");
    }

    const VarScope& scope() const { return scope_; }

private:
    std::span<const Token> tokens_;
    std::size_t pos_ = 0;
    VarScope scope_;
};

const char* const kReservedHeads[] = {",", ";", ":", "=>", "<=", ":-", "not",
                                      "true", "false"};

bool reserved_name(const std::string& name) {
    for (const char* r : kReservedHeads)
        if (name == r) return true;
    return false;
}

void validate_head(const ClauseParser& p, const TermPtr& head, std::size_t at) {
    if (head->is_var())
        throw ParseFail{"clause head must be an atom or compound term, not a variable", at};
    if (head->is_number())
        throw ParseFail{"clause head must be an atom or compound term, not a number", at};
    if (reserved_name(head->text()))
        throw ParseFail{"reserved name '" + head->text() + "' cannot head a clause", at};
    (void)p;
}

SourceSpan group_span(std::span<const Token> g) {
    SourceSpan s = g.front().span;
    const SourceSpan& last = g.back().span;
    s.end_line = last.end_line;
    s.end_column = last.end_column;
    s.byte_end = last.byte_end;
    return s;
}

SourceClause parse_clause_tokens(std::span<const Token> group, VarId& counter) {
    ClauseParser p(group, counter);
    SourceClause clause;
    clause.span = group_span(group);

    if (p.at_punct("+") || p.at_punct("-")) {
        const bool positive = p.peek().text == "+";
        const std::size_t at = 0;
        p.take();
        TermPtr head = p.parse_term(200);
        p.expect_end();
        validate_head(p, head, at);
        clause.kind = positive ? ClauseKind::positive_fact : ClauseKind::negative_fact;
        clause.head = std::move(head);
        return clause;
    }

    TermPtr t = p.parse_term(1200);
    p.expect_end();

    if (t->is_functor("=>", 2)) {
        const TermPtr& head = t->args()[0];
        const TermPtr& body = t->args()[1];
        if (head->is_atom_named("true")) {
            clause.kind = ClauseKind::dual_assertion;
            clause.body = body;
            return clause;
        }
        validate_head(p, head, 0);
        if (body->is_atom_named("false")) {  // H => false is a negated fact
            clause.kind = ClauseKind::negative_fact;
            clause.head = head;
            return clause;
        }
        clause.kind = ClauseKind::dual_rule;
        clause.head = head;
        clause.body = body;
        return clause;
    }
    if (t->is_functor("<=", 2)) {
        const TermPtr& head = t->args()[0];
        const TermPtr& body = t->args()[1];
        if (head->is_atom_named("false")) {
            clause.kind = ClauseKind::denial;
            clause.body = body;
            return clause;
        }
        validate_head(p, head, 0);
        if (body->is_atom_named("true")) {  // H <= true is a positive fact
            clause.kind = ClauseKind::positive_fact;
            clause.head = head;
            return clause;
        }
        clause.kind = ClauseKind::horn_rule;
        clause.head = head;
        clause.body = body;
        return clause;
    }

    // Unmarked clause: a plain positive fact.
    validate_head(p, t, 0);
    clause.kind = ClauseKind::positive_fact;
    clause.head = t;
    return clause;
}

/// Parse one '.'-delimited token group, splitting at a stray ';' terminator
/// when allowed: the split point is the last ';' before the failure whose
/// two halves both parse as clauses.
std::vector<SourceClause> parse_group(std::span<const Token> group, VarId& counter,
                                      std::vector<Diagnostic>& diags,
                                      bool allow_split) {
    try {
        return {parse_clause_tokens(group, counter)};
    } catch (const ParseFail& f) {
        if (!allow_split) throw;
        for (std::size_t j = std::min(f.index, group.size()); j-- > 0;) {
            const Token& t = group[j];
            if (t.kind != TokenKind::punct || t.text != ";") continue;
            std::vector<Token> left(group.begin(), group.begin() + j);
            left.push_back({TokenKind::clause_end, ".", t.span});
            SourceClause first;
            try {
                first = parse_clause_tokens(left, counter);
            } catch (const ParseFail&) {
                continue;
            }
            std::vector<Diagnostic> sub_diags;
            std::vector<SourceClause> rest;
            try {
                rest = parse_group(group.subspan(j + 1), counter, sub_diags, true);
            } catch (const ParseFail&) {
                continue;
            }
            diags.push_back({Diagnostic::Severity::warning,
                             "clause terminated by ';' (expected '.'); split here",
                             t.span});
            diags.insert(diags.end(), sub_diags.begin(), sub_diags.end());
            std::vector<SourceClause> out;
            out.push_back(std::move(first));
            out.insert(out.end(), std::make_move_iterator(rest.begin()),
                       std::make_move_iterator(rest.end()));
            return out;
        }
        throw;
    }
}

void handle_directive(std::span<const Token> group, VarId& counter,
                      std::vector<Diagnostic>& diags) {
    ClauseParser p(group.subspan(1), counter);
    TermPtr t = p.parse_term(1200);
    p.expect_end();
    if (t->is_functor("include", 1)) {
        diags.push_back({Diagnostic::Severity::note,
                         "':-include' directive ignored (clause compilation is built in)",
                         group_span(group)});
    } else {
        diags.push_back({Diagnostic::Severity::warning,
                         "unsupported directive ignored", group_span(group)});
    }
}

}  // namespace

std::vector<Token> tokenize(std::string_view source,
                            std::shared_ptr<const std::string> file) {
    return tokenize_impl(source, std::move(file), nullptr);
}

ParseResult parse_program(std::string_view source, ParseMode mode,
                          std::shared_ptr<const std::string> file) {
    ParseResult res;
    const bool lenient = mode == ParseMode::lenient;
    std::vector<Token> tokens;
    try {
        tokens = tokenize_impl(source, std::move(file),
                               lenient ? &res.diagnostics : nullptr);
    } catch (const ParseError& e) {
        res.diagnostics.push_back(
            {Diagnostic::Severity::error, e.what(), e.span()});
        res.ok = false;
        return res;
    }
    if (count_errors(res.diagnostics) > 0) res.ok = false;

    VarId counter = 0;
    std::size_t begin = 0;
    while (begin + 1 < tokens.size()) {  // last token is eof
        std::size_t end = begin;
        while (tokens[end].kind != TokenKind::clause_end &&
               tokens[end].kind != TokenKind::eof)
            ++end;
        if (tokens[end].kind == TokenKind::eof) {
            res.diagnostics.push_back({Diagnostic::Severity::error,
                                       "expected '.' before end of input",
                                       tokens[end].span});
            res.ok = false;
            break;
        }
        std::span<const Token> group(tokens.data() + begin, end - begin + 1);
        begin = end + 1;

        try {
            if (group.front().kind == TokenKind::punct && group.front().text == ":-") {
                handle_directive(group, counter, res.diagnostics);
                continue;
            }
            auto clauses = parse_group(group, counter, res.diagnostics, lenient);
            for (auto& c : clauses) res.clauses.push_back(std::move(c));
        } catch (const ParseFail& f) {
            const Token& at =
                f.index < group.size() ? group[f.index] : group.back();
            res.diagnostics.push_back(
                {Diagnostic::Severity::error, f.message, at.span});
            res.ok = false;
            if (!lenient) break;  // strict: stop at the first error
        }
    }
    res.next_var = counter;
    return res;
}

SourceClause parse_clause_text(std::string_view source) {
    ParseResult res = parse_program(source, ParseMode::strict);
    if (!res.ok) {
        const Diagnostic& first = res.diagnostics.front();
        throw ParseError(first.message, first.span);
    }
    if (res.clauses.size() != 1)
        throw ParseError("expected exactly one clause", {});
    return std::move(res.clauses.front());
}

ParsedQuery parse_query_text(std::string_view source) {
    std::size_t i = 0;
    while (i < source.size() && is_layout(source[i])) ++i;
    if (source.substr(i).starts_with("?-")) i += 2;
    std::string text(source.substr(i));

    std::vector<Token> tokens = tokenize(text);
    // queries may omit the final '.'
    if (tokens.size() >= 2 && tokens[tokens.size() - 2].kind != TokenKind::clause_end) {
        Token end{TokenKind::clause_end, ".", tokens.back().span};
        tokens.insert(tokens.end() - 1, std::move(end));
    }
    if (tokens.size() < 2)
        throw ParseError("empty query", tokens.empty() ? SourceSpan{} : tokens.back().span);

    std::span<const Token> group(tokens.data(), tokens.size() - 1);
    VarId counter = 0;
    ClauseParser p(group, counter);
    ParsedQuery q;
    try {
        q.goal = p.parse_term(1200);
        p.expect_end();
    } catch (const ParseFail& f) {
        const Token& at = f.index < group.size() ? group[f.index] : tokens.back();
        throw ParseError(f.message, at.span);
    }
    q.vars = p.scope().order();
    q.next_var = counter;
    return q;
}

}  // namespace symlp
