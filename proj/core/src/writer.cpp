#include "symlp/writer.hpp"

#include <cctype>

namespace symlp {

namespace {

struct OpInfo {
    int prec;
    int left_max;   // max priority of the left argument
    int right_max;  // max priority of the right argument
};

// ','/';'/':' are the only operators written infix; '=>' and '<=' appear at
// clause level only and are handled by write_clause.
const OpInfo* infix_info(const TermPtr& t) {
    static const OpInfo comma{1000, 999, 1000};
    static const OpInfo semi{1100, 1099, 1100};
    static const OpInfo colon{200, 199, 200};
    if (!t->is_compound() || t->arity() != 2) return nullptr;
    if (t->text() == ",") return &comma;
    if (t->text() == ";") return &semi;
    if (t->text() == ":") return &colon;
    return nullptr;
}

void write_rec(std::string& out, const TermPtr& t, int max_prec);

void write_args(std::string& out, const TermPtr& t) {
    out += '(';
    for (std::size_t i = 0; i < t->arity(); ++i) {
        if (i) out += ',';
        write_rec(out, t->args()[i], 999);
    }
    out += ')';
}

void write_rec(std::string& out, const TermPtr& t, int max_prec) {
    switch (t->kind()) {
        case TermKind::atom:
            out += write_atom(t->text());
            return;
        case TermKind::var:
            out += t->text();
            return;
        case TermKind::number:
            out += std::to_string(t->number_value());
            return;
        case TermKind::compound: {
            if (const OpInfo* op = infix_info(t)) {
                const bool parens = op->prec > max_prec;
                if (parens) out += '(';
                write_rec(out, t->args()[0], op->left_max);
                if (t->text() == ":")
                    out += ':';
                else if (t->text() == ",")
                    out += ", ";
                else
                    out += " ; ";
                write_rec(out, t->args()[1], op->right_max);
                if (parens) out += ')';
                return;
            }
            out += write_atom(t->text());
            write_args(out, t);
            return;
        }
    }
}

}  // namespace

bool atom_needs_quotes(std::string_view text) {
    if (text.empty()) return true;
    if (!std::islower(static_cast<unsigned char>(text[0]))) return true;
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (!std::isalnum(u) && c != '_') return true;
    }
    return false;
}

std::string write_atom(std::string_view text) {
    if (!atom_needs_quotes(text)) return std::string(text);
    std::string out;
    out.reserve(text.size() + 2);
    out += '\'';
    for (char c : text) {
        if (c == '\'') out += "''";
        else out += c;
    }
    out += '\'';
    return out;
}

std::string write_term(const TermPtr& t) { return write_term(t, 1200); }

std::string write_term(const TermPtr& t, int max_prec) {
    std::string out;
    write_rec(out, t, max_prec);
    return out;
}

std::string write_clause(const SourceClause& c) {
    std::string out;
    switch (c.kind) {
        case ClauseKind::horn_rule:
            write_rec(out, c.head, 1198);
            out += " <= ";
            write_rec(out, c.body, 1198);
            break;
        case ClauseKind::positive_fact:
            out += '+';
            write_rec(out, c.head, 199);
            break;
        case ClauseKind::dual_rule:
            write_rec(out, c.head, 1198);
            out += " => ";
            write_rec(out, c.body, 1198);
            break;
        case ClauseKind::negative_fact:
            out += '-';
            write_rec(out, c.head, 199);
            break;
        case ClauseKind::denial:
            out += "false <= ";
            write_rec(out, c.body, 1198);
            break;
        case ClauseKind::dual_assertion:
            out += "true => ";
            write_rec(out, c.body, 1198);
            break;
    }
    out += '.';
    return out;
}

}  // namespace symlp
