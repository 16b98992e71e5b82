#include "symlp/diagnostics.hpp"

namespace symlp {

std::string SourceSpan::location() const {
    std::string out = file ? *file : std::string("<input>");
    if (known()) {
        out += ':';
        out += std::to_string(line);
        out += ':';
        out += std::to_string(column);
    }
    return out;
}

std::string Diagnostic::to_string() const {
    const char* tag = severity == Severity::error     ? "error"
                      : severity == Severity::warning ? "warning"
                                                      : "note";
    return span.location() + ": " + tag + ": " + message;
}

std::size_t count_errors(const std::vector<Diagnostic>& diags) {
    std::size_t n = 0;
    for (const auto& d : diags)
        if (d.severity == Diagnostic::Severity::error) ++n;
    return n;
}

}  // namespace symlp
