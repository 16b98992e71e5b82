#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace symlp {

/// Half-open byte range plus 1-based line/column coordinates into a source
/// file. `file` is shared between all spans of one parse and may be null for
/// programmatically built clauses.
struct SourceSpan {
    std::shared_ptr<const std::string> file;
    std::uint32_t line = 0;
    std::uint32_t column = 0;
    std::uint32_t end_line = 0;
    std::uint32_t end_column = 0;
    std::size_t byte_begin = 0;
    std::size_t byte_end = 0;

    bool known() const { return line != 0; }
    std::string location() const;  // "file:line:col" (or "<input>:line:col")
};

struct Diagnostic {
    enum class Severity { note, warning, error };

    Severity severity = Severity::error;
    std::string message;
    SourceSpan span;

    std::string to_string() const;
};

std::size_t count_errors(const std::vector<Diagnostic>& diags);

}  // namespace symlp
