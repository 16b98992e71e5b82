#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symlp/compiler.hpp"
#include "symlp/engine.hpp"
#include "symlp/prop.hpp"
#include "symlp/reader.hpp"

namespace symlp {

struct SessionConfig {
    ParseMode parse_mode = ParseMode::strict;
    EngineConfig engine;
    Module default_module = Module::truth;
};

/// Loaded program state shared by the CLI front ends: source files, the
/// compiled knowledge base, and accumulated diagnostics. Loading is
/// all-or-nothing; a file that fails to parse or compile leaves the session
/// untouched.
class Session {
public:
    explicit Session(SessionConfig config = {}) : config_(std::move(config)) {}

    /// Parse + compile a file and add it to the session. Returns false (and
    /// keeps the previous knowledge base) on error; diagnostics() has the
    /// details either way.
    bool load_file(const std::string& path);
    /// Same, from in-memory text under a display name.
    bool load_text(std::string name, std::string source);

    const KnowledgeBase& kb() const { return kb_; }
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
    const std::vector<std::string>& files() const { return file_names_; }

    SessionConfig& config() { return config_; }
    const SessionConfig& config() const { return config_; }

    /// Ground form and model, computed on demand and cached until the next
    /// load. Propagates PropError from ground_check / evaluation.
    const PropProgram& prop();
    const Model& model();

    /// True when every loaded clause is ground (cheap syntactic check).
    bool propositional();

private:
    struct Unit {
        std::string name;
        std::vector<SourceClause> clauses;
    };

    bool add_unit(Unit unit, std::vector<Diagnostic> parse_diags);
    void invalidate_cache();

    SessionConfig config_;
    std::vector<Unit> units_;
    std::vector<std::string> file_names_;
    KnowledgeBase kb_;
    std::vector<Diagnostic> diagnostics_;

    std::optional<PropProgram> prop_;
    std::optional<Model> model_;
    std::optional<bool> propositional_;
};

}  // namespace symlp
