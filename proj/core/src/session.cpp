#include "symlp/session.hpp"

#include <fstream>
#include <sstream>

namespace symlp {

bool Session::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        diagnostics_ = {{Diagnostic::Severity::error,
                         "cannot open file: " + path,
                         SourceSpan{std::make_shared<const std::string>(path)}}};
        return false;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_text(path, buf.str());
}

bool Session::load_text(std::string name, std::string source) {
    auto file = std::make_shared<const std::string>(name);
    ParseResult parsed = parse_program(source, config_.parse_mode, file);
    if (!parsed.ok) {
        diagnostics_ = std::move(parsed.diagnostics);
        return false;
    }
    return add_unit({std::move(name), std::move(parsed.clauses)},
                    std::move(parsed.diagnostics));
}

bool Session::add_unit(Unit unit, std::vector<Diagnostic> parse_diags) {
    std::vector<SourceClause> all;
    for (const auto& u : units_)
        all.insert(all.end(), u.clauses.begin(), u.clauses.end());
    all.insert(all.end(), unit.clauses.begin(), unit.clauses.end());

    CompileResult compiled = compile_program(all);
    diagnostics_ = std::move(parse_diags);
    diagnostics_.insert(diagnostics_.end(), compiled.diagnostics.begin(),
                        compiled.diagnostics.end());
    if (!compiled.ok) return false;  // session unchanged

    units_.push_back(std::move(unit));
    file_names_.push_back(units_.back().name);
    kb_ = std::move(compiled.kb);
    invalidate_cache();
    return true;
}

void Session::invalidate_cache() {
    prop_.reset();
    model_.reset();
    propositional_.reset();
}

const PropProgram& Session::prop() {
    if (!prop_) prop_ = ground_check(kb_);
    return *prop_;
}

const Model& Session::model() {
    if (!model_) {
        const PropProgram& p = prop();
        model_ = p.has_naf() ? stratified_eval(p) : minimal_model(p);
    }
    return *model_;
}

bool Session::propositional() {
    if (!propositional_) {
        try {
            prop();
            propositional_ = true;
        } catch (const PropError&) {
            propositional_ = false;
        }
    }
    return *propositional_;
}

}  // namespace symlp
