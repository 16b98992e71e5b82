#include "symlp/term.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace symlp {

TermPtr Term::make_atom(std::string name) {
    return TermPtr(new Term(TermKind::atom, std::move(name), {}, 0, 0));
}

TermPtr Term::make_var(VarId id, std::string display) {
    return TermPtr(new Term(TermKind::var, std::move(display), {}, id, 0));
}

TermPtr Term::make_compound(std::string functor, std::vector<TermPtr> args) {
    return TermPtr(new Term(TermKind::compound, std::move(functor), std::move(args), 0, 0));
}

TermPtr Term::make_number(std::int64_t value) {
    return TermPtr(new Term(TermKind::number, {}, {}, 0, value));
}

bool structurally_equal(const TermPtr& a, const TermPtr& b) {
    std::vector<std::pair<const Term*, const Term*>> work{{a.get(), b.get()}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        if (x == y) continue;
        if (x->kind() != y->kind()) return false;
        switch (x->kind()) {
            case TermKind::atom:
                if (x->text() != y->text()) return false;
                break;
            case TermKind::var:
                if (x->var_id() != y->var_id()) return false;
                break;
            case TermKind::number:
                if (x->number_value() != y->number_value()) return false;
                break;
            case TermKind::compound:
                if (x->text() != y->text() || x->arity() != y->arity()) return false;
                for (std::size_t i = 0; i < x->arity(); ++i)
                    work.emplace_back(x->args()[i].get(), y->args()[i].get());
                break;
        }
    }
    return true;
}

bool equal_up_to_var_ids(const TermPtr& a, const TermPtr& b) {
    std::unordered_map<VarId, VarId> fwd, bwd;
    std::vector<std::pair<const Term*, const Term*>> work{{a.get(), b.get()}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        if (x->kind() != y->kind()) return false;
        switch (x->kind()) {
            case TermKind::atom:
                if (x->text() != y->text()) return false;
                break;
            case TermKind::number:
                if (x->number_value() != y->number_value()) return false;
                break;
            case TermKind::var: {
                if (x->text() != y->text()) return false;
                auto [fit, finserted] = fwd.emplace(x->var_id(), y->var_id());
                if (!finserted && fit->second != y->var_id()) return false;
                auto [bit, binserted] = bwd.emplace(y->var_id(), x->var_id());
                if (!binserted && bit->second != x->var_id()) return false;
                break;
            }
            case TermKind::compound:
                if (x->text() != y->text() || x->arity() != y->arity()) return false;
                // Push in reverse so variables are visited left to right.
                for (std::size_t i = x->arity(); i-- > 0;)
                    work.emplace_back(x->args()[i].get(), y->args()[i].get());
                break;
        }
    }
    return true;
}

bool is_ground(const TermPtr& t) {
    std::vector<const Term*> work{t.get()};
    while (!work.empty()) {
        const Term* x = work.back();
        work.pop_back();
        if (x->is_var()) return false;
        for (const auto& a : x->args()) work.push_back(a.get());
    }
    return true;
}

std::vector<TermPtr> collect_vars(const TermPtr& t) {
    std::vector<TermPtr> out;
    std::unordered_set<VarId> seen;
    std::vector<const TermPtr*> work{&t};
    while (!work.empty()) {
        const TermPtr* x = work.back();
        work.pop_back();
        if ((*x)->is_var()) {
            if (seen.insert((*x)->var_id()).second) out.push_back(*x);
            continue;
        }
        const auto& args = (*x)->args();
        for (std::size_t i = args.size(); i-- > 0;) work.push_back(&args[i]);
    }
    return out;
}

VarId max_var_id(const TermPtr& t) {
    VarId best = 0;
    std::vector<const Term*> work{t.get()};
    while (!work.empty()) {
        const Term* x = work.back();
        work.pop_back();
        if (x->is_var()) best = std::max(best, x->var_id());
        for (const auto& a : x->args()) work.push_back(a.get());
    }
    return best;
}

}  // namespace symlp
