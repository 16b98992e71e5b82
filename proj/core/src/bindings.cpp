#include "symlp/bindings.hpp"

#include <algorithm>
#include <cassert>

namespace symlp {

void Bindings::undo_to(Checkpoint c) {
    assert(c <= trail_.size());
    while (trail_.size() > c) {
        map_.erase(trail_.back());
        trail_.pop_back();
    }
}

const TermPtr* Bindings::lookup(VarId id) const {
    auto it = map_.find(id);
    return it == map_.end() ? nullptr : &it->second;
}

void Bindings::bind(VarId id, TermPtr value) {
    assert(map_.find(id) == map_.end());
    map_.emplace(id, std::move(value));
    trail_.push_back(id);
}

TermPtr Bindings::fresh_var(std::string display) {
    return Term::make_var(fresh_id(), std::move(display));
}

std::vector<std::pair<VarId, TermPtr>> Bindings::snapshot() const {
    std::vector<std::pair<VarId, TermPtr>> out(map_.begin(), map_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

TermPtr deref(const Bindings& b, TermPtr t) {
    while (t->is_var()) {
        const TermPtr* bound = b.lookup(t->var_id());
        if (!bound) return t;
        t = *bound;
    }
    return t;
}

namespace {

bool occurs_in(VarId id, const TermPtr& t, const Bindings& b) {
    std::vector<TermPtr> work{t};
    while (!work.empty()) {
        TermPtr x = deref(b, work.back());
        work.pop_back();
        if (x->is_var()) {
            if (x->var_id() == id) return true;
            continue;
        }
        for (const auto& a : x->args()) work.push_back(a);
    }
    return false;
}

}  // namespace

bool unify(const TermPtr& t1, const TermPtr& t2, Bindings& b, bool occurs_check) {
    const Bindings::Checkpoint start = b.mark();
    std::vector<std::pair<TermPtr, TermPtr>> work{{t1, t2}};
    while (!work.empty()) {
        auto [raw_x, raw_y] = work.back();
        work.pop_back();
        TermPtr x = deref(b, raw_x);
        TermPtr y = deref(b, raw_y);
        if (x.get() == y.get()) continue;
        if (x->is_var()) {
            if (y->is_var() && y->var_id() == x->var_id()) continue;
            if (occurs_check && !y->is_var() && occurs_in(x->var_id(), y, b)) {
                b.undo_to(start);
                return false;
            }
            b.bind(x->var_id(), y);
            continue;
        }
        if (y->is_var()) {
            if (occurs_check && occurs_in(y->var_id(), x, b)) {
                b.undo_to(start);
                return false;
            }
            b.bind(y->var_id(), x);
            continue;
        }
        bool same = false;
        if (x->kind() == y->kind()) {
            switch (x->kind()) {
                case TermKind::atom:
                    same = x->text() == y->text();
                    break;
                case TermKind::number:
                    same = x->number_value() == y->number_value();
                    break;
                case TermKind::compound:
                    same = x->text() == y->text() && x->arity() == y->arity();
                    if (same)
                        for (std::size_t i = 0; i < x->arity(); ++i)
                            work.emplace_back(x->args()[i], y->args()[i]);
                    break;
                case TermKind::var:
                    break;  // handled above
            }
        }
        if (!same) {
            b.undo_to(start);
            return false;
        }
    }
    return true;
}

namespace {

// Variables on the current expansion path; revisiting one means the
// substitution is cyclic and the cycle point is rendered as '...'.
TermPtr apply_rec(const Bindings& b, TermPtr t, std::vector<VarId>& path) {
    std::size_t pushed = 0;
    while (t->is_var()) {
        const VarId id = t->var_id();
        const TermPtr* bound = b.lookup(id);
        if (!bound) break;
        if (std::find(path.begin(), path.end(), id) != path.end()) {
            t = Term::make_atom("...");
            break;
        }
        path.push_back(id);
        ++pushed;
        t = *bound;
    }
    TermPtr result = t;
    if (t->is_compound()) {
        bool changed = false;
        std::vector<TermPtr> args;
        args.reserve(t->arity());
        for (const auto& a : t->args()) {
            TermPtr na = apply_rec(b, a, path);
            changed = changed || na.get() != a.get();
            args.push_back(std::move(na));
        }
        if (changed) result = Term::make_compound(t->text(), std::move(args));
    }
    for (; pushed > 0; --pushed) path.pop_back();
    return result;
}

}  // namespace

TermPtr apply(const Bindings& b, const TermPtr& t) {
    std::vector<VarId> path;
    return apply_rec(b, t, path);
}

namespace {

TermPtr rename_rec(const TermPtr& t, Bindings& b,
                   std::unordered_map<VarId, TermPtr>& fresh) {
    switch (t->kind()) {
        case TermKind::atom:
        case TermKind::number:
            return t;
        case TermKind::var: {
            auto it = fresh.find(t->var_id());
            if (it != fresh.end()) return it->second;
            VarId id = b.fresh_id();
            TermPtr v = Term::make_var(id, "_G" + std::to_string(id));
            fresh.emplace(t->var_id(), v);
            return v;
        }
        case TermKind::compound: {
            bool changed = false;
            std::vector<TermPtr> args;
            args.reserve(t->arity());
            for (const auto& a : t->args()) {
                TermPtr na = rename_rec(a, b, fresh);
                changed = changed || na.get() != a.get();
                args.push_back(std::move(na));
            }
            if (!changed) return t;
            return Term::make_compound(t->text(), std::move(args));
        }
    }
    return t;
}

}  // namespace

std::vector<TermPtr> rename_apart(std::span<const TermPtr> roots, Bindings& b) {
    std::unordered_map<VarId, TermPtr> fresh;
    std::vector<TermPtr> out;
    out.reserve(roots.size());
    for (const auto& r : roots) out.push_back(rename_rec(r, b, fresh));
    return out;
}

TermPtr rename_apart(const TermPtr& root, Bindings& b) {
    std::unordered_map<VarId, TermPtr> fresh;
    return rename_rec(root, b, fresh);
}

}  // namespace symlp
