#include "symlp/prop.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

#include "symlp/writer.hpp"

namespace symlp {

std::optional<PropProgram::AtomId> PropProgram::find_atom(std::string_view text) const {
    auto it = ids_.find(std::string(text));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

PropProgram::AtomId PropProgram::intern(const std::string& text) {
    auto [it, inserted] = ids_.emplace(text, static_cast<AtomId>(texts_.size()));
    if (inserted) texts_.push_back(text);
    return it->second;
}

namespace {

void collect_constraint_atoms(const TermPtr& tree, PropProgram& p,
                              std::vector<SourceSpan>& bad, const SourceSpan& span);

}  // namespace

PropProgram ground_check(const KnowledgeBase& kb) {
    PropProgram p;
    std::vector<SourceSpan> bad;

    for (Module m : {Module::truth, Module::falsity}) {
        for (const auto& clause : kb.clauses(m)) {
            bool ground = is_ground(clause.head);
            for (const auto& g : clause.body) ground = ground && is_ground(g.goal);
            if (!ground) {
                bad.push_back(clause.span);
                continue;
            }
            PropProgram::Clause pc;
            pc.mod = m;
            pc.span = clause.span;
            pc.head = p.intern(write_term(clause.head));
            for (const auto& g : clause.body) {
                const PropProgram::Node n =
                    PropProgram::node_of(g.mod, p.intern(write_term(g.goal)));
                if (g.naf) {
                    pc.naf.push_back(n);
                    p.has_naf_ = true;
                } else {
                    pc.body.push_back(n);
                }
            }
            p.total_body_ += pc.body.size();
            p.clauses_.push_back(std::move(pc));
        }
    }
    for (const auto& d : kb.denials()) {
        collect_constraint_atoms(d.body, p, bad, d.span);
        p.denials_.push_back(d);
    }
    for (const auto& a : kb.dual_assertions()) {
        collect_constraint_atoms(a.body, p, bad, a.span);
        p.dual_assertions_.push_back(a);
    }

    if (!bad.empty()) {
        std::string msg = "program is not propositional: " +
                          std::to_string(bad.size()) +
                          " clause(s) contain variables (first at " +
                          bad.front().location() + ")";
        throw PropError(PropErrorKind::not_propositional, std::move(msg),
                        std::move(bad));
    }

    p.occ_.assign(p.node_count(), {});
    for (std::uint32_t ci = 0; ci < p.clauses().size(); ++ci)
        for (const PropProgram::Node n : p.clauses()[ci].body)
            p.occ_[n].push_back(ci);
    return p;
}

namespace {

void collect_constraint_atoms(const TermPtr& tree, PropProgram& p,
                              std::vector<SourceSpan>& bad, const SourceSpan& span) {
    if (tree->is_functor(",", 2) || tree->is_functor(";", 2)) {
        collect_constraint_atoms(tree->args()[0], p, bad, span);
        collect_constraint_atoms(tree->args()[1], p, bad, span);
        return;
    }
    if (!is_ground(tree)) {
        bad.push_back(span);
        return;
    }
    if (tree->is_atom_named("true") || tree->is_atom_named("false")) return;
    p.intern(write_term(tree));
}

}  // namespace

std::vector<PropProgram::AtomId> Model::atoms(Module m) const {
    std::vector<PropProgram::AtomId> out;
    for (std::size_t n = m == Module::truth ? 0 : 1; n < truth_.size(); n += 2)
        if (truth_[n]) out.push_back(static_cast<PropProgram::AtomId>(n >> 1));
    return out;
}

Model minimal_model(const PropProgram& p, PropStats* stats) {
    if (p.has_naf())
        throw PropError(PropErrorKind::needs_stratification,
                        "program uses negation; evaluate it with the stratified "
                        "engine");
    Model model(p.node_count());
    std::vector<std::uint32_t> pending(p.clauses().size());
    std::vector<PropProgram::Node> queue;

    auto fire = [&](const PropProgram::Clause& c) {
        const PropProgram::Node h = PropProgram::node_of(c.mod, c.head);
        if (!model.holds_node(h)) {
            model.set(h);
            queue.push_back(h);
        }
    };

    for (std::uint32_t ci = 0; ci < p.clauses().size(); ++ci) {
        pending[ci] = static_cast<std::uint32_t>(p.clauses()[ci].body.size());
        if (pending[ci] == 0) {
            if (stats) ++stats->fired;
            fire(p.clauses()[ci]);
        }
    }
    while (!queue.empty()) {
        const PropProgram::Node n = queue.back();
        queue.pop_back();
        for (const std::uint32_t ci : p.occurrences(n)) {
            if (stats) ++stats->decrements;
            if (--pending[ci] == 0) {
                if (stats) ++stats->fired;
                fire(p.clauses()[ci]);
            }
        }
    }
    model.close();
    return model;
}

bool entails(const PropProgram& p, const Model& m, Module mod, std::string_view atom) {
    assert(m.closed());
    auto id = p.find_atom(atom);
    if (!id)
        throw PropError(PropErrorKind::unknown_atom,
                        "unknown atom: " + std::string(atom) +
                            " (not mentioned anywhere in the program)");
    return m.holds(mod, *id);
}

bool falsifies(const PropProgram& p, const Model& m, std::string_view atom) {
    return entails(p, m, Module::falsity, atom);
}

namespace {

// Truth of a denial body in the truth-side model: the constraint is violated
// when the whole conjunction holds.
bool denial_body_holds(const PropProgram& p, const Model& m, const TermPtr& tree) {
    if (tree->is_functor(",", 2))
        return denial_body_holds(p, m, tree->args()[0]) &&
               denial_body_holds(p, m, tree->args()[1]);
    if (tree->is_functor(";", 2))
        return denial_body_holds(p, m, tree->args()[0]) ||
               denial_body_holds(p, m, tree->args()[1]);
    if (tree->is_atom_named("true")) return true;
    if (tree->is_atom_named("false")) return false;
    auto id = p.find_atom(write_term(tree));
    return id && m.holds(Module::truth, *id);
}

// Constructive falsification of a dual-assertion body: a disjunction is
// falsified when every disjunct is, a conjunction when some conjunct is.
bool assertion_body_falsified(const PropProgram& p, const Model& m,
                              const TermPtr& tree) {
    if (tree->is_functor(";", 2))
        return assertion_body_falsified(p, m, tree->args()[0]) &&
               assertion_body_falsified(p, m, tree->args()[1]);
    if (tree->is_functor(",", 2))
        return assertion_body_falsified(p, m, tree->args()[0]) ||
               assertion_body_falsified(p, m, tree->args()[1]);
    if (tree->is_atom_named("true")) return false;
    if (tree->is_atom_named("false")) return true;
    auto id = p.find_atom(write_term(tree));
    return id && m.holds(Module::falsity, *id);
}

}  // namespace

std::vector<ConstraintViolation> check_constraints(const PropProgram& p,
                                                   const Model& m) {
    std::vector<ConstraintViolation> out;
    for (const auto& d : p.denials()) {
        if (denial_body_holds(p, m, d.body))
            out.push_back(
                {true, "false <= " + write_term(d.body, 1198), d.span});
    }
    for (const auto& a : p.dual_assertions()) {
        if (assertion_body_falsified(p, m, a.body))
            out.push_back(
                {false, "true => " + write_term(a.body, 1198), a.span});
    }
    return out;
}

namespace {

using Node = PropProgram::Node;

struct DepGraph {
    // out-edges head -> body goal, flagged negative for naf goals
    std::vector<std::vector<std::pair<Node, bool>>> out;

    explicit DepGraph(const PropProgram& p) : out(p.node_count()) {
        for (const auto& c : p.clauses()) {
            const Node h = PropProgram::node_of(c.mod, c.head);
            for (const Node b : c.body) out[h].emplace_back(b, false);
            for (const Node n : c.naf) out[h].emplace_back(n, true);
        }
    }
};

std::string node_name(const PropProgram& p, Node n) {
    return std::string(module_name(PropProgram::node_module(n))) + ":" +
           write_atom(p.atom_text(PropProgram::node_atom(n)));
}

// Tarjan, iterative. Components come out in reverse topological order of the
// condensation: dependencies complete before their dependents, which is
// exactly the evaluation order the stratified pass needs.
struct SccResult {
    std::vector<std::uint32_t> comp;          // node -> component id
    std::vector<std::vector<Node>> members;   // component id -> nodes
};

SccResult tarjan(const DepGraph& g) {
    constexpr std::uint32_t kUnset = UINT32_MAX;
    const std::size_t n = g.out.size();
    SccResult res;
    res.comp.assign(n, kUnset);
    std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
    std::vector<bool> onstack(n, false);
    std::vector<Node> stack;
    std::uint32_t next_index = 0;

    struct Frame {
        Node v;
        std::size_t edge;
    };
    std::vector<Frame> frames;

    for (Node v0 = 0; v0 < n; ++v0) {
        if (index[v0] != kUnset) continue;
        frames.push_back({v0, 0});
        index[v0] = low[v0] = next_index++;
        stack.push_back(v0);
        onstack[v0] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < g.out[f.v].size()) {
                const Node w = g.out[f.v][f.edge++].first;
                if (index[w] == kUnset) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    onstack[w] = true;
                    frames.push_back({w, 0});
                } else if (onstack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const Node v = f.v;
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            if (low[v] == index[v]) {
                const auto id = static_cast<std::uint32_t>(res.members.size());
                res.members.emplace_back();
                for (;;) {
                    const Node w = stack.back();
                    stack.pop_back();
                    onstack[w] = false;
                    res.comp[w] = id;
                    res.members.back().push_back(w);
                    if (w == v) break;
                }
            }
        }
    }
    return res;
}

// A negative edge u -> v inside one component witnesses non-stratification;
// the reported cycle is u -> v -> ... -> u through component-internal edges.
std::string render_cycle(const PropProgram& p, const DepGraph& g,
                         const SccResult& scc, Node u, Node v) {
    const std::uint32_t comp = scc.comp[u];
    std::vector<Node> parent(g.out.size(), UINT32_MAX);
    std::deque<Node> queue{v};
    while (!queue.empty()) {
        const Node x = queue.front();
        queue.pop_front();
        if (x == u) break;
        for (const auto& [y, neg] : g.out[x]) {
            if (scc.comp[y] != comp || parent[y] != UINT32_MAX || y == v) continue;
            parent[y] = x;
            queue.push_back(y);
        }
    }
    std::vector<Node> path{u};
    for (Node x = u; x != v && parent[x] != UINT32_MAX;) {
        x = parent[x];
        path.push_back(x);
    }
    std::reverse(path.begin(), path.end());  // v ... u
    std::string out = node_name(p, u) + " -> not " + node_name(p, v);
    for (std::size_t i = 1; i < path.size(); ++i)
        out += " -> " + node_name(p, path[i]);
    return out;
}

}  // namespace

Model stratified_eval(const PropProgram& p, PropStats* stats) {
    const DepGraph graph(p);
    const SccResult scc = tarjan(graph);
    Model model(p.node_count());

    // negative edge inside a component => not stratified
    for (const auto& c : p.clauses()) {
        const Node h = PropProgram::node_of(c.mod, c.head);
        for (const Node n : c.naf) {
            if (scc.comp[h] == scc.comp[n]) {
                const std::string witness = render_cycle(p, graph, scc, h, n);
                throw PropError(PropErrorKind::non_stratified,
                                "program is not stratified: " + witness, {c.span},
                                witness);
            }
        }
    }

    // group clauses by the component of their head
    std::vector<std::vector<std::uint32_t>> comp_clauses(scc.members.size());
    for (std::uint32_t ci = 0; ci < p.clauses().size(); ++ci) {
        const auto& c = p.clauses()[ci];
        comp_clauses[scc.comp[PropProgram::node_of(c.mod, c.head)]].push_back(ci);
    }

    std::vector<std::uint32_t> pending(p.clauses().size(), 0);
    std::vector<std::vector<std::uint32_t>> local_occ(p.node_count());
    std::vector<Node> queue;

    for (std::uint32_t comp = 0; comp < scc.members.size(); ++comp) {
        queue.clear();
        for (const Node n : scc.members[comp]) local_occ[n].clear();

        for (const std::uint32_t ci : comp_clauses[comp]) {
            const auto& c = p.clauses()[ci];
            bool alive = true;
            for (const Node n : c.naf)  // decided in a lower component
                alive = alive && !model.holds_node(n);
            if (!alive) continue;
            std::uint32_t local = 0;
            for (const Node b : c.body) {
                if (scc.comp[b] == comp) {
                    ++local;
                    local_occ[b].push_back(ci);
                } else if (!model.holds_node(b)) {
                    alive = false;
                    break;
                }
            }
            if (!alive) continue;
            pending[ci] = local;
            if (local == 0) {
                if (stats) ++stats->fired;
                const Node h = PropProgram::node_of(c.mod, c.head);
                if (!model.holds_node(h)) {
                    model.set(h);
                    queue.push_back(h);
                }
            }
        }
        while (!queue.empty()) {
            const Node n = queue.back();
            queue.pop_back();
            for (const std::uint32_t ci : local_occ[n]) {
                if (stats) ++stats->decrements;
                if (--pending[ci] == 0) {
                    if (stats) ++stats->fired;
                    const auto& c = p.clauses()[ci];
                    const Node h = PropProgram::node_of(c.mod, c.head);
                    if (!model.holds_node(h)) {
                        model.set(h);
                        queue.push_back(h);
                    }
                }
            }
        }
    }
    model.close();
    return model;
}

}  // namespace symlp
