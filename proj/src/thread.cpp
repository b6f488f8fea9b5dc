#include "mcalc/thread.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace mcalc {

// ---------------------------------------------------------------------------
// Extraction.

namespace {

using Node = ThreadGraph::Node;

struct Extractor {
    const InstrSeq& seq;
    ThreadGraph g;
    std::vector<std::size_t> node_of; // position -> node id (jumps: dead placeholder)
    std::size_t dead = 0;

    std::size_t wrap(std::size_t pos) const {
        std::size_t n = seq.prefix.size();
        if (seq.has_cycle() && pos >= seq.length()) return n + (pos - n) % seq.cycle.size();
        return pos;
    }

    /// Follows jump chains iteratively; loops, #0 and off-end targets
    /// deadlock.
    std::size_t resolve(std::size_t pos) {
        pos = wrap(pos);
        std::set<std::size_t> visited;
        for (;;) {
            if (pos >= seq.length()) return dead;
            if (seq.at(pos).kind != PrimInstr::Kind::Jump) return node_of[pos];
            if (!visited.insert(pos).second) return dead;
            std::uint64_t k = seq.at(pos).jump;
            if (k == 0) return dead;
            pos = wrap(pos + k);
        }
    }

    void build() {
        g.nodes.push_back({Node::Kind::Dead, {}, 0, 0}); // shared dead state
        node_of.assign(seq.length(), dead);
        for (std::size_t p = 0; p < seq.length(); ++p)
            if (seq.at(p).kind != PrimInstr::Kind::Jump) {
                node_of[p] = g.nodes.size();
                g.nodes.push_back({});
            }
        for (std::size_t p = 0; p < seq.length(); ++p) {
            const PrimInstr& ins = seq.at(p);
            Node node;
            switch (ins.kind) {
                case PrimInstr::Kind::Jump: continue;
                case PrimInstr::Kind::Halt: node.kind = Node::Kind::Stop; break;
                case PrimInstr::Kind::Plain:
                    node.kind = Node::Kind::Post;
                    node.action = ins.core;
                    node.then_ = node.else_ = resolve(p + 1);
                    break;
                case PrimInstr::Kind::PosTest:
                    node.kind = Node::Kind::Post;
                    node.action = ins.core;
                    node.then_ = resolve(p + 1);
                    node.else_ = resolve(p + 2);
                    break;
                case PrimInstr::Kind::NegTest:
                    node.kind = Node::Kind::Post;
                    node.action = ins.core;
                    node.then_ = resolve(p + 2);
                    node.else_ = resolve(p + 1);
                    break;
            }
            g.nodes[node_of[p]] = node;
        }
        g.root = resolve(0);
    }
};

std::vector<std::size_t> reachable(const ThreadGraph& g) {
    std::vector<std::size_t> order;
    std::vector<bool> seen(g.nodes.size(), false);
    std::vector<std::size_t> stack{g.root};
    while (!stack.empty()) {
        std::size_t id = stack.back();
        stack.pop_back();
        if (seen[id]) continue;
        seen[id] = true;
        order.push_back(id);
        const Node& n = g.nodes[id];
        if (n.kind == Node::Kind::Post) {
            stack.push_back(n.else_);
            stack.push_back(n.then_);
        }
    }
    return order;
}

} // namespace

ThreadGraph extract(const InstrSeq& seq) {
    Extractor ex{seq};
    ex.build();
    return ex.g;
}

bool is_finite(const ThreadGraph& g) {
    enum { White, Grey, Black };
    std::vector<int> color(g.nodes.size(), White);
    auto dfs = [&](auto&& self, std::size_t id) -> bool { // true = no cycle below
        if (color[id] == Black) return true;
        if (color[id] == Grey) return false;
        color[id] = Grey;
        const Node& n = g.nodes[id];
        if (n.kind == Node::Kind::Post) {
            if (!self(self, n.then_)) return false;
            if (n.else_ != n.then_ && !self(self, n.else_)) return false;
        }
        color[id] = Black;
        return true;
    };
    return dfs(dfs, g.root);
}

bool is_test_free(const ThreadGraph& g) {
    for (std::size_t id : reachable(g)) {
        const Node& n = g.nodes[id];
        if (n.kind == Node::Kind::Post && n.then_ != n.else_) return false;
    }
    return true;
}

ThreadGraph project(const ThreadGraph& g, std::size_t n) {
    ThreadGraph out;
    // builds a tree; only meant for small n
    auto rec = [&](auto&& self, std::size_t id, std::size_t depth) -> std::size_t {
        const Node& node = g.nodes[id];
        if (node.kind != Node::Kind::Post || depth == 0) {
            std::size_t fresh = out.nodes.size();
            // pi_0 of anything is D
            out.nodes.push_back({depth == 0 ? Node::Kind::Dead : node.kind, {}, 0, 0});
            return fresh;
        }
        std::size_t fresh = out.nodes.size();
        out.nodes.push_back({});
        std::size_t t = self(self, node.then_, depth - 1);
        std::size_t e = node.then_ == node.else_ ? t : self(self, node.else_, depth - 1);
        out.nodes[fresh] = {Node::Kind::Post, node.action, t, e};
        return fresh;
    };
    out.root = rec(rec, g.root, n);
    return out;
}

bool equiv_to_depth(const ThreadGraph& a, const ThreadGraph& b, std::size_t n) {
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> done;
    auto rec = [&](auto&& self, std::size_t ia, std::size_t ib, std::size_t d) -> bool {
        if (d == 0) return true;
        if (!done.insert({ia, ib, d}).second) return true;
        const Node& na = a.nodes[ia];
        const Node& nb = b.nodes[ib];
        if (na.kind != nb.kind) return false;
        if (na.kind != Node::Kind::Post) return true;
        if (!(na.action == nb.action)) return false;
        return self(self, na.then_, nb.then_, d - 1) &&
               self(self, na.else_, nb.else_, d - 1);
    };
    return rec(rec, a.root, b.root, n);
}

bool graph_equal(const ThreadGraph& a, const ThreadGraph& b) {
    std::set<std::pair<std::size_t, std::size_t>> visited;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{a.root, b.root}};
    while (!stack.empty()) {
        auto [ia, ib] = stack.back();
        stack.pop_back();
        if (!visited.insert({ia, ib}).second) continue;
        const Node& na = a.nodes[ia];
        const Node& nb = b.nodes[ib];
        if (na.kind != nb.kind) return false;
        if (na.kind != Node::Kind::Post) continue;
        if (!(na.action == nb.action)) return false;
        stack.push_back({na.then_, nb.then_});
        stack.push_back({na.else_, nb.else_});
    }
    return true;
}

ThreadGraph minimize(const ThreadGraph& g) {
    std::vector<std::size_t> order = reachable(g);
    std::map<std::size_t, std::size_t> block; // node id -> block id
    { // initial split by kind and action
        std::map<std::string, std::size_t> key_block;
        for (std::size_t id : order) {
            const Node& n = g.nodes[id];
            std::string key = n.kind == Node::Kind::Stop   ? "S"
                              : n.kind == Node::Kind::Dead ? "D"
                                                           : "P:" + n.action.str();
            auto [it, _] = key_block.try_emplace(key, key_block.size());
            block[id] = it->second;
        }
    }
    for (;;) { // refine until stable
        std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> key_block;
        std::map<std::size_t, std::size_t> next;
        for (std::size_t id : order) {
            const Node& n = g.nodes[id];
            std::tuple<std::size_t, std::size_t, std::size_t> key{block[id], 0, 0};
            if (n.kind == Node::Kind::Post)
                key = {block[id], block[n.then_] + 1, block[n.else_] + 1};
            auto [it, _] = key_block.try_emplace(key, key_block.size());
            next[id] = it->second;
        }
        if (next == block) break;
        block = std::move(next);
    }
    // quotient, states numbered by first visit from the root
    ThreadGraph out;
    std::map<std::size_t, std::size_t> renum; // block id -> new id
    std::vector<std::size_t> rep;             // new id -> representative node
    auto visit = [&](auto&& self, std::size_t id) -> std::size_t {
        std::size_t b = block[id];
        if (auto it = renum.find(b); it != renum.end()) return it->second;
        std::size_t fresh = out.nodes.size();
        renum[b] = fresh;
        out.nodes.push_back({});
        const Node& n = g.nodes[id];
        Node copy = n;
        if (n.kind == Node::Kind::Post) {
            copy.then_ = self(self, n.then_);
            copy.else_ = self(self, n.else_);
        }
        out.nodes[fresh] = copy;
        return fresh;
    };
    out.root = visit(visit, g.root);
    return out;
}

ThreadGraph raise_thread(const ThreadGraph& g) {
    ThreadGraph out = g;
    for (Node& n : out.nodes)
        if (n.kind == Node::Kind::Post) n.action = raise_core(n.action);
    return out;
}

std::string print_thread(const ThreadGraph& g) {
    // breadth-first numbering from the root
    std::map<std::size_t, std::size_t> num;
    std::vector<std::size_t> queue{g.root};
    num[g.root] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const Node& n = g.nodes[queue[i]];
        if (n.kind != Node::Kind::Post) continue;
        for (std::size_t child : {n.then_, n.else_})
            if (num.try_emplace(child, num.size()).second) queue.push_back(child);
    }
    std::string out;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const Node& n = g.nodes[queue[i]];
        std::string line = "T" + std::to_string(i) + " = ";
        switch (n.kind) {
            case Node::Kind::Stop: line += "S"; break;
            case Node::Kind::Dead: line += "D"; break;
            case Node::Kind::Post:
                if (n.then_ == n.else_)
                    line += n.action.str() + " o T" + std::to_string(num[n.then_]);
                else
                    line += "T" + std::to_string(num[n.then_]) + " <| " + n.action.str() +
                            " |> T" + std::to_string(num[n.else_]);
                break;
        }
        out += line;
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// The apply operator and runs.

namespace {

/// Applies one core action to the state; the return value is the reply.
bool apply_core(const CoreInstr& c, Assignment& st) {
    Var a = Var::aux(c.aux);
    const Backend& b = st.backend();
    switch (c.op) {
        case CoreInstr::Op::Cp: st.set(a, st.get(Var::input(c.arg))); return true;
        case CoreInstr::Op::Set0: st.set(a, Value::zero(b)); return true;
        case CoreInstr::Op::Set1: st.set(a, Value::one(b)); return true;
        case CoreInstr::Op::SetAi: st.set(a, neg(st.get(a))); return true;
        case CoreInstr::Op::SetMi: st.set(a, inv(st.get(a))); return true;
        case CoreInstr::Op::SetA: st.set(a, add(st.get(a), st.get(Var::aux(c.arg)))); return true;
        case CoreInstr::Op::SetM: st.set(a, mul(st.get(a), st.get(Var::aux(c.arg)))); return true;
        case CoreInstr::Op::SetS: st.set(a, sign(st.get(a))); return true;
        case CoreInstr::Op::OutCp: st.set(Var::output(), st.get(Var::aux(c.arg))); return true;
        case CoreInstr::Op::Test0: return st.get(a).is_zero();
        case CoreInstr::Op::Opaque:
            throw UnsupportedOperation("cannot apply the abstract action '" + c.name + "'");
    }
    return true;
}

} // namespace

RunOutcome apply_thread(const ThreadGraph& g, Assignment state, std::uint64_t bound) {
    std::size_t cur = g.root;
    std::uint64_t steps = 0;
    for (;;) {
        const Node& n = g.nodes[cur];
        switch (n.kind) {
            case Node::Kind::Stop:
                return {RunOutcome::Status::Terminated, state.get(Var::output()), steps};
            case Node::Kind::Dead: return {RunOutcome::Status::Deadlock, {}, steps};
            case Node::Kind::Post: {
                if (steps == bound) return {RunOutcome::Status::BoundExhausted, {}, steps};
                bool reply = apply_core(n.action, state);
                ++steps;
                cur = reply ? n.then_ : n.else_;
                break;
            }
        }
    }
}

RunOutcome run(const InstrSeq& seq, const Backend& backend,
               const std::vector<Value>& inputs, std::uint64_t bound) {
    return apply_thread(extract(seq), Assignment::initial(backend, inputs), bound);
}

// ---------------------------------------------------------------------------
// Finite threads as terms.

namespace {

/// The value written by the action, as a term over the pre-state.
std::pair<Var, Term> effect_term(const CoreInstr& c) {
    Term a = t_var(Var::aux(c.aux));
    switch (c.op) {
        case CoreInstr::Op::Cp: return {Var::aux(c.aux), t_x(c.arg)};
        case CoreInstr::Op::Set0: return {Var::aux(c.aux), t_zero()};
        case CoreInstr::Op::Set1: return {Var::aux(c.aux), t_one()};
        case CoreInstr::Op::SetAi: return {Var::aux(c.aux), t_neg(a)};
        case CoreInstr::Op::SetMi: return {Var::aux(c.aux), t_inv(a)};
        case CoreInstr::Op::SetA:
            return {Var::aux(c.aux), t_add(a, t_var(Var::aux(c.arg)))};
        case CoreInstr::Op::SetM:
            return {Var::aux(c.aux), t_mul(a, t_var(Var::aux(c.arg)))};
        case CoreInstr::Op::SetS: return {Var::aux(c.aux), t_sign(a)};
        case CoreInstr::Op::OutCp: return {Var::output(), t_var(Var::aux(c.arg))};
        default:
            throw UnsupportedOperation("no state effect for '" + c.str() + "'");
    }
}

} // namespace

Term thread_to_term(const ThreadGraph& g, unsigned num_inputs) {
    if (!is_finite(g))
        throw UnsupportedOperation("thread_to_term needs a finite thread");
    std::map<std::size_t, Term> memo;
    // y as seen from this state, as a function of the state variables
    auto rec = [&](auto&& self, std::size_t id) -> Term {
        if (auto it = memo.find(id); it != memo.end()) return it->second;
        const Node& n = g.nodes[id];
        Term t;
        switch (n.kind) {
            case Node::Kind::Stop:
            case Node::Kind::Dead: t = t_var(Var::output()); break;
            case Node::Kind::Post: {
                if (n.action.is_assignment()) {
                    auto [v, e] = effect_term(n.action);
                    t = substitute(self(self, n.then_), {{v, e}});
                } else { // zero test: reply true iff a_i = 0
                    Term probe = t_var(Var::aux(n.action.aux));
                    t = t_add(t_mul(t_pseudo_zero(probe), self(self, n.then_)),
                              t_mul(t_pseudo_unit(probe), self(self, n.else_)));
                }
                break;
            }
        }
        memo[id] = t;
        return t;
    };
    Term t = rec(rec, g.root);
    std::map<Var, Term> zero;
    for (const Var& v : free_vars(t))
        if (v.kind != VarKind::Input || v.index >= num_inputs) zero[v] = t_zero();
    return zero.empty() ? t : substitute(t, zero);
}

} // namespace mcalc
