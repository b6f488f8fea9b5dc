#ifndef MCALC_THREAD_HPP
#define MCALC_THREAD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mcalc/pga.hpp"
#include "mcalc/term.hpp"

namespace mcalc {

/// A regular thread over core actions: finitely many states, each either
/// terminated (S), deadlocked (D), or a postconditional composition
/// then <| action |> else. Action prefixing is the degenerate case
/// then == else.
struct ThreadGraph {
    struct Node {
        enum class Kind { Stop, Dead, Post };
        Kind kind = Kind::Dead;
        CoreInstr action;           // Post only
        std::size_t then_ = 0;      // taken on reply true
        std::size_t else_ = 0;      // taken on reply false
    };

    std::vector<Node> nodes;
    std::size_t root = 0;
};

/// Thread extraction |seq|. Jump chains are resolved transitively; jump
/// loops, #0 and missing continuations become D.
ThreadGraph extract(const InstrSeq& seq);

bool is_finite(const ThreadGraph& g);    // no state reachable from itself
bool is_test_free(const ThreadGraph& g); // every Post has then_ == else_

/// Approximation pi_n as a tree: every state at depth n becomes D.
ThreadGraph project(const ThreadGraph& g, std::size_t n);

/// pi_n(a) == pi_n(b), without materializing the trees.
bool equiv_to_depth(const ThreadGraph& a, const ThreadGraph& b, std::size_t n);

/// Bisimilarity of the two roots (equality of the denoted threads).
bool graph_equal(const ThreadGraph& a, const ThreadGraph& b);

/// Smallest bisimilar graph, states in traversal order from the root.
ThreadGraph minimize(const ThreadGraph& g);

/// Every a_i in every action becomes a_{i+1}.
ThreadGraph raise_thread(const ThreadGraph& g);

/// Linear recursion equations T0 = ..., one per reachable state.
std::string print_thread(const ThreadGraph& g);

struct RunOutcome {
    enum class Status { Terminated, BoundExhausted, Deadlock };
    Status status = Status::Deadlock;
    Value result;        // Terminated only: final value of y
    std::uint64_t steps = 0; // actions performed
};

/// Applies the thread to a state. Each action (assignment or test) costs
/// one step; exceeding bound yields BoundExhausted. Opaque actions throw.
RunOutcome apply_thread(const ThreadGraph& g, Assignment state, std::uint64_t bound);

/// The k-input run [[seq]]^k: extract, start from the initial state with
/// the given inputs, apply.
RunOutcome run(const InstrSeq& seq, const Backend& backend,
               const std::vector<Value>& inputs, std::uint64_t bound);

/// For a finite thread: the term over x_0..x_{k-1} whose value at any
/// initial state equals y after the thread terminates. Built backwards by
/// substitution; tests become 0_a/1_a branches.
Term thread_to_term(const ThreadGraph& g, unsigned num_inputs);

} // namespace mcalc

#endif
