#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <random>

#include "testsupport.hpp"

using namespace mcalc;

namespace {

InstrSeq load(const char* name) {
    std::ifstream in(std::string(CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_instr_seq(s);
}

using Node = ThreadGraph::Node;

ThreadGraph graph(std::vector<Node> nodes, std::size_t root = 0) {
    return ThreadGraph{std::move(nodes), root};
}

Node post(const char* a, std::size_t then_, std::size_t else_) {
    return {Node::Kind::Post, ins_opaque(a), then_, else_};
}
Node stop() { return {Node::Kind::Stop, {}, 0, 0}; }
Node dead() { return {Node::Kind::Dead, {}, 0, 0}; }

} // namespace

TEST_CASE("extraction of the regular-thread example") {
    ThreadGraph g = extract(parse_instr_seq("a;(+b;#2;#3;c;#4;+d;!;a)^w"));
    // T = a o T'   and   T' = c o T' <| b |> (S <| d |> T)
    ThreadGraph expected = graph({
        post("a", 1, 1),
        post("b", 2, 3),
        post("c", 1, 1),
        post("d", 4, 0),
        stop(),
    });
    CHECK(graph_equal(g, expected));
    CHECK_FALSE(is_finite(g));
    CHECK_FALSE(is_test_free(g));
    CHECK(minimize(g).nodes.size() == 5);
    CHECK(print_thread(minimize(g)) ==
          "T0 = a o T1\n"
          "T1 = T2 <| b |> T3\n"
          "T2 = c o T1\n"
          "T3 = T4 <| d |> T0\n"
          "T4 = S\n");
}

TEST_CASE("projections of the regular-thread example") {
    ThreadGraph g = extract(parse_instr_seq("a;(+b;#2;#3;c;#4;+d;!;a)^w"));
    CHECK(graph_equal(project(g, 0), graph({dead()})));
    CHECK(graph_equal(project(g, 1), graph({post("a", 1, 1), dead()})));
    CHECK(graph_equal(project(g, 2), graph({post("a", 1, 1), post("b", 2, 2), dead()})));
    ThreadGraph pi3 = graph({
        post("a", 1, 1),
        post("b", 2, 4),
        post("c", 3, 3),
        dead(),
        post("d", 5, 5),
        dead(),
    });
    CHECK(graph_equal(project(g, 3), pi3));
    for (std::size_t n : {1, 5, 20}) CHECK(equiv_to_depth(project(g, n), g, n));
    CHECK_FALSE(equiv_to_depth(project(g, 3), g, 4));
}

TEST_CASE("bisimulation equality distinguishes threads") {
    ThreadGraph one = graph({post("a", 0, 0)});           // a looping on itself
    ThreadGraph two = graph({post("a", 1, 1), post("a", 0, 0)}); // two-state loop
    CHECK(graph_equal(one, two));
    CHECK(minimize(two).nodes.size() == 1);
    ThreadGraph other = graph({post("b", 0, 0)});
    CHECK_FALSE(graph_equal(one, other));
    CHECK(equiv_to_depth(one, other, 0));
    CHECK_FALSE(equiv_to_depth(one, other, 1));
}

TEST_CASE("first example sequence computes its inverse term in 8 steps") {
    InstrSeq i1 = load("i1.pga");
    ThreadGraph g = extract(i1);
    CHECK(is_finite(g));
    CHECK(is_test_free(g));

    Backend q = Backend::rational();
    std::mt19937_64 rng(17);
    Term t = parse_term("((x0+2)*x0)^-1");
    for (int i = 0; i < 50; ++i) {
        Value x = testsupport::random_rational(q, rng);
        RunOutcome out = run(i1, q, {x}, 8);
        REQUIRE(out.status == RunOutcome::Status::Terminated);
        CHECK(out.steps == 8);
        CHECK(out.result == eval(t, Assignment::initial(q, {x})));
    }
    CHECK(run(i1, q, {Value::from_int(q, 2)}, 7).status == RunOutcome::Status::BoundExhausted);

    // the extracted thread as a term
    CHECK(term_eq(thread_to_term(g, 1), t));
}

TEST_CASE("second example sequence computes powers within 3n+7 steps") {
    InstrSeq i2 = load("i2.pga");
    Backend q = Backend::rational();
    std::mt19937_64 rng(19);
    for (unsigned n = 0; n <= 30; ++n) {
        Value x = testsupport::random_rational(q, rng);
        RunOutcome out = run(i2, q, {x, Value::from_int(q, n)}, 3 * n + 7);
        REQUIRE(out.status == RunOutcome::Status::Terminated);
        CHECK(out.steps == 3 * n + 7);
        CHECK(out.result.rational() == testsupport::rat_pow(x.rational(), n));
    }
    // non-natural exponents never reach the exit test
    RunOutcome div = run(i2, q, {Value::from_int(q, 2), Value::parse(q, "1/2")}, 500);
    CHECK(div.status == RunOutcome::Status::BoundExhausted);
}

TEST_CASE("the doubling program separates cancellation from non-cancellation") {
    InstrSeq p = load("div6.pga");
    Backend q = Backend::rational();
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        RunOutcome out = run(p, q, {testsupport::random_rational(q, rng)}, 1000);
        REQUIRE(out.status == RunOutcome::Status::Terminated);
        CHECK(out.result.is_zero());
    }
    Backend m7 = Backend::modular(7);
    for (std::uint64_t r = 0; r < 7; ++r) {
        RunOutcome out = run(p, m7, {Value::from_residue(m7, r)}, 1000);
        REQUIRE(out.status == RunOutcome::Status::Terminated);
        CHECK(out.result.is_zero());
    }
    // on Z/6Z the input 3 doubles to 0 and runs into a #0
    Backend m6 = Backend::modular(6);
    RunOutcome out = run(p, m6, {Value::from_residue(m6, 3)}, 1000000);
    CHECK(out.status == RunOutcome::Status::Deadlock);
}

TEST_CASE("the max example agrees with the built-in maximum") {
    InstrSeq m = load("max.pga");
    Backend qs = Backend::signed_rational();
    std::mt19937_64 rng(29);
    for (int i = 0; i < 200; ++i) {
        Value x = testsupport::random_rational(qs, rng);
        Value y = testsupport::random_rational(qs, rng);
        RunOutcome out = run(m, qs, {x, y}, 1000);
        REQUIRE(out.status == RunOutcome::Status::Terminated);
        const BigRat& expected = x.rational() > y.rational() ? x.rational() : y.rational();
        CHECK(out.result.rational() == expected);
    }
}

TEST_CASE("terms from threads with tests") {
    // y = 1 if x0 = 0 else y = x0
    InstrSeq seq = parse_instr_seq(
        "a0.cp(x0);+a0.test:0;#3;a1.cp(x0);y.cp(a1);!;a1.set:1;y.cp(a1);!");
    ThreadGraph g = extract(seq);
    CHECK(is_finite(g));
    CHECK_FALSE(is_test_free(g));
    Term t = thread_to_term(g, 1);
    Backend q = Backend::rational();
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        Value x = testsupport::random_rational(q, rng);
        Assignment a = Assignment::initial(q, {x});
        RunOutcome out = apply_thread(g, a, 100);
        REQUIRE(out.status == RunOutcome::Status::Terminated);
        CHECK(eval(t, a) == out.result);
    }
    // infinite threads have no finite term
    CHECK_THROWS_AS(thread_to_term(extract(parse_instr_seq("(a0.set:0)^w")), 0),
                    UnsupportedOperation);
}

TEST_CASE("raising a thread shifts every register") {
    ThreadGraph g = extract(parse_instr_seq("a0.set:1;a1.set:a(a0);y.cp(a1);!"));
    ThreadGraph r = raise_thread(g);
    ThreadGraph expected =
        extract(parse_instr_seq("a1.set:1;a2.set:a(a1);y.cp(a2);!"));
    CHECK(graph_equal(r, expected));
}

TEST_CASE("opaque actions cannot be applied") {
    ThreadGraph g = extract(parse_instr_seq("a;!"));
    CHECK_THROWS_AS(apply_thread(g, Assignment(Backend::rational()), 10),
                    UnsupportedOperation);
}
