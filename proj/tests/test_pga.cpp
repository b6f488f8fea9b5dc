#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <random>

#include "testsupport.hpp"

using namespace mcalc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

} // namespace

TEST_CASE("corpus files round-trip byte for byte") {
    for (const char* name : {"i1", "i2", "div6", "max", "sc1", "sc2"}) {
        std::string text = slurp(std::string(CORPUS_DIR) + "/" + name + ".pga");
        CAPTURE(name);
        CHECK(print_instr_seq(parse_instr_seq(text)) == text);
    }
}

TEST_CASE("instruction syntax") {
    CHECK(print_instr_seq(parse_instr_seq(" a0.cp(x1) ; +a2.test:0 ; #3 ; ! ")) ==
          "a0.cp(x1);+a2.test:0;#3;!");
    CHECK(print_instr_seq(parse_instr_seq("'my action';-b;#0")) == "my action;-b;#0");
    CHECK(print_instr_seq(parse_instr_seq("a1.set:ai;a1.set:mi;a1.set:s;y.cp(a1);!")) ==
          "a1.set:ai;a1.set:mi;a1.set:s;y.cp(a1);!");
    CHECK_THROWS_AS(parse_instr_seq(""), ParseError);
    CHECK_THROWS_AS(parse_instr_seq("a0.set:2"), ParseError);
    CHECK_THROWS_AS(parse_instr_seq("a0.test:1"), ParseError);
    CHECK_THROWS_AS(parse_instr_seq("a0.cp(a1)"), ParseError); // cp reads inputs only
    CHECK_THROWS_AS(parse_instr_seq("y.set:1"), ParseError);
    CHECK_THROWS_AS(parse_instr_seq("(a)^w;b"), ParseError); // unreachable after repetition
    CHECK_THROWS_AS(parse_instr_seq("()^w"), ParseError);
}

TEST_CASE("second canonical form golden examples") {
    CHECK(print_instr_seq(second_canonical_form(parse_instr_seq("#2;a;(#5;b;+c)^w"))) ==
          "#4;a;(#2;b;+c)^w");
    CHECK(print_instr_seq(second_canonical_form(parse_instr_seq("+a;#2;(+b;#2;-c;#2)^w"))) ==
          "+a;#0;(+b;#0;-c;#0)^w");
}

TEST_CASE("second canonical form collapses chains and loops") {
    // chained jumps in a finite sequence
    CHECK(print_instr_seq(second_canonical_form(parse_instr_seq("#1;#1;a;!"))) ==
          "#2;#1;a;!");
    // jump to a #0 is itself a #0
    CHECK(print_instr_seq(second_canonical_form(parse_instr_seq("#1;#0;a;!"))) ==
          "#0;#0;a;!");
    // a jump loop inside a repetition
    CHECK(print_instr_seq(second_canonical_form(parse_instr_seq("(a;#1;#2)^w"))) ==
          "(a;#0;#0)^w");
    // wrapping jumps that do land on an action keep a reduced counter
    CHECK(print_instr_seq(second_canonical_form(parse_instr_seq("(a;#2;#2)^w"))) ==
          "(a;#2;#1)^w");
    // cycle counters are reduced modulo the period
    CHECK(print_instr_seq(second_canonical_form(parse_instr_seq("(a;#7)^w"))) == "(a;#1)^w");
}

TEST_CASE("second canonical form is idempotent and behavior preserving") {
    std::mt19937_64 rng(321);
    for (int i = 0; i < 200; ++i) {
        InstrSeq seq = testsupport::random_instr_seq(rng);
        InstrSeq canon = second_canonical_form(seq);
        CHECK(second_canonical_form(canon) == canon);
        CHECK(equiv_to_depth(extract(seq), extract(canon), 50));
    }
}

TEST_CASE("unfolding a repetition preserves the thread") {
    InstrSeq seq = parse_instr_seq("a;(b;+c;#2;!)^w");
    CHECK(print_instr_seq(unfold(seq, 1)) == "a;b;(+c;#2;!;b)^w");
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        InstrSeq s = testsupport::random_instr_seq(rng);
        for (std::size_t k : {1, 3}) CHECK(graph_equal(extract(s), extract(unfold(s, k))));
    }
}

TEST_CASE("register raising") {
    InstrSeq seq = parse_instr_seq("a0.cp(x0);a1.set:1;a0.set:a(a1);+a0.test:0;y.cp(a0);!");
    CHECK(print_instr_seq(raise_instr(seq)) ==
          "a1.cp(x0);a2.set:1;a1.set:a(a2);+a1.test:0;y.cp(a1);!");
}

TEST_CASE("straight-line recognition") {
    CHECK(parse_instr_seq(slurp(std::string(CORPUS_DIR) + "/i1.pga")).is_straight_line());
    CHECK_FALSE(parse_instr_seq(slurp(std::string(CORPUS_DIR) + "/i2.pga")).is_straight_line());
    CHECK_FALSE(parse_instr_seq("+a0.test:0;!").is_straight_line());
    CHECK_FALSE(parse_instr_seq("a0.test:0;!").is_straight_line());
    CHECK_FALSE(parse_instr_seq("#1;!").is_straight_line());
    CHECK_FALSE(parse_instr_seq("a0.set:0").is_straight_line()); // no halt
    CHECK_FALSE(parse_instr_seq("(a0.set:0;!)^w").is_straight_line());
}
