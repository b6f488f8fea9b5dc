#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "testsupport.hpp"

using namespace mcalc;
using testsupport::TermGen;

namespace {

unsigned input_span(const Term& t) {
    unsigned k = 0;
    for (const Var& v : free_vars(t))
        if (v.kind == VarKind::Input) k = std::max(k, v.index + 1);
    return k;
}

/// Semantic agreement on a full Z/nZ grid (small variable counts only).
bool agree_on_grid(const Term& a, const Term& b, std::uint64_t n) {
    Backend m = Backend::modular(n);
    unsigned k = std::max(input_span(a), input_span(b));
    std::vector<Value> inputs(k, Value::zero(m));
    auto rec = [&](auto&& self, unsigned pos) -> bool {
        if (pos == k) {
            Assignment st = Assignment::initial(m, inputs);
            return eval(a, st) == eval(b, st);
        }
        for (std::uint64_t r = 0; r < n; ++r) {
            inputs[pos] = Value::from_residue(m, r);
            if (!self(self, pos + 1)) return false;
        }
        return true;
    };
    return rec(rec, 0);
}

bool agree_on_rationals(const Term& a, const Term& b, int samples, std::mt19937_64& rng,
                        bool with_sign = false) {
    Backend q = with_sign ? Backend::signed_rational() : Backend::rational();
    unsigned k = std::max(input_span(a), input_span(b));
    for (int i = 0; i < samples; ++i) {
        Assignment st = Assignment::initial(q, testsupport::random_inputs(q, k, rng));
        if (!(eval(a, st) == eval(b, st))) return false;
    }
    return true;
}

} // namespace

TEST_CASE("polynomial canonicalization") {
    Term a = parse_term("(x0+x1)*(x0-x1)");
    Term b = parse_term("x0*x0-x1*x1");
    CHECK(term_eq(poly_term(poly_of_term(a)), poly_term(poly_of_term(b))));
    CHECK(poly_is_zero(poly_of_term(parse_term("x0-x0"))));
    CHECK(poly_is_one(poly_of_term(parse_term("2-1"))));
    CHECK_THROWS_AS(poly_of_term(parse_term("x0^-1")), UnsupportedOperation);
    CHECK_THROWS_AS(poly_of_term(parse_term("s(x0)")), UnsupportedOperation);
    // monomial expansion of 3*x0^2 + x1
    auto ms = poly_to_monomials(parse_term("3*x0*x0+x1"));
    CHECK(ms.size() == 2);
}

TEST_CASE("sum of quotients golden shapes") {
    SumOfQuotients s1 = to_sum_of_quotients(parse_term("((x0+2)*x0)^-1"));
    CHECK(s1.summands.size() == 1);
    CHECK(print_term(s1.to_term()) == "1/(2*x0+x0*x0)");

    SumOfQuotients s2 = to_sum_of_quotients(parse_term("1/x0+1/x1"));
    CHECK(s2.summands.size() == 2);
    CHECK(print_term(s2.to_term()) == "1/x0+1/x1");

    // the inverse of a quotient flips it: Md derives (s/t)^-1 = t/s
    SumOfQuotients s3 = to_sum_of_quotients(parse_term("(x0/x1)^-1"));
    CHECK(s3.summands.size() == 1);
    CHECK(print_term(s3.to_term()) == "x1/x0");

    // s/0 = 0 and denominator 1 summands stay polynomial
    SumOfQuotients s4 = to_sum_of_quotients(parse_term("x0/0+x1"));
    CHECK(print_term(s4.to_term()) == "x1");
}

TEST_CASE("standard meadow form grammar") {
    CHECK(print_term(smf_normalize(parse_term("0"))) == "0/1");
    CHECK(is_smf(smf_normalize(parse_term("0"))));
    Term t = parse_term("((x0+2)*x0)^-1");
    Term n = smf_normalize(t);
    CHECK(is_smf(n));
    Term u = parse_term("1/x0+1/x1");
    CHECK(is_smf(smf_normalize(u)));
    // a polynomial is already level 0 after normalization
    Term p = smf_normalize(parse_term("x0*x0+3"));
    CHECK(is_smf(p));
    CHECK(print_term(p) == "(3+x0*x0)/1");
    CHECK_FALSE(is_smf(parse_term("x0^-1^-1")));
    CHECK_FALSE(is_smf(parse_term("1/(1/x0)")));
}

TEST_CASE("normalizers preserve meaning in all backends") {
    TermGen gen(2024);
    gen.max_vars = 2;
    std::mt19937_64 rng(99);
    for (int i = 0; i < 60; ++i) {
        Term t = gen.gen_normalizable(4, 0, /*require_smf=*/true);
        Term soq = to_sum_of_quotients(t).to_term();
        Term smf = smf_normalize(t);
        CAPTURE(print_term(t));
        CHECK(is_smf(smf));
        CHECK(agree_on_grid(t, soq, 6)); // the non-cancellation meadow
        CHECK(agree_on_grid(t, smf, 6));
        CHECK(agree_on_grid(t, soq, 7));
        CHECK(agree_on_rationals(t, soq, 25, rng));
        CHECK(agree_on_rationals(t, smf, 25, rng));
    }
}

TEST_CASE("signed standard form splits each sign three ways") {
    SignedBranchForm f = signed_standard_form(parse_term("s(x0-x1)*x0"));
    REQUIRE(f.branches.size() == 3);
    for (const SignedBranch& br : f.branches) REQUIRE(br.guards.size() == 1);
    // branch order: s = 0, s = 1, s = -1
    CHECK(f.branches[0].guards[0].phi == GuardTerm::Phi::S);
    CHECK(f.branches[1].guards[0].phi == GuardTerm::Phi::OneMinusS);
    CHECK(f.branches[2].guards[0].phi == GuardTerm::Phi::OnePlusS);
    CHECK(term_eq(poly_term(poly_of_term(f.branches[1].body)), parse_term("x0")));

    std::mt19937_64 rng(5);
    CHECK(agree_on_rationals(parse_term("s(x0-x1)*x0"), f.to_term(), 50, rng, true));

    // nested signs: innermost first, 9 branches
    SignedBranchForm g = signed_standard_form(parse_term("s(x0+s(x1))"));
    CHECK(g.branches.size() == 9);
    std::mt19937_64 rng2(6);
    CHECK(agree_on_rationals(parse_term("s(x0+s(x1))"), g.to_term(), 50, rng2, true));

    CHECK_THROWS_AS(signed_standard_form(parse_term("s(x0^-1)")), UnsupportedOperation);
}

TEST_CASE("signed sum of quotients") {
    TermGen gen(77);
    gen.allow_sign = true;
    gen.max_vars = 2;
    std::mt19937_64 rng(13);
    for (int i = 0; i < 40; ++i) {
        Term t = gen.gen_normalizable(4);
        Term soq = to_sum_of_quotients_signed(t).to_term();
        CAPTURE(print_term(t));
        CHECK(agree_on_rationals(t, soq, 25, rng, true));
    }
}

TEST_CASE("depth guard") {
    // a quotient-sum inverse with 13 distinct denominators
    Term sum = t_inv(t_x(0));
    for (unsigned i = 1; i < 13; ++i) sum = t_add(sum, t_inv(t_x(i)));
    CHECK_THROWS_AS(to_sum_of_quotients(t_inv(sum)), DepthGuardExceeded);
    CHECK_THROWS_AS(smf_normalize(sum), DepthGuardExceeded);
    CHECK(to_sum_of_quotients(sum, 16).summands.size() >= 1); // raising the guard helps
    // 13 sign occurrences exceed the case-split guard
    Term signs = t_zero();
    for (unsigned i = 0; i < 13; ++i) signs = t_add(signs, t_sign(t_x(i % 3)));
    CHECK_THROWS_AS(signed_standard_form(signs), DepthGuardExceeded);
}
