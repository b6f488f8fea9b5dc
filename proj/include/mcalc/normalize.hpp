#ifndef MCALC_NORMALIZE_HPP
#define MCALC_NORMALIZE_HPP

#include <cstddef>
#include <vector>

#include "mcalc/term.hpp"

namespace mcalc {

inline constexpr std::size_t kDefaultDepthGuard = 12;

// ---------------------------------------------------------------------------
// Polynomials as canonical monomial lists.

struct Monomial {
    BigInt coeff;
    std::vector<Var> vars; // sorted, with multiplicity

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Canonical polynomial: monomials sorted by (total degree, lexicographic
/// variables), zero coefficients dropped.
using Poly = std::vector<Monomial>;

Poly poly_of_term(const Term& t); // throws on Inv/Sign nodes
Term poly_term(const Poly& p);    // canonical term, empty sum is 0
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_const(const BigInt& n);
bool poly_is_zero(const Poly& p);
bool poly_is_one(const Poly& p);

/// Expands a polynomial term into its monomials.
std::vector<Monomial> poly_to_monomials(const Term& p);

// ---------------------------------------------------------------------------
// Sum-of-quotients and Standard Meadow Form.

struct Quotient {
    Term num, den; // both polynomial terms (signed variant: Sign allowed)
};

struct SumOfQuotients {
    std::vector<Quotient> summands; // nonempty; denotes sum of num*den^-1
    Term to_term() const;
};

/// Rewrites t (Sign-free) into a sum of quotients of polynomials,
/// evaluation-equal in every meadow backend.
SumOfQuotients to_sum_of_quotients(const Term& t, std::size_t depth_guard = kDefaultDepthGuard);

/// Signed variant: numerators and denominators are signed polynomials.
SumOfQuotients to_sum_of_quotients_signed(const Term& t,
                                          std::size_t depth_guard = kDefaultDepthGuard);

/// Standard Meadow Form of a Sign-free term.
Term smf_normalize(const Term& t, std::size_t depth_guard = kDefaultDepthGuard);

/// Checks the SMF grammar: quotient of polynomials, or 0_p*s + 1_p*u with a
/// polynomial guard and SMF branches.
bool is_smf(const Term& t);

// ---------------------------------------------------------------------------
// Signed standard form (case split over sign subterms).

struct GuardTerm {
    enum class Phi { S, OnePlusS, OneMinusS };
    Phi phi;
    Term arg; // polynomial under the sign
    Term to_term() const; // 0_{phi(s(arg))}
};

struct SignedBranch {
    std::vector<GuardTerm> guards;
    Term body; // polynomial
};

struct SignedBranchForm {
    std::vector<SignedBranch> branches;
    Term to_term() const;
};

/// Case-splits every sign subterm of a signed polynomial (no Inv) into
/// s(t') in {0, 1, -1}, innermost first; at most 3^n branches.
SignedBranchForm signed_standard_form(const Term& t,
                                      std::size_t depth_guard = kDefaultDepthGuard);

} // namespace mcalc

#endif
