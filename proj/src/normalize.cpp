#include "mcalc/normalize.hpp"

#include <algorithm>

namespace mcalc {

// ---------------------------------------------------------------------------
// Polynomial arithmetic on canonical monomial lists.

namespace {

bool mono_key_less(const Monomial& a, const Monomial& b) {
    if (a.vars.size() != b.vars.size()) return a.vars.size() < b.vars.size();
    return a.vars < b.vars;
}

Poly normalized(std::vector<Monomial> ms) {
    std::sort(ms.begin(), ms.end(), mono_key_less);
    Poly out;
    for (auto& m : ms) {
        if (!out.empty() && out.back().vars == m.vars) {
            out.back().coeff += m.coeff;
        } else {
            out.push_back(std::move(m));
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const Monomial& m) { return m.coeff == 0; }),
              out.end());
    return out;
}

} // namespace

Poly poly_const(const BigInt& n) {
    if (n == 0) return {};
    return {Monomial{n, {}}};
}

bool poly_is_zero(const Poly& p) { return p.empty(); }

bool poly_is_one(const Poly& p) {
    return p.size() == 1 && p[0].vars.empty() && p[0].coeff == 1;
}

Poly poly_add(const Poly& a, const Poly& b) {
    std::vector<Monomial> ms(a);
    ms.insert(ms.end(), b.begin(), b.end());
    return normalized(std::move(ms));
}

Poly poly_neg(const Poly& a) {
    Poly out = a;
    for (auto& m : out) m.coeff = -m.coeff;
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    std::vector<Monomial> ms;
    ms.reserve(a.size() * b.size());
    for (const auto& ma : a)
        for (const auto& mb : b) {
            Monomial m;
            m.coeff = ma.coeff * mb.coeff;
            m.vars = ma.vars;
            m.vars.insert(m.vars.end(), mb.vars.begin(), mb.vars.end());
            std::sort(m.vars.begin(), m.vars.end());
            ms.push_back(std::move(m));
        }
    return normalized(std::move(ms));
}

Poly poly_of_term(const Term& t) {
    switch (t->op) {
        case TermOp::Zero: return {};
        case TermOp::One: return poly_const(1);
        case TermOp::VarRef: return {Monomial{1, {t->var}}};
        case TermOp::Add: return poly_add(poly_of_term(t->lhs), poly_of_term(t->rhs));
        case TermOp::Mul: return poly_mul(poly_of_term(t->lhs), poly_of_term(t->rhs));
        case TermOp::Neg: return poly_neg(poly_of_term(t->lhs));
        case TermOp::Inv: throw UnsupportedOperation("not a polynomial: contains an inverse");
        case TermOp::Sign: throw UnsupportedOperation("not a polynomial: contains a sign");
    }
    throw Error("corrupt term");
}

namespace {

Term monomial_term(const Monomial& m) {
    BigInt c = m.coeff < 0 ? -m.coeff : m.coeff;
    Term t;
    if (m.vars.empty()) {
        t = t_num(c);
    } else {
        std::size_t i = 0;
        if (c == 1) {
            t = t_var(m.vars[i++]);
        } else {
            t = t_num(c);
        }
        for (; i < m.vars.size(); ++i) t = t_mul(t, t_var(m.vars[i]));
    }
    return m.coeff < 0 ? t_neg(t) : t;
}

} // namespace

Term poly_term(const Poly& p) {
    if (p.empty()) return t_zero();
    Term t = monomial_term(p[0]);
    for (std::size_t i = 1; i < p.size(); ++i) t = t_add(t, monomial_term(p[i]));
    return t;
}

std::vector<Monomial> poly_to_monomials(const Term& p) { return poly_of_term(p); }

// ---------------------------------------------------------------------------
// Sum of quotients, polynomial flavour.

namespace {

struct PQuot {
    Poly num, den;
};
using PSum = std::vector<PQuot>; // empty sum denotes 0

// width guards: case splits square sizes at every step, so normalization
// must fail fast instead of exhausting memory
constexpr std::size_t kMaxPolyMonomials = 1u << 16;
constexpr std::size_t kMaxSumWidth = 1u << 12;

Poly poly_mul_checked(const Poly& a, const Poly& b) {
    if (a.size() * b.size() > kMaxPolyMonomials)
        throw DepthGuardExceeded("polynomial product of " +
                                 std::to_string(a.size() * b.size()) +
                                 " monomials exceeds the width guard");
    return poly_mul(a, b);
}

void check_width(const PSum& sum) {
    if (sum.size() > kMaxSumWidth)
        throw DepthGuardExceeded("quotient sum of " + std::to_string(sum.size()) +
                                 " summands exceeds the width guard");
}

bool den_safe(const PQuot& q) { return poly_is_one(q.den); }

void push_quot(PSum& sum, PQuot q) {
    if (poly_is_zero(q.num)) return;
    if (poly_is_zero(q.den)) return; // s/0 = s*0 = 0
    // pull a constant -1 denominator into the numerator
    if (q.den.size() == 1 && q.den[0].vars.empty() && q.den[0].coeff == -1) {
        q.num = poly_neg(q.num);
        q.den = poly_const(1);
    }
    for (auto& other : sum) {
        if (other.den == q.den) {
            other.num = poly_add(other.num, q.num);
            if (poly_is_zero(other.num))
                sum.erase(sum.begin() + (&other - sum.data()));
            return;
        }
    }
    sum.push_back(std::move(q));
}

// Multiplies a guard prefix into a quotient and appends the expansion:
//   1_p * s/t = (p*s)/(p*t)
//   0_p * s/t = s/t - (p*s)/(p*t)
void push_guarded(PSum& out, const std::vector<std::pair<Poly, bool>>& guards, PQuot leaf) {
    PSum acc{std::move(leaf)};
    for (const auto& [p, is_unit] : guards) {
        PSum next;
        check_width(acc);
        for (const auto& q : acc) {
            PQuot scaled{poly_mul_checked(p, q.num), poly_mul_checked(p, q.den)};
            if (is_unit) {
                push_quot(next, std::move(scaled));
            } else {
                push_quot(next, q);
                scaled.num = poly_neg(scaled.num);
                push_quot(next, std::move(scaled));
            }
        }
        acc = std::move(next);
    }
    for (auto& q : acc) push_quot(out, std::move(q));
}

class SoqBuilder {
public:
    explicit SoqBuilder(std::size_t guard) : guard_(guard) {}

    PSum build(const Term& t) {
        switch (t->op) {
            case TermOp::Zero: return {};
            case TermOp::One: return {{poly_const(1), poly_const(1)}};
            case TermOp::VarRef: return {{Poly{Monomial{1, {t->var}}}, poly_const(1)}};
            case TermOp::Neg: {
                PSum s = build(t->lhs);
                for (auto& q : s) q.num = poly_neg(q.num);
                return s;
            }
            case TermOp::Add: {
                PSum a = build(t->lhs);
                PSum b = build(t->rhs);
                PSum out;
                for (auto& q : a) push_quot(out, std::move(q));
                for (auto& q : b) push_quot(out, std::move(q));
                return out;
            }
            case TermOp::Mul: {
                PSum a = build(t->lhs);
                PSum b = build(t->rhs);
                PSum out;
                if (a.size() * b.size() > kMaxSumWidth)
                    throw DepthGuardExceeded("quotient sum of " +
                                             std::to_string(a.size() * b.size()) +
                                             " summands exceeds the width guard");
                for (const auto& qa : a)
                    for (const auto& qb : b)
                        push_quot(out, {poly_mul_checked(qa.num, qb.num),
                                        poly_mul_checked(qa.den, qb.den)});
                return out;
            }
            case TermOp::Inv: return invert(build(t->lhs));
            case TermOp::Sign:
                throw UnsupportedOperation("sum-of-quotients requires a sign-free term; "
                            "apply the signed standard form first");
        }
        throw Error("corrupt term");
    }

    // (sum)^-1 by case split over the non-trivial denominators. Each subset
    // of invertible denominators yields one guarded single-quotient leaf.
    PSum invert(const PSum& sum) {
        if (sum.empty()) return {}; // 0^-1 = 0
        if (sum.size() == 1) {
            PSum out;
            push_quot(out, {sum[0].den, sum[0].num});
            return out;
        }
        std::vector<PQuot> safe, risky;
        for (const auto& q : sum) (den_safe(q) ? safe : risky).push_back(q);
        if (risky.size() > guard_)
            throw DepthGuardExceeded(
                "inversion case split over " + std::to_string(risky.size()) +
                " denominators exceeds the depth guard");
        PSum out;
        std::vector<std::pair<Poly, bool>> guards;
        std::vector<const PQuot*> kept(safe.size());
        for (std::size_t i = 0; i < safe.size(); ++i) kept[i] = &safe[i];
        subset_rec(risky, 0, guards, kept, out);
        return out;
    }

private:
    void subset_rec(const std::vector<PQuot>& risky, std::size_t i,
                    std::vector<std::pair<Poly, bool>>& guards,
                    std::vector<const PQuot*>& kept, PSum& out) {
        if (i == risky.size()) {
            if (kept.empty()) return; // inverse of 0 contributes nothing
            check_width(out);
            Poly big_num = poly_const(1); // product of denominators
            for (const auto* q : kept) big_num = poly_mul_checked(big_num, q->den);
            Poly big_den; // sum over common denominator
            for (std::size_t a = 0; a < kept.size(); ++a) {
                Poly part = kept[a]->num;
                for (std::size_t b = 0; b < kept.size(); ++b)
                    if (b != a) part = poly_mul_checked(part, kept[b]->den);
                big_den = poly_add(big_den, part);
            }
            push_guarded(out, guards, {std::move(big_num), std::move(big_den)});
            return;
        }
        guards.emplace_back(risky[i].den, false); // denominator not invertible
        subset_rec(risky, i + 1, guards, kept, out);
        guards.back().second = true;
        kept.push_back(&risky[i]);
        subset_rec(risky, i + 1, guards, kept, out);
        kept.pop_back();
        guards.pop_back();
    }

    std::size_t guard_;
};

} // namespace

Term SumOfQuotients::to_term() const {
    Term t = nullptr;
    for (const auto& q : summands) {
        Term piece = term_eq(q.den, t_one()) ? q.num : t_div(q.num, q.den);
        t = t ? t_add(t, piece) : piece;
    }
    return t ? t : t_zero();
}

SumOfQuotients to_sum_of_quotients(const Term& t, std::size_t depth_guard) {
    if (contains_sign(t))
        throw UnsupportedOperation("sum-of-quotients requires a sign-free term; "
                    "apply the signed standard form first");
    PSum sum = SoqBuilder(depth_guard).build(t);
    SumOfQuotients out;
    for (const auto& q : sum) out.summands.push_back({poly_term(q.num), poly_term(q.den)});
    if (out.summands.empty()) out.summands.push_back({t_zero(), t_one()});
    return out;
}

// ---------------------------------------------------------------------------
// Standard Meadow Form.

namespace {

struct SmfItem {
    PQuot quot;
    bool assumed_unit = false;
};

Term smf_leaf(const std::vector<SmfItem>& items) {
    if (items.empty()) return t_div(t_zero(), t_one());
    Poly num, den = poly_const(1);
    for (const auto& it : items) den = poly_mul_checked(den, it.quot.den);
    for (std::size_t a = 0; a < items.size(); ++a) {
        Poly part = items[a].quot.num;
        for (std::size_t b = 0; b < items.size(); ++b)
            if (b != a) part = poly_mul_checked(part, items[b].quot.den);
        num = poly_add(num, part);
    }
    return t_div(poly_term(num), poly_term(den));
}

Term smf_rec(std::vector<SmfItem> items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].assumed_unit || den_safe(items[i].quot)) continue;
        Term guard = poly_term(items[i].quot.den);
        std::vector<SmfItem> dropped = items;
        dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(i));
        items[i].assumed_unit = true;
        Term zero_branch = smf_rec(std::move(dropped));
        Term unit_branch = smf_rec(std::move(items));
        return t_add(t_mul(t_pseudo_zero(guard), zero_branch),
                     t_mul(t_pseudo_unit(guard), unit_branch));
    }
    return smf_leaf(items);
}

} // namespace

Term smf_normalize(const Term& t, std::size_t depth_guard) {
    if (contains_sign(t)) throw UnsupportedOperation("SMF requires a sign-free term");
    PSum sum = SoqBuilder(depth_guard).build(t);
    std::size_t risky = 0;
    for (const auto& q : sum)
        if (!den_safe(q)) ++risky;
    if (risky > depth_guard)
        throw DepthGuardExceeded("SMF case split over " + std::to_string(risky) +
                                 " denominators exceeds the depth guard");
    std::vector<SmfItem> items;
    for (auto& q : sum) items.push_back({std::move(q), false});
    return smf_rec(std::move(items));
}

namespace {

bool is_poly_term(const Term& t) { return !contains_inv(t) && !contains_sign(t); }

// matches p * p^-1 for one polynomial p; yields p
bool match_pseudo_unit(const Term& t, Term& p) {
    if (t->op != TermOp::Mul || t->rhs->op != TermOp::Inv) return false;
    if (!term_eq(t->lhs, t->rhs->lhs)) return false;
    if (!is_poly_term(t->lhs)) return false;
    p = t->lhs;
    return true;
}

// matches 1 + -(p * p^-1)
bool match_pseudo_zero(const Term& t, Term& p) {
    if (t->op != TermOp::Add || t->lhs->op != TermOp::One || t->rhs->op != TermOp::Neg)
        return false;
    return match_pseudo_unit(t->rhs->lhs, p);
}

} // namespace

bool is_smf(const Term& t) {
    // level 0: s/t over polynomials
    if (t->op == TermOp::Mul && t->rhs->op == TermOp::Inv && is_poly_term(t->lhs) &&
        is_poly_term(t->rhs->lhs))
        return true;
    // level n+1: 0_p * s + 1_p * u
    if (t->op != TermOp::Add) return false;
    const Term& l = t->lhs;
    const Term& r = t->rhs;
    if (l->op != TermOp::Mul || r->op != TermOp::Mul) return false;
    Term p0, p1;
    if (!match_pseudo_zero(l->lhs, p0)) return false;
    if (!match_pseudo_unit(r->lhs, p1)) return false;
    if (!term_eq(p0, p1)) return false;
    return is_smf(l->rhs) && is_smf(r->rhs);
}

// ---------------------------------------------------------------------------
// Signed standard form.

namespace {

// innermost sign subterm (argument itself sign-free), or null
Term find_innermost_sign(const Term& t) {
    switch (t->op) {
        case TermOp::Sign: {
            Term inner = find_innermost_sign(t->lhs);
            return inner ? inner : t;
        }
        case TermOp::Add:
        case TermOp::Mul: {
            Term l = find_innermost_sign(t->lhs);
            return l ? l : find_innermost_sign(t->rhs);
        }
        case TermOp::Neg:
        case TermOp::Inv: return find_innermost_sign(t->lhs);
        default: return nullptr;
    }
}

Term replace_all(const Term& t, const Term& what, const Term& with) {
    if (term_eq(t, what)) return with;
    switch (t->op) {
        case TermOp::Add: return t_add(replace_all(t->lhs, what, with), replace_all(t->rhs, what, with));
        case TermOp::Mul: return t_mul(replace_all(t->lhs, what, with), replace_all(t->rhs, what, with));
        case TermOp::Neg: return t_neg(replace_all(t->lhs, what, with));
        case TermOp::Inv: return t_inv(replace_all(t->lhs, what, with));
        case TermOp::Sign: return t_sign(replace_all(t->lhs, what, with));
        default: return t;
    }
}

std::size_t count_signs(const Term& t) {
    switch (t->op) {
        case TermOp::Sign: return 1 + count_signs(t->lhs);
        case TermOp::Add:
        case TermOp::Mul: return count_signs(t->lhs) + count_signs(t->rhs);
        case TermOp::Neg:
        case TermOp::Inv: return count_signs(t->lhs);
        default: return 0;
    }
}

void split_rec(const Term& t, std::vector<GuardTerm>& guards,
               std::vector<SignedBranch>& out) {
    Term st = find_innermost_sign(t);
    if (!st) {
        out.push_back({guards, poly_term(poly_of_term(t))});
        return;
    }
    struct Case {
        GuardTerm::Phi phi;
        Term value;
    };
    const Case cases[3] = {{GuardTerm::Phi::S, t_zero()},
                           {GuardTerm::Phi::OneMinusS, t_one()},
                           {GuardTerm::Phi::OnePlusS, t_neg(t_one())}};
    for (const auto& c : cases) {
        guards.push_back({c.phi, st->lhs});
        split_rec(replace_all(t, st, c.value), guards, out);
        guards.pop_back();
    }
}

} // namespace

Term GuardTerm::to_term() const {
    Term phi_term;
    switch (phi) {
        case Phi::S: phi_term = t_sign(arg); break;
        case Phi::OnePlusS: phi_term = t_add(t_one(), t_sign(arg)); break;
        case Phi::OneMinusS: phi_term = t_sub(t_one(), t_sign(arg)); break;
    }
    return t_pseudo_zero(phi_term);
}

Term SignedBranchForm::to_term() const {
    Term sum = nullptr;
    for (const auto& b : branches) {
        Term piece = b.body;
        for (auto it = b.guards.rbegin(); it != b.guards.rend(); ++it)
            piece = t_mul(it->to_term(), piece);
        sum = sum ? t_add(sum, piece) : piece;
    }
    return sum ? sum : t_zero();
}

SignedBranchForm signed_standard_form(const Term& t, std::size_t depth_guard) {
    if (contains_inv(t))
        throw UnsupportedOperation("signed standard form requires an inverse-free term; "
                    "use the sum-of-quotients machinery first");
    if (count_signs(t) > depth_guard)
        throw DepthGuardExceeded("sign case split over " + std::to_string(count_signs(t)) +
                                 " subterms exceeds the depth guard");
    SignedBranchForm form;
    std::vector<GuardTerm> guards;
    split_rec(t, guards, form.branches);
    return form;
}

// ---------------------------------------------------------------------------
// Signed sum of quotients: same construction over signed-polynomial terms.

namespace {

struct SQuot {
    Term num, den;
};
using SSum = std::vector<SQuot>;

bool is_literal_zero(const Term& t) {
    auto n = as_numeral(t);
    return n && *n == 0;
}

void push_squot(SSum& sum, SQuot q) {
    if (is_literal_zero(q.num)) return;
    if (is_literal_zero(q.den)) return;
    if (auto n = as_numeral(q.den); n && *n == -1) {
        q.num = t_neg(q.num);
        q.den = t_one();
    }
    for (auto& other : sum) {
        if (term_eq(other.den, q.den)) {
            other.num = t_add(other.num, q.num);
            return;
        }
    }
    sum.push_back(std::move(q));
}

bool sden_safe(const SQuot& q) {
    auto n = as_numeral(q.den);
    return n && *n == 1;
}

class SignedSoqBuilder {
public:
    explicit SignedSoqBuilder(std::size_t guard) : guard_(guard) {}

    SSum build(const Term& t) {
        switch (t->op) {
            case TermOp::Zero: return {};
            case TermOp::One: return {{t_one(), t_one()}};
            case TermOp::VarRef: return {{t_var(t->var), t_one()}};
            case TermOp::Neg: {
                SSum s = build(t->lhs);
                for (auto& q : s) q.num = t_neg(q.num);
                return s;
            }
            case TermOp::Add: {
                SSum a = build(t->lhs);
                SSum out;
                for (auto& q : a) push_squot(out, std::move(q));
                for (auto& q : build(t->rhs)) push_squot(out, std::move(q));
                return out;
            }
            case TermOp::Mul: {
                SSum a = build(t->lhs);
                SSum b = build(t->rhs);
                SSum out;
                if (a.size() * b.size() > kMaxSumWidth)
                    throw DepthGuardExceeded("quotient sum of " +
                                             std::to_string(a.size() * b.size()) +
                                             " summands exceeds the width guard");
                for (const auto& qa : a)
                    for (const auto& qb : b)
                        push_squot(out, {t_mul(qa.num, qb.num), t_mul(qa.den, qb.den)});
                return out;
            }
            case TermOp::Inv: {
                SSum s = build(t->lhs);
                return collapse(s, /*then_sign=*/false);
            }
            case TermOp::Sign: {
                SSum s = build(t->lhs);
                if (s.empty()) return {}; // s(0) = 0
                if (s.size() == 1 && sden_safe(s[0]))
                    return {{t_sign(s[0].num), t_one()}};
                return collapse(s, /*then_sign=*/true);
            }
        }
        throw Error("corrupt term");
    }

private:
    // Case split on denominators; leaves are either the flipped quotient
    // (inverse) or s(num)*s(den) over 1 (sign of a quotient).
    SSum collapse(const SSum& sum, bool then_sign) {
        if (sum.empty()) return {};
        if (sum.size() == 1 && !then_sign) {
            SSum out;
            push_squot(out, {sum[0].den, sum[0].num});
            return out;
        }
        std::vector<SQuot> safe, risky;
        for (const auto& q : sum) (sden_safe(q) ? safe : risky).push_back(q);
        if (risky.size() > guard_)
            throw DepthGuardExceeded(
                "signed case split over " + std::to_string(risky.size()) +
                " denominators exceeds the depth guard");
        SSum out;
        std::vector<std::pair<Term, bool>> guards;
        std::vector<const SQuot*> kept;
        for (const auto& q : safe) kept.push_back(&q);
        subset_rec(risky, 0, then_sign, guards, kept, out);
        return out;
    }

    void subset_rec(const std::vector<SQuot>& risky, std::size_t i, bool then_sign,
                    std::vector<std::pair<Term, bool>>& guards,
                    std::vector<const SQuot*>& kept, SSum& out) {
        if (i == risky.size()) {
            if (kept.empty()) return; // 0^-1 = s(0) = 0
            if (out.size() > kMaxSumWidth)
                throw DepthGuardExceeded("quotient sum of " + std::to_string(out.size()) +
                                         " summands exceeds the width guard");
            Term den = nullptr; // product of kept denominators
            for (const auto* q : kept) den = den ? t_mul(den, q->den) : q->den;
            Term num = nullptr; // sum over the common denominator
            for (std::size_t a = 0; a < kept.size(); ++a) {
                Term part = kept[a]->num;
                for (std::size_t b = 0; b < kept.size(); ++b)
                    if (b != a) part = t_mul(part, kept[b]->den);
                num = num ? t_add(num, part) : part;
            }
            SQuot leaf = then_sign ? SQuot{t_mul(t_sign(num), t_sign(den)), t_one()}
                                   : SQuot{den, num};
            // expand the guard prefix into plain quotients
            SSum acc{std::move(leaf)};
            for (const auto& [p, is_unit] : guards) {
                SSum next;
                if (acc.size() > kMaxSumWidth)
                    throw DepthGuardExceeded("quotient sum of " +
                                             std::to_string(acc.size()) +
                                             " summands exceeds the width guard");
                for (const auto& q : acc) {
                    SQuot scaled{t_mul(p, q.num), t_mul(p, q.den)};
                    if (is_unit) {
                        push_squot(next, std::move(scaled));
                    } else {
                        push_squot(next, q);
                        scaled.num = t_neg(scaled.num);
                        push_squot(next, std::move(scaled));
                    }
                }
                acc = std::move(next);
            }
            for (auto& q : acc) push_squot(out, std::move(q));
            return;
        }
        guards.emplace_back(risky[i].den, false);
        subset_rec(risky, i + 1, then_sign, guards, kept, out);
        guards.back().second = true;
        kept.push_back(&risky[i]);
        subset_rec(risky, i + 1, then_sign, guards, kept, out);
        kept.pop_back();
        guards.pop_back();
    }

    std::size_t guard_;
};

} // namespace

SumOfQuotients to_sum_of_quotients_signed(const Term& t, std::size_t depth_guard) {
    SSum sum = SignedSoqBuilder(depth_guard).build(t);
    SumOfQuotients out;
    for (auto& q : sum) out.summands.push_back({q.num, q.den});
    if (out.summands.empty()) out.summands.push_back({t_zero(), t_one()});
    return out;
}

} // namespace mcalc
