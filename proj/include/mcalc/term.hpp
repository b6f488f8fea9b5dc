#ifndef MCALC_TERM_HPP
#define MCALC_TERM_HPP

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mcalc/meadow.hpp"

namespace mcalc {

enum class VarKind { Input, Aux, Output };

struct Var {
    VarKind kind;
    unsigned index = 0; // unused for Output

    static Var input(unsigned i) { return {VarKind::Input, i}; }
    static Var aux(unsigned i) { return {VarKind::Aux, i}; }
    static Var output() { return {VarKind::Output, 0}; }

    std::string str() const;
    friend auto operator<=>(const Var&, const Var&) = default;
};

enum class TermOp { Zero, One, Add, Mul, Neg, Inv, Sign, VarRef };

struct TermNode;
/// Immutable AST over the meadow signature (0, 1, +, *, -, ^-1, s).
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
    TermOp op;
    Term lhs, rhs; // Add/Mul use both, Neg/Inv/Sign use lhs
    Var var{VarKind::Output, 0};

    TermNode() = default;
    TermNode(TermOp o, Term l, Term r, Var v) : op(o), lhs(std::move(l)), rhs(std::move(r)), var(v) {}
    ~TermNode(); // iterative teardown, deep chains must not recurse
};

Term t_zero();
Term t_one();
Term t_var(Var v);
Term t_x(unsigned i); // input shorthand
Term t_add(Term a, Term b);
Term t_mul(Term a, Term b);
Term t_neg(Term a);
Term t_inv(Term a);
Term t_sign(Term a);
Term t_sub(Term a, Term b);          // a + (-b)
Term t_div(Term a, Term b);          // a * b^-1
Term t_num(const BigInt& n);         // numeral, expanded to 1+...+1
Term t_pseudo_unit(const Term& t);   // 1_t = t * t^-1
Term t_pseudo_zero(const Term& t);   // 0_t = 1 - 1_t

bool term_eq(const Term& a, const Term& b); // structural equality
bool contains_sign(const Term& t);
bool contains_inv(const Term& t);
std::set<Var> free_vars(const Term& t);
std::size_t term_size(const Term& t);
/// Recognizes the canonical numeral expansion; returns its value.
std::optional<BigInt> as_numeral(const Term& t);

/// A total variable valuation over one backend; unbound variables read as 0.
class Assignment {
public:
    explicit Assignment(const Backend& b) : backend_(b) {}
    static Assignment initial(const Backend& b, const std::vector<Value>& inputs);

    const Backend& backend() const { return backend_; }
    Value get(const Var& v) const;
    void set(const Var& v, Value val); // mutates this copy
    Assignment with(const Var& v, Value val) const;
    /// True iff every variable outside Var_in is 0.
    bool is_initial() const;

    friend bool operator==(const Assignment& a, const Assignment& b);

private:
    Backend backend_;
    std::map<Var, Value> binds_;
};

Value eval(const Term& t, const Assignment& a);

/// Simultaneous substitution; identity off the domain of sigma.
Term substitute(const Term& t, const std::map<Var, Term>& sigma);

Term parse_term(std::string_view text);
std::string print_term(const Term& t);

} // namespace mcalc

#endif
