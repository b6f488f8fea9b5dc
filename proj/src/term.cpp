#include "mcalc/term.hpp"

#include <cctype>

namespace mcalc {

std::string Var::str() const {
    switch (kind) {
        case VarKind::Input: return "x" + std::to_string(index);
        case VarKind::Aux: return "a" + std::to_string(index);
        case VarKind::Output: return "y";
    }
    return "?";
}

TermNode::~TermNode() {
    // detach sole-owner children into a worklist so destruction of long
    // chains stays off the call stack
    std::vector<Term> pending;
    auto grab = [&](Term& child) {
        if (child && child.use_count() == 1) pending.push_back(std::move(child));
        child.reset();
    };
    grab(lhs);
    grab(rhs);
    while (!pending.empty()) {
        Term t = std::move(pending.back());
        pending.pop_back();
        auto* n = const_cast<TermNode*>(t.get());
        grab(n->lhs);
        grab(n->rhs);
    }
}

namespace {
Term mk(TermOp op, Term l = nullptr, Term r = nullptr) {
    auto n = std::make_shared<TermNode>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}
} // namespace

Term t_zero() {
    static const Term z = mk(TermOp::Zero);
    return z;
}
Term t_one() {
    static const Term o = mk(TermOp::One);
    return o;
}
Term t_var(Var v) {
    auto n = std::make_shared<TermNode>();
    n->op = TermOp::VarRef;
    n->var = v;
    return n;
}
Term t_x(unsigned i) { return t_var(Var::input(i)); }
Term t_add(Term a, Term b) { return mk(TermOp::Add, std::move(a), std::move(b)); }
Term t_mul(Term a, Term b) { return mk(TermOp::Mul, std::move(a), std::move(b)); }
Term t_neg(Term a) { return mk(TermOp::Neg, std::move(a)); }
Term t_inv(Term a) { return mk(TermOp::Inv, std::move(a)); }
Term t_sign(Term a) { return mk(TermOp::Sign, std::move(a)); }
Term t_sub(Term a, Term b) { return t_add(std::move(a), t_neg(std::move(b))); }
Term t_div(Term a, Term b) { return t_mul(std::move(a), t_inv(std::move(b))); }

Term t_num(const BigInt& n) {
    if (n < 0) return t_neg(t_num(-n));
    if (n == 0) return t_zero();
    Term t = t_one();
    for (BigInt i = 1; i < n; ++i) t = t_add(t, t_one());
    return t;
}

Term t_pseudo_unit(const Term& t) { return t_mul(t, t_inv(t)); }
Term t_pseudo_zero(const Term& t) { return t_sub(t_one(), t_pseudo_unit(t)); }

bool term_eq(const Term& a, const Term& b) {
    if (a.get() == b.get()) return true;
    if (a->op != b->op) return false;
    switch (a->op) {
        case TermOp::Zero:
        case TermOp::One: return true;
        case TermOp::VarRef: return a->var == b->var;
        case TermOp::Neg:
        case TermOp::Inv:
        case TermOp::Sign: return term_eq(a->lhs, b->lhs);
        case TermOp::Add:
        case TermOp::Mul: return term_eq(a->lhs, b->lhs) && term_eq(a->rhs, b->rhs);
    }
    return false;
}

bool contains_sign(const Term& t) {
    switch (t->op) {
        case TermOp::Sign: return true;
        case TermOp::Add:
        case TermOp::Mul: return contains_sign(t->lhs) || contains_sign(t->rhs);
        case TermOp::Neg:
        case TermOp::Inv: return contains_sign(t->lhs);
        default: return false;
    }
}

bool contains_inv(const Term& t) {
    switch (t->op) {
        case TermOp::Inv: return true;
        case TermOp::Add:
        case TermOp::Mul: return contains_inv(t->lhs) || contains_inv(t->rhs);
        case TermOp::Neg:
        case TermOp::Sign: return contains_inv(t->lhs);
        default: return false;
    }
}

namespace {
void collect_vars(const Term& t, std::set<Var>& out) {
    switch (t->op) {
        case TermOp::VarRef: out.insert(t->var); break;
        case TermOp::Add:
        case TermOp::Mul:
            collect_vars(t->lhs, out);
            collect_vars(t->rhs, out);
            break;
        case TermOp::Neg:
        case TermOp::Inv:
        case TermOp::Sign: collect_vars(t->lhs, out); break;
        default: break;
    }
}
} // namespace

std::set<Var> free_vars(const Term& t) {
    std::set<Var> out;
    collect_vars(t, out);
    return out;
}

std::size_t term_size(const Term& t) {
    // iterative, terms can be arbitrarily deep
    std::size_t n = 0;
    std::vector<const TermNode*> work{t.get()};
    while (!work.empty()) {
        const TermNode* cur = work.back();
        work.pop_back();
        ++n;
        if (cur->lhs) work.push_back(cur->lhs.get());
        if (cur->rhs) work.push_back(cur->rhs.get());
    }
    return n;
}

std::optional<BigInt> as_numeral(const Term& t) {
    // canonical expansion: 0, 1, 1+1, (1+1)+1, ... and Neg of those
    switch (t->op) {
        case TermOp::Zero: return BigInt(0);
        case TermOp::One: return BigInt(1);
        case TermOp::Neg: {
            auto inner = as_numeral(t->lhs);
            if (inner && *inner > 0) return -*inner;
            return std::nullopt;
        }
        case TermOp::Add: {
            if (t->rhs->op != TermOp::One) return std::nullopt;
            auto l = as_numeral(t->lhs);
            if (l && *l >= 1) return *l + 1;
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

Assignment Assignment::initial(const Backend& b, const std::vector<Value>& inputs) {
    Assignment a(b);
    for (unsigned i = 0; i < inputs.size(); ++i) a.set(Var::input(i), inputs[i]);
    return a;
}

Value Assignment::get(const Var& v) const {
    auto it = binds_.find(v);
    return it == binds_.end() ? Value::zero(backend_) : it->second;
}

void Assignment::set(const Var& v, Value val) {
    if (val.backend() != backend_)
        throw BackendMismatch("assignment over " + backend_.name() + " given a " +
                              val.backend().name() + " value");
    binds_[v] = std::move(val);
}

Assignment Assignment::with(const Var& v, Value val) const {
    Assignment copy = *this;
    copy.set(v, std::move(val));
    return copy;
}

bool Assignment::is_initial() const {
    for (const auto& [v, val] : binds_)
        if (v.kind != VarKind::Input && !val.is_zero()) return false;
    return true;
}

bool operator==(const Assignment& a, const Assignment& b) {
    if (a.backend_ != b.backend_) return false;
    for (const auto& [v, val] : a.binds_)
        if (!(val == b.get(v))) return false;
    for (const auto& [v, val] : b.binds_)
        if (!(val == a.get(v))) return false;
    return true;
}

Value eval(const Term& t, const Assignment& a) {
    switch (t->op) {
        case TermOp::Zero: return Value::zero(a.backend());
        case TermOp::One: return Value::one(a.backend());
        case TermOp::VarRef: return a.get(t->var);
        case TermOp::Add: return add(eval(t->lhs, a), eval(t->rhs, a));
        case TermOp::Mul: return mul(eval(t->lhs, a), eval(t->rhs, a));
        case TermOp::Neg: return neg(eval(t->lhs, a));
        case TermOp::Inv: return inv(eval(t->lhs, a));
        case TermOp::Sign: return sign(eval(t->lhs, a));
    }
    throw Error("corrupt term");
}

Term substitute(const Term& t, const std::map<Var, Term>& sigma) {
    switch (t->op) {
        case TermOp::Zero:
        case TermOp::One: return t;
        case TermOp::VarRef: {
            auto it = sigma.find(t->var);
            return it == sigma.end() ? t : it->second;
        }
        case TermOp::Add: return t_add(substitute(t->lhs, sigma), substitute(t->rhs, sigma));
        case TermOp::Mul: return t_mul(substitute(t->lhs, sigma), substitute(t->rhs, sigma));
        case TermOp::Neg: return t_neg(substitute(t->lhs, sigma));
        case TermOp::Inv: return t_inv(substitute(t->lhs, sigma));
        case TermOp::Sign: return t_sign(substitute(t->lhs, sigma));
    }
    throw Error("corrupt term");
}

// ---------------------------------------------------------------------------
// Parsing. Grammar (whitespace-insensitive):
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | postfix
//   postfix := atom ('^-1')*
//   atom    := '0' | '1' | numeral | var | 's' '(' expr ')' | '(' expr ')'

namespace {

class TermParser {
public:
    explicit TermParser(std::string_view s) : s_(s) {}

    Term parse() {
        Term t = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("trailing input in term", pos_);
        return t;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    Term expr() {
        Term t = term();
        for (;;) {
            if (eat('+')) t = t_add(t, term());
            else if (eat('-')) t = t_add(t, t_neg(term()));
            else return t;
        }
    }

    Term term() {
        Term t = factor();
        for (;;) {
            if (eat('*')) t = t_mul(t, factor());
            else if (eat('/')) t = t_mul(t, t_inv(factor()));
            else return t;
        }
    }

    Term factor() {
        if (eat('-')) return t_neg(factor());
        return postfix();
    }

    Term postfix() {
        Term t = atom();
        for (;;) {
            skip_ws();
            if (pos_ + 3 <= s_.size() && s_.compare(pos_, 3, "^-1") == 0) {
                pos_ += 3;
                t = t_inv(t);
            } else {
                return t;
            }
        }
    }

    Term atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Term t = expr();
            expect(')');
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return t_num(BigInt(std::string(s_.substr(start, pos_ - start))));
        }
        if (c == 's' && pos_ + 1 < s_.size() && next_nonspace(pos_ + 1) == '(') {
            ++pos_;
            expect('(');
            Term t = expr();
            expect(')');
            return t_sign(t);
        }
        if (c == 'x' || c == 'a') {
            std::size_t start = pos_++;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                throw ParseError("expected variable index", pos_);
            std::size_t ix = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ix = ix * 10 + static_cast<std::size_t>(s_[pos_++] - '0');
            (void)start;
            return t_var(c == 'x' ? Var::input(static_cast<unsigned>(ix))
                                  : Var::aux(static_cast<unsigned>(ix)));
        }
        if (c == 'y') {
            ++pos_;
            return t_var(Var::output());
        }
        throw ParseError("expected term", pos_);
    }

    char next_nonspace(std::size_t p) {
        while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
        return p < s_.size() ? s_[p] : '\0';
    }
};

// precedence: Add 1, Mul 2, Neg 3, Inv 4, atoms 5
int prec(const Term& t) {
    switch (t->op) {
        case TermOp::Add: return 1;
        case TermOp::Mul: return 2;
        case TermOp::Neg: return 3;
        case TermOp::Inv: return 4;
        default: return 5;
    }
}

void print_rec(const Term& t, int min_prec, std::string& out) {
    if (auto n = as_numeral(t)) {
        if (*n >= 0) {
            out += n->str();
        } else {
            if (min_prec > 3) out += '(';
            out += n->str();
            if (min_prec > 3) out += ')';
        }
        return;
    }
    bool paren = prec(t) < min_prec;
    if (paren) out += '(';
    switch (t->op) {
        case TermOp::Zero: out += '0'; break;
        case TermOp::One: out += '1'; break;
        case TermOp::VarRef: out += t->var.str(); break;
        case TermOp::Add:
            print_rec(t->lhs, 1, out);
            if (t->rhs->op == TermOp::Neg) {
                out += '-';
                // binary minus; the right operand is the negand at Mul precedence
                print_rec(t->rhs->lhs, 2, out);
            } else {
                out += '+';
                print_rec(t->rhs, 2, out);
            }
            break;
        case TermOp::Mul:
            print_rec(t->lhs, 2, out);
            if (t->rhs->op == TermOp::Inv) {
                out += '/';
                print_rec(t->rhs->lhs, 5, out);
            } else {
                out += '*';
                print_rec(t->rhs, 3, out);
            }
            break;
        case TermOp::Neg:
            out += '-';
            print_rec(t->lhs, 4, out);
            break;
        case TermOp::Inv:
            print_rec(t->lhs, 5, out);
            out += "^-1";
            break;
        case TermOp::Sign:
            out += "s(";
            print_rec(t->lhs, 1, out);
            out += ')';
            break;
    }
    if (paren) out += ')';
}

} // namespace

Term parse_term(std::string_view text) { return TermParser(text).parse(); }

std::string print_term(const Term& t) {
    std::string out;
    print_rec(t, 1, out);
    return out;
}

} // namespace mcalc
