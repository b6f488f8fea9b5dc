#include "mcalc/compile.hpp"

#include <algorithm>
#include <random>
#include <utility>

namespace mcalc {

InstrSeq StraightLineProgram::to_instr_seq() const {
    InstrSeq seq;
    for (const CoreInstr& c : body) seq.prefix.push_back(PrimInstr::plain(c));
    seq.prefix.push_back(PrimInstr::plain(ins_outcp(0)));
    seq.prefix.push_back(PrimInstr::halt());
    return seq;
}

namespace {

using SLP = StraightLineProgram;

SLP slp_tail(SLP p, CoreInstr tail) {
    p.body.push_back(std::move(tail));
    return p;
}

/// Combines two programs with + or *. The program with more registers runs
/// first into a0; the other is raised one register and runs into a1, which
/// it initializes itself, so no clearing pass is needed. Register count is
/// max(n, m) for n != m and n + 1 for n == m.
SLP slp_binary(bool is_add, SLP p, SLP q) {
    if (p.aux_count < q.aux_count) std::swap(p, q); // + and * are commutative
    SLP r;
    r.body = std::move(p.body);
    for (const CoreInstr& c : q.body) r.body.push_back(raise_core(c));
    r.body.push_back(is_add ? ins_seta(0, 1) : ins_setm(0, 1));
    r.aux_count = std::max(p.aux_count, q.aux_count + 1);
    return r;
}

SLP slp_rec(const Term& t) {
    switch (t->op) {
        case TermOp::Zero: return {{ins_set0(0)}, 1};
        case TermOp::One: return {{ins_set1(0)}, 1};
        case TermOp::VarRef:
            if (t->var.kind != VarKind::Input)
                throw UnsupportedOperation("can only compile terms over input variables, got " +
                                           t->var.str());
            return {{ins_cp(0, t->var.index)}, 1};
        case TermOp::Neg: return slp_tail(slp_rec(t->lhs), ins_setai(0));
        case TermOp::Inv: return slp_tail(slp_rec(t->lhs), ins_setmi(0));
        case TermOp::Sign: return slp_tail(slp_rec(t->lhs), ins_sets(0));
        case TermOp::Add: return slp_binary(true, slp_rec(t->lhs), slp_rec(t->rhs));
        case TermOp::Mul: return slp_binary(false, slp_rec(t->lhs), slp_rec(t->rhs));
    }
    throw UnsupportedOperation("unknown term node");
}

struct Compiler {
    std::size_t depth_guard;
    StageCounts st;

    static void bump(unsigned& slot, const SLP& p) { slot = std::max(slot, p.aux_count); }

    SLP poly(const Term& p) {
        for (const Monomial& m : poly_to_monomials(p)) {
            SLP mp = slp_rec(poly_term({m}));
            bump(st.monomial, mp);
        }
        SLP r = slp_rec(p);
        bump(st.polynomial, r);
        return r;
    }

    SLP signed_poly(const Term& p) {
        if (!contains_sign(p)) return poly(p);
        SignedBranchForm form = signed_standard_form(p, depth_guard);
        SLP acc;
        bool first = true;
        for (const SignedBranch& br : form.branches) {
            SLP guards;
            bool gfirst = true;
            for (const GuardTerm& g : br.guards) {
                SLP gp = slp_rec(g.to_term());
                bump(st.guard, gp);
                guards = gfirst ? std::move(gp) : slp_binary(false, std::move(guards), std::move(gp));
                gfirst = false;
            }
            SLP body = poly(br.body);
            SLP prog = gfirst ? std::move(body)
                              : slp_binary(false, std::move(guards), std::move(body));
            bump(st.branch, prog);
            acc = first ? std::move(prog) : slp_binary(true, std::move(acc), std::move(prog));
            first = false;
        }
        if (first) acc = SLP{{ins_set0(0)}, 1};
        bump(st.signed_polynomial, acc);
        return acc;
    }

    SLP quotient(const Quotient& q, bool with_sign) {
        SLP num = with_sign ? signed_poly(q.num) : poly(q.num);
        bool trivial_den =
            !contains_sign(q.den) && poly_is_one(poly_of_term(q.den));
        SLP r;
        if (trivial_den) {
            r = std::move(num);
        } else {
            SLP den = with_sign ? signed_poly(q.den) : poly(q.den);
            den.body.push_back(ins_setmi(0));
            r = slp_binary(false, std::move(num), std::move(den));
        }
        bump(with_sign ? st.signed_quotient : st.quotient, r);
        return r;
    }

    SLP sum(const SumOfQuotients& soq, bool with_sign) {
        SLP acc;
        bool first = true;
        for (const Quotient& q : soq.summands) {
            SLP qp = quotient(q, with_sign);
            acc = first ? std::move(qp) : slp_binary(true, std::move(acc), std::move(qp));
            first = false;
        }
        if (first) acc = SLP{{ins_set0(0)}, 1};
        bump(with_sign ? st.signed_sum : st.sum, acc);
        return acc;
    }
};

} // namespace

CompileReport compile_term(const Term& t, std::size_t depth_guard) {
    CompileReport rep;
    rep.source = t;
    rep.uses_sign = contains_sign(t);
    SumOfQuotients soq = rep.uses_sign ? to_sum_of_quotients_signed(t, depth_guard)
                                       : to_sum_of_quotients(t, depth_guard);
    rep.normal = soq.to_term();
    Compiler c{depth_guard};
    rep.program = c.sum(soq, rep.uses_sign);
    rep.stages = c.st;
    rep.aux_vars_used = rep.program.aux_count;
    rep.instruction_count = rep.program.body.size() + 1; // plus y.cp(a0)
    return rep;
}

namespace {

Value random_value(const Backend& b, std::mt19937_64& rng) {
    if (b.kind() == MeadowKind::Modular) {
        std::uniform_int_distribution<std::uint64_t> d(0, b.modulus() - 1);
        return Value::from_residue(b, d(rng));
    }
    // small rationals, with zero well represented
    std::uniform_int_distribution<int> num(-6, 6);
    static constexpr int dens[] = {1, 1, 1, 2, 3, 5};
    std::uniform_int_distribution<int> den(0, 5);
    return Value::from_rational(b, BigRat(num(rng), dens[den(rng)]));
}

} // namespace

VerifyResult verify_equivalence(const InstrSeq& seq, const Term& t, const Backend& backend,
                                std::uint64_t samples, std::uint64_t seed,
                                std::uint64_t bound) {
    // straight-line programs terminate after every action runs once;
    // anything with jumps keeps a large default bound
    if (bound == 0) bound = seq.is_straight_line() ? UINT64_MAX : (1u << 20);
    unsigned k = 0;
    for (const Var& v : free_vars(t))
        if (v.kind == VarKind::Input) k = std::max(k, v.index + 1);
    ThreadGraph g = extract(seq);
    VerifyResult res;

    auto check = [&](const std::vector<Value>& inputs) -> bool {
        Assignment init = Assignment::initial(backend, inputs);
        Value expected = eval(t, init);
        RunOutcome out = apply_thread(g, init, bound);
        ++res.samples_run;
        if (out.status == RunOutcome::Status::Terminated && out.result == expected) return true;
        res.ok = false;
        res.counterexample = inputs;
        return false;
    };

    bool exhaustive = false;
    if (backend.kind() == MeadowKind::Modular) {
        std::uint64_t domain = 1;
        exhaustive = true;
        for (unsigned i = 0; i < k && exhaustive; ++i) {
            domain *= backend.modulus();
            if (domain > samples) exhaustive = false;
        }
    }
    if (exhaustive) {
        std::vector<Value> inputs(k, Value::zero(backend));
        auto enumerate = [&](auto&& self, unsigned pos) -> bool {
            if (pos == k) return check(inputs);
            for (std::uint64_t r = 0; r < backend.modulus(); ++r) {
                inputs[pos] = Value::from_residue(backend, r);
                if (!self(self, pos + 1)) return false;
            }
            return true;
        };
        enumerate(enumerate, 0);
        return res;
    }

    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::vector<Value> inputs;
        inputs.reserve(k);
        for (unsigned i = 0; i < k; ++i) inputs.push_back(random_value(backend, rng));
        if (!check(inputs)) break;
    }
    return res;
}

} // namespace mcalc
