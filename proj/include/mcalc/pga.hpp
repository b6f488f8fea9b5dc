#ifndef MCALC_PGA_HPP
#define MCALC_PGA_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mcalc/errors.hpp"

namespace mcalc {

/// A core (basic) instruction. All assignment instructions reply true;
/// only the zero test (and an opaque action) can reply false.
struct CoreInstr {
    enum class Op {
        Cp,     // a_i <= x_j
        Set0,   // a_i <= 0
        Set1,   // a_i <= 1
        SetAi,  // a_i <= -a_i
        SetMi,  // a_i <= a_i^-1
        SetA,   // a_i <= a_i + a_j
        SetM,   // a_i <= a_i * a_j
        SetS,   // a_i <= s(a_i)
        Test0,  // zero test on a_i
        OutCp,  // y <= a_j
        Opaque, // abstract action (parser tests only)
    };

    Op op = Op::Opaque;
    unsigned aux = 0;   // a_i for everything but OutCp/Opaque
    unsigned arg = 0;   // x_j for Cp; a_j for SetA/SetM/OutCp
    std::string name;   // Opaque only

    bool is_assignment() const { return op != Op::Test0 && op != Op::Opaque; }
    std::string str() const;
    friend bool operator==(const CoreInstr&, const CoreInstr&) = default;
};

CoreInstr ins_cp(unsigned i, unsigned j);
CoreInstr ins_set0(unsigned i);
CoreInstr ins_set1(unsigned i);
CoreInstr ins_setai(unsigned i);
CoreInstr ins_setmi(unsigned i);
CoreInstr ins_seta(unsigned i, unsigned j);
CoreInstr ins_setm(unsigned i, unsigned j);
CoreInstr ins_sets(unsigned i);
CoreInstr ins_test0(unsigned i);
CoreInstr ins_outcp(unsigned j);
CoreInstr ins_opaque(std::string name);

struct PrimInstr {
    enum class Kind { Plain, PosTest, NegTest, Jump, Halt };

    Kind kind = Kind::Halt;
    CoreInstr core;        // Plain/PosTest/NegTest
    std::uint64_t jump = 0; // Jump

    static PrimInstr plain(CoreInstr c) { return {Kind::Plain, std::move(c), 0}; }
    static PrimInstr pos(CoreInstr c) { return {Kind::PosTest, std::move(c), 0}; }
    static PrimInstr neg(CoreInstr c) { return {Kind::NegTest, std::move(c), 0}; }
    static PrimInstr jmp(std::uint64_t k) { return {Kind::Jump, {}, k}; }
    static PrimInstr halt() { return {Kind::Halt, {}, 0}; }

    std::string str() const;
    friend bool operator==(const PrimInstr&, const PrimInstr&) = default;
};

/// First canonical form by construction: a finite prefix optionally
/// followed by a repeated block.
struct InstrSeq {
    std::vector<PrimInstr> prefix;
    std::vector<PrimInstr> cycle; // empty = no repetition

    bool has_cycle() const { return !cycle.empty(); }
    std::size_t length() const { return prefix.size() + cycle.size(); }
    const PrimInstr& at(std::size_t pos) const {
        return pos < prefix.size() ? prefix[pos] : cycle[pos - prefix.size()];
    }
    bool is_straight_line() const;
    friend bool operator==(const InstrSeq&, const InstrSeq&) = default;
};

InstrSeq parse_instr_seq(std::string_view text);
std::string print_instr_seq(const InstrSeq& seq);

/// Collapses chained jumps, absorbs jumps to #0, reduces cycle jump
/// counters modulo the cycle length, and minimizes prefix jumps into the
/// repeating part. Idempotent.
InstrSeq second_canonical_form(const InstrSeq& seq);

/// Rotates the repeated block n steps into the prefix ((X;Y)^w = X;(Y;X)^w).
InstrSeq unfold(const InstrSeq& seq, std::size_t n);

/// Every a_i becomes a_{i+1}; input and output variables untouched.
InstrSeq raise_instr(const InstrSeq& seq);
CoreInstr raise_core(CoreInstr c);

} // namespace mcalc

#endif
