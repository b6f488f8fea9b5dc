#ifndef MCALC_COMPILE_HPP
#define MCALC_COMPILE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "mcalc/normalize.hpp"
#include "mcalc/pga.hpp"
#include "mcalc/term.hpp"
#include "mcalc/thread.hpp"

namespace mcalc {

/// A straight-line register program computing a value into a0. The
/// epilogue y.cp(a0);! is added when materializing the sequence.
struct StraightLineProgram {
    std::vector<CoreInstr> body; // assignments only
    unsigned aux_count = 1;      // registers a0..a_{aux_count-1}

    InstrSeq to_instr_seq() const;
};

/// Largest register count seen at each stage of the compilation ladder.
/// Bounds: monomial 2, polynomial 3, quotient 4, sum 5; with sign:
/// guard 4, branch 5, signed polynomial 6, signed quotient 7, sum 8.
struct StageCounts {
    unsigned monomial = 0;
    unsigned polynomial = 0;
    unsigned quotient = 0;
    unsigned sum = 0;
    unsigned guard = 0;
    unsigned branch = 0;
    unsigned signed_polynomial = 0;
    unsigned signed_quotient = 0;
    unsigned signed_sum = 0;
};

struct CompileReport {
    Term source;
    Term normal; // the sum-of-quotients shape actually compiled
    StraightLineProgram program;
    bool uses_sign = false;
    unsigned aux_vars_used = 0;
    std::uint64_t instruction_count = 0; // actions per run (epilogue included)
    StageCounts stages;
};

/// Compiles a term over input variables into a straight-line program with
/// at most 5 auxiliary registers (8 when the term contains the sign
/// operator). Throws DepthGuardExceeded when normalization blows up and
/// UnsupportedOperation for non-input variables.
CompileReport compile_term(const Term& t, std::size_t depth_guard = kDefaultDepthGuard);

struct VerifyResult {
    bool ok = true;
    std::uint64_t samples_run = 0;
    std::optional<std::vector<Value>> counterexample; // inputs of first mismatch
};

/// Checks [[seq]]^k(inputs) against eval(t) on sampled inputs: exhaustive
/// for small modular domains, seeded random otherwise. bound 0 means no
/// step limit (straight-line programs always terminate).
VerifyResult verify_equivalence(const InstrSeq& seq, const Term& t, const Backend& backend,
                                std::uint64_t samples, std::uint64_t seed,
                                std::uint64_t bound = 0);

} // namespace mcalc

#endif
