// Command-line front end: run, compile, normalize, canon, extract, verify.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcalc/compile.hpp"
#include "mcalc/normalize.hpp"
#include "mcalc/pga.hpp"
#include "mcalc/term.hpp"
#include "mcalc/thread.hpp"

using namespace mcalc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDivergent = 2;
constexpr int kExitGuard = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

std::vector<Value> parse_inputs(const Backend& b, const std::string& csv) {
    std::vector<Value> vals;
    if (csv.empty()) return vals;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(Value::parse(b, item));
    return vals;
}

std::string join_values(const std::vector<Value>& vals) {
    std::string s;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) s += ",";
        s += vals[i].str();
    }
    return s;
}

struct Options {
    std::string meadow = "q";
    std::string inputs;
    std::string form = "smf";
    std::string term_text;
    std::string output;
    std::string path;
    std::uint64_t bound = 10000;
    std::uint64_t samples = 100;
    std::uint64_t seed = 0;
    std::size_t depth_guard = kDefaultDepthGuard;
    bool verbose = false;
};

int cmd_run(const Options& o) {
    Backend b = Backend::parse(o.meadow);
    InstrSeq seq = parse_instr_seq(read_file(o.path));
    RunOutcome out = run(seq, b, parse_inputs(b, o.inputs), o.bound);
    switch (out.status) {
        case RunOutcome::Status::Terminated:
            std::cout << "result: " << out.result.str() << " steps: " << out.steps << "\n";
            return kExitOk;
        case RunOutcome::Status::BoundExhausted:
            std::cout << "divergent: bound-exhausted\n";
            return kExitDivergent;
        case RunOutcome::Status::Deadlock:
            std::cout << "divergent: deadlock\n";
            return kExitDivergent;
    }
    return kExitUsage;
}

int cmd_compile(const Options& o) {
    std::string text = !o.term_text.empty() ? o.term_text : read_file(o.path);
    Term t = parse_term(text);
    CompileReport rep = compile_term(t, o.depth_guard);
    InstrSeq seq = rep.program.to_instr_seq();
    std::string program = print_instr_seq(seq);
    if (!o.output.empty()) {
        std::ofstream out(o.output);
        if (!out.good()) throw Error("cannot write '" + o.output + "'");
        out << program << "\n";
    } else {
        std::cout << program << "\n";
    }
    // signed terms need the ordered backend for verification
    std::string meadow = o.meadow;
    if (rep.uses_sign && meadow == "q") meadow = "q-signed";
    Backend b = Backend::parse(meadow);
    VerifyResult v = verify_equivalence(seq, t, b, o.samples, o.seed);
    std::cout << "term: " << print_term(t) << "\n";
    std::cout << "aux_vars_used: " << rep.aux_vars_used << "\n";
    std::cout << "instruction_count: " << rep.instruction_count << "\n";
    if (o.verbose) {
        const StageCounts& st = rep.stages;
        std::cout << "stages: monomial=" << st.monomial << " polynomial=" << st.polynomial
                  << " quotient=" << st.quotient << " sum=" << st.sum;
        if (rep.uses_sign)
            std::cout << " guard=" << st.guard << " branch=" << st.branch
                      << " signed_polynomial=" << st.signed_polynomial
                      << " signed_quotient=" << st.signed_quotient
                      << " signed_sum=" << st.signed_sum;
        std::cout << "\n";
    }
    std::cout << "verified: " << (v.ok ? "pass" : "fail") << "\n";
    return v.ok ? kExitOk : kExitDivergent;
}

int cmd_normalize(const Options& o) {
    Term t = parse_term(!o.term_text.empty() ? o.term_text : o.path);
    if (o.form == "smf") {
        std::cout << print_term(smf_normalize(t, o.depth_guard)) << "\n";
    } else if (o.form == "soq") {
        std::cout << print_term(to_sum_of_quotients(t, o.depth_guard).to_term()) << "\n";
    } else if (o.form == "signed") {
        if (contains_inv(t)) {
            std::cout << print_term(to_sum_of_quotients_signed(t, o.depth_guard).to_term())
                      << "\n";
        } else {
            std::cout << print_term(signed_standard_form(t, o.depth_guard).to_term()) << "\n";
        }
    } else {
        throw Error("unknown form '" + o.form + "' (expected smf, soq, or signed)");
    }
    return kExitOk;
}

int cmd_canon(const Options& o) {
    std::cout << print_instr_seq(second_canonical_form(parse_instr_seq(read_file(o.path))))
              << "\n";
    return kExitOk;
}

int cmd_extract(const Options& o) {
    std::cout << print_thread(minimize(extract(parse_instr_seq(read_file(o.path)))));
    return kExitOk;
}

int cmd_verify(const Options& o) {
    Backend b = Backend::parse(o.meadow);
    InstrSeq seq = parse_instr_seq(read_file(o.path));
    Term t = parse_term(o.term_text);
    VerifyResult v = verify_equivalence(seq, t, b, o.samples, o.seed, o.bound);
    if (v.ok) {
        std::cout << "verified: pass (" << v.samples_run << " samples)\n";
        return kExitOk;
    }
    std::cout << "verified: fail at inputs: " << join_values(*v.counterexample) << "\n";
    return kExitDivergent;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"meadow term and instruction sequence calculator"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--meadow", o.meadow, "backend: q, q-signed, or mod:<n>");
        c->add_option("--bound", o.bound, "step bound for runs")->check(CLI::PositiveNumber);
        c->add_option("--samples", o.samples, "verification samples")
            ->check(CLI::PositiveNumber);
        c->add_option("--seed", o.seed, "random seed");
        c->add_option("--depth-guard", o.depth_guard, "normalization nesting guard");
        c->add_flag("--verbose", o.verbose, "print extra detail");
    };

    CLI::App* c_run = app.add_subcommand("run", "run an instruction sequence");
    c_run->add_option("file", o.path, "program file")->required();
    c_run->add_option("--inputs", o.inputs, "comma-separated input values");
    add_common(c_run);

    CLI::App* c_compile = app.add_subcommand("compile", "compile a term to a program");
    c_compile->add_option("file", o.path, "term file");
    c_compile->add_option("--term", o.term_text, "term text");
    c_compile->add_option("-o,--output", o.output, "output .pga path");
    add_common(c_compile);

    CLI::App* c_norm = app.add_subcommand("normalize", "normalize a term");
    c_norm->add_option("text", o.path, "term text");
    c_norm->add_option("--term", o.term_text, "term text");
    c_norm->add_option("--form", o.form, "smf, soq, or signed");
    add_common(c_norm);

    CLI::App* c_canon = app.add_subcommand("canon", "second canonical form");
    c_canon->add_option("file", o.path, "program file")->required();
    add_common(c_canon);

    CLI::App* c_extract = app.add_subcommand("extract", "extract the thread");
    c_extract->add_option("file", o.path, "program file")->required();
    add_common(c_extract);

    CLI::App* c_verify = app.add_subcommand("verify", "check a program against a term");
    c_verify->add_option("file", o.path, "program file")->required();
    c_verify->add_option("--term", o.term_text, "term text")->required();
    add_common(c_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_run->parsed()) return cmd_run(o);
        if (c_compile->parsed()) {
            if (o.term_text.empty() && o.path.empty())
                throw Error("compile needs a term file or --term");
            return cmd_compile(o);
        }
        if (c_norm->parsed()) {
            if (o.term_text.empty() && o.path.empty())
                throw Error("normalize needs a term or --term");
            return cmd_normalize(o);
        }
        if (c_canon->parsed()) return cmd_canon(o);
        if (c_extract->parsed()) return cmd_extract(o);
        if (c_verify->parsed()) {
            // straight-line programs terminate regardless of length
            if (!c_verify->count("--bound")) o.bound = 0;
            return cmd_verify(o);
        }
    } catch (const DepthGuardExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
