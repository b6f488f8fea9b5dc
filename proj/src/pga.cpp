#include "mcalc/pga.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace mcalc {

CoreInstr ins_cp(unsigned i, unsigned j) { return {CoreInstr::Op::Cp, i, j, {}}; }
CoreInstr ins_set0(unsigned i) { return {CoreInstr::Op::Set0, i, 0, {}}; }
CoreInstr ins_set1(unsigned i) { return {CoreInstr::Op::Set1, i, 0, {}}; }
CoreInstr ins_setai(unsigned i) { return {CoreInstr::Op::SetAi, i, 0, {}}; }
CoreInstr ins_setmi(unsigned i) { return {CoreInstr::Op::SetMi, i, 0, {}}; }
CoreInstr ins_seta(unsigned i, unsigned j) { return {CoreInstr::Op::SetA, i, j, {}}; }
CoreInstr ins_setm(unsigned i, unsigned j) { return {CoreInstr::Op::SetM, i, j, {}}; }
CoreInstr ins_sets(unsigned i) { return {CoreInstr::Op::SetS, i, 0, {}}; }
CoreInstr ins_test0(unsigned i) { return {CoreInstr::Op::Test0, i, 0, {}}; }
CoreInstr ins_outcp(unsigned j) { return {CoreInstr::Op::OutCp, 0, j, {}}; }
CoreInstr ins_opaque(std::string name) { return {CoreInstr::Op::Opaque, 0, 0, std::move(name)}; }

std::string CoreInstr::str() const {
    auto a = [&] { return "a" + std::to_string(aux); };
    auto aj = [&] { return "a" + std::to_string(arg); };
    switch (op) {
        case Op::Cp: return a() + ".cp(x" + std::to_string(arg) + ")";
        case Op::Set0: return a() + ".set:0";
        case Op::Set1: return a() + ".set:1";
        case Op::SetAi: return a() + ".set:ai";
        case Op::SetMi: return a() + ".set:mi";
        case Op::SetA: return a() + ".set:a(" + aj() + ")";
        case Op::SetM: return a() + ".set:m(" + aj() + ")";
        case Op::SetS: return a() + ".set:s";
        case Op::Test0: return a() + ".test:0";
        case Op::OutCp: return "y.cp(" + aj() + ")";
        case Op::Opaque: return name;
    }
    return "?";
}

std::string PrimInstr::str() const {
    switch (kind) {
        case Kind::Plain: return core.str();
        case Kind::PosTest: return "+" + core.str();
        case Kind::NegTest: return "-" + core.str();
        case Kind::Jump: return "#" + std::to_string(jump);
        case Kind::Halt: return "!";
    }
    return "?";
}

bool InstrSeq::is_straight_line() const {
    if (has_cycle() || prefix.empty()) return false;
    if (prefix.back().kind != PrimInstr::Kind::Halt) return false;
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i) {
        const PrimInstr& p = prefix[i];
        if (p.kind != PrimInstr::Kind::Plain || !p.core.is_assignment()) return false;
    }
    return true;
}

std::string print_instr_seq(const InstrSeq& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.prefix.size(); ++i) {
        if (i) out += ';';
        out += seq.prefix[i].str();
    }
    if (seq.has_cycle()) {
        if (!seq.prefix.empty()) out += ';';
        out += '(';
        for (std::size_t i = 0; i < seq.cycle.size(); ++i) {
            if (i) out += ';';
            out += seq.cycle[i].str();
        }
        out += ")^w";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing.

namespace {

class SeqParser {
public:
    explicit SeqParser(std::string_view s) : s_(s) {}

    InstrSeq parse() {
        InstrSeq seq;
        bool saw_cycle = false;
        for (;;) {
            skip_ws();
            if (pos_ >= s_.size()) break;
            if (saw_cycle)
                throw ParseError("instruction after a repeated block is unreachable (PGA3)",
                                 pos_);
            if (s_[pos_] == '(') {
                ++pos_;
                for (;;) {
                    seq.cycle.push_back(instruction());
                    skip_ws();
                    if (eat(';')) continue;
                    expect(')');
                    break;
                }
                if (seq.cycle.empty()) throw ParseError("empty repeated block", pos_);
                skip_ws();
                if (!(eat('^') && eat('w')))
                    throw ParseError("expected ^w after repeated block", pos_);
                saw_cycle = true;
                skip_ws();
                if (eat(';')) continue;
                continue;
            }
            seq.prefix.push_back(instruction());
            skip_ws();
            if (!eat(';')) {
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] != '(')
                    throw ParseError("expected ';' between instructions", pos_);
            }
        }
        if (seq.prefix.empty() && seq.cycle.empty())
            throw ParseError("empty instruction sequence", 0);
        return seq;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    unsigned number() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            throw ParseError("expected a number", pos_);
        unsigned long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            v = v * 10 + static_cast<unsigned long>(s_[pos_++] - '0');
        return static_cast<unsigned>(v);
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (start == pos_) throw ParseError("expected an instruction", pos_);
        return std::string(s_.substr(start, pos_ - start));
    }

    unsigned aux_reg() {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != 'a')
            throw ParseError("expected auxiliary register", pos_);
        ++pos_;
        return number();
    }

    PrimInstr instruction() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("expected an instruction", pos_);
        char c = s_[pos_];
        if (c == '!') {
            ++pos_;
            return PrimInstr::halt();
        }
        if (c == '#') {
            ++pos_;
            return PrimInstr::jmp(number());
        }
        if (c == '+') {
            ++pos_;
            return PrimInstr::pos(core());
        }
        if (c == '-') {
            ++pos_;
            return PrimInstr::neg(core());
        }
        return PrimInstr::plain(core());
    }

    CoreInstr core() {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '\'') { // quoted opaque action
            ++pos_;
            std::size_t start = pos_;
            while (pos_ < s_.size() && s_[pos_] != '\'') ++pos_;
            if (pos_ >= s_.size()) throw ParseError("unterminated quoted action", start);
            std::string name(s_.substr(start, pos_ - start));
            ++pos_;
            return ins_opaque(std::move(name));
        }
        std::size_t start = pos_;
        std::string id = ident();
        bool reg_like = id == "y" || ((id[0] == 'a' || id[0] == 'x') && id.size() > 1 &&
                                      std::all_of(id.begin() + 1, id.end(), [](char ch) {
                                          return std::isdigit(static_cast<unsigned char>(ch));
                                      }));
        if (!(pos_ < s_.size() && s_[pos_] == '.')) {
            if (reg_like)
                throw ParseError("expected '.' after register '" + id + "'", pos_);
            return ins_opaque(std::move(id));
        }
        ++pos_; // '.'
        if (id == "y") {
            std::string op = ident();
            if (op != "cp") throw ParseError("only cp is defined on y", pos_);
            expect('(');
            unsigned j = aux_reg();
            expect(')');
            return ins_outcp(j);
        }
        if (id[0] != 'a' || id.size() < 2)
            throw ParseError("expected auxiliary register before '.'", start);
        unsigned i = static_cast<unsigned>(std::stoul(id.substr(1)));
        std::string op = ident();
        if (op == "cp") {
            expect('(');
            skip_ws();
            if (pos_ >= s_.size() || s_[pos_] != 'x')
                throw ParseError("cp copies from an input register x<j>", pos_);
            ++pos_;
            unsigned j = number();
            expect(')');
            return ins_cp(i, j);
        }
        if (op == "set") {
            expect(':');
            skip_ws();
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                unsigned v = number();
                if (v == 0) return ins_set0(i);
                if (v == 1) return ins_set1(i);
                throw ParseError("set:<n> supports only 0 and 1", pos_);
            }
            std::string tag = ident();
            if (tag == "ai") return ins_setai(i);
            if (tag == "mi") return ins_setmi(i);
            if (tag == "s") return ins_sets(i);
            if (tag == "a" || tag == "m") {
                expect('(');
                unsigned j = aux_reg();
                expect(')');
                return tag == "a" ? ins_seta(i, j) : ins_setm(i, j);
            }
            throw ParseError("unknown set tag '" + tag + "'", pos_);
        }
        if (op == "test") {
            expect(':');
            unsigned v = number();
            if (v != 0) throw ParseError("only test:0 is defined", pos_);
            return ins_test0(i);
        }
        throw ParseError("unknown instruction '" + id + "." + op + "'", start);
    }
};

} // namespace

InstrSeq parse_instr_seq(std::string_view text) { return SeqParser(text).parse(); }

// ---------------------------------------------------------------------------
// Second canonical form.

namespace {

struct Resolved {
    enum class Kind { Target, OffEnd, Divergent };
    Kind kind;
    std::size_t pos = 0; // Target: resolved non-jump position; OffEnd: absolute
};

std::size_t wrap(const InstrSeq& seq, std::size_t pos) {
    std::size_t n = seq.prefix.size(), N = seq.length();
    if (seq.has_cycle() && pos >= N) return n + (pos - n) % seq.cycle.size();
    return pos;
}

Resolved resolve_jump(const InstrSeq& seq, std::size_t p) {
    std::unordered_set<std::size_t> visited;
    std::size_t cur = p;
    for (;;) {
        if (!visited.insert(cur).second) return {Resolved::Kind::Divergent};
        std::uint64_t k = seq.at(cur).jump;
        if (k == 0) return {Resolved::Kind::Divergent};
        std::size_t t = wrap(seq, cur + k);
        if (t >= seq.length()) return {Resolved::Kind::OffEnd, cur + k};
        if (seq.at(t).kind != PrimInstr::Kind::Jump) return {Resolved::Kind::Target, t};
        cur = t;
    }
}

} // namespace

InstrSeq second_canonical_form(const InstrSeq& seq) {
    InstrSeq out = seq;
    std::size_t n = seq.prefix.size();
    std::size_t m = seq.cycle.size();
    for (std::size_t p = 0; p < seq.length(); ++p) {
        if (seq.at(p).kind != PrimInstr::Kind::Jump) continue;
        Resolved r = resolve_jump(seq, p);
        std::uint64_t counter;
        switch (r.kind) {
            case Resolved::Kind::Divergent: counter = 0; break;
            case Resolved::Kind::OffEnd: counter = r.pos - p; break;
            case Resolved::Kind::Target: {
                if (p >= n) {
                    // inside the repeating part: minimal counter modulo m
                    counter = (r.pos + m - p) % m;
                } else if (r.pos < n) {
                    counter = r.pos - p; // prefix to prefix, chains collapsed only
                } else {
                    // prefix jump into the cycle: least congruent counter that
                    // still lands in the repeating part (PGA8)
                    counter = (n - p) + (r.pos - n);
                }
                break;
            }
        }
        PrimInstr& slot = p < n ? out.prefix[p] : out.cycle[p - n];
        slot = PrimInstr::jmp(counter);
    }
    return out;
}

InstrSeq unfold(const InstrSeq& seq, std::size_t steps) {
    if (!seq.has_cycle()) return seq;
    InstrSeq out = seq;
    for (std::size_t i = 0; i < steps; ++i) {
        out.prefix.push_back(out.cycle.front());
        out.cycle.erase(out.cycle.begin());
        out.cycle.push_back(out.prefix.back());
    }
    return out;
}

CoreInstr raise_core(CoreInstr c) {
    switch (c.op) {
        case CoreInstr::Op::Cp:
        case CoreInstr::Op::Set0:
        case CoreInstr::Op::Set1:
        case CoreInstr::Op::SetAi:
        case CoreInstr::Op::SetMi:
        case CoreInstr::Op::SetS:
        case CoreInstr::Op::Test0: c.aux += 1; break;
        case CoreInstr::Op::SetA:
        case CoreInstr::Op::SetM:
            c.aux += 1;
            c.arg += 1;
            break;
        case CoreInstr::Op::OutCp: c.arg += 1; break;
        case CoreInstr::Op::Opaque: break;
    }
    return c;
}

InstrSeq raise_instr(const InstrSeq& seq) {
    InstrSeq out = seq;
    for (auto* block : {&out.prefix, &out.cycle})
        for (auto& ins : *block)
            if (ins.kind == PrimInstr::Kind::Plain || ins.kind == PrimInstr::Kind::PosTest ||
                ins.kind == PrimInstr::Kind::NegTest)
                ins.core = raise_core(ins.core);
    return out;
}

} // namespace mcalc
