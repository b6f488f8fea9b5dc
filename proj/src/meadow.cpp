#include "mcalc/meadow.hpp"

#include <algorithm>
#include <charconv>

namespace mcalc {

namespace {

constexpr std::uint64_t kMaxModulus = 1u << 20; // inverse table is materialized

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            n /= p;
            if (n % p == 0) return {}; // not square-free
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

std::uint64_t inv_mod_prime(std::uint64_t a, std::uint64_t p) {
    // extended Euclid; a in [1, p)
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

} // namespace

Backend Backend::rational() { return Backend(MeadowKind::Rational, 0); }
Backend Backend::signed_rational() { return Backend(MeadowKind::SignedRational, 0); }

Backend Backend::modular(std::uint64_t n) {
    if (n < 2) throw UnsupportedOperation("modular meadow requires modulus >= 2");
    if (n > kMaxModulus)
        throw UnsupportedOperation("modulus " + std::to_string(n) + " exceeds the supported limit " +
                    std::to_string(kMaxModulus));
    auto ps = prime_factors(n);
    if (ps.empty())
        throw UnsupportedOperation("no meadow structure on Z/" + std::to_string(n) +
                    "Z: modulus is not square-free");
    Backend b(MeadowKind::Modular, n);
    b.prime_ = ps.size() == 1;
    // CRT: component-wise inverse per prime, zero component stays zero
    auto table = std::make_shared<std::vector<std::uint64_t>>(n);
    for (std::uint64_t a = 0; a < n; ++a) {
        std::uint64_t x = 0;
        for (std::uint64_t p : ps) {
            std::uint64_t m = n / p;
            std::uint64_t rp = a % p;
            std::uint64_t ip = rp == 0 ? 0 : inv_mod_prime(rp, p);
            // m * (m^-1 mod p) is 1 mod p and 0 mod the other primes
            std::uint64_t e = m % p == 0 ? 0 : inv_mod_prime(m % p, p);
            x = (x + (__uint128_t)m * e % n * ip) % n;
        }
        (*table)[a] = x;
    }
    b.inv_table_ = std::move(table);
    return b;
}

Backend Backend::parse(std::string_view s) {
    if (s == "q") return rational();
    if (s == "q-signed") return signed_rational();
    if (s.rfind("mod:", 0) == 0) {
        std::uint64_t n = 0;
        auto body = s.substr(4);
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), n);
        if (ec != std::errc{} || ptr != body.data() + body.size())
            throw UnsupportedOperation("bad modulus in backend selector '" + std::string(s) + "'");
        return modular(n);
    }
    throw UnsupportedOperation("unknown backend selector '" + std::string(s) +
                "' (expected q, q-signed, or mod:<n>)");
}

bool Backend::is_cancellation() const {
    switch (kind_) {
        case MeadowKind::Rational:
        case MeadowKind::SignedRational: return true;
        case MeadowKind::Modular: return prime_;
    }
    return false;
}

std::string Backend::name() const {
    switch (kind_) {
        case MeadowKind::Rational: return "q";
        case MeadowKind::SignedRational: return "q-signed";
        case MeadowKind::Modular: return "mod:" + std::to_string(modulus_);
    }
    return "?";
}

std::uint64_t Backend::mod_inverse(std::uint64_t residue) const {
    return (*inv_table_)[residue];
}

Value Value::zero(const Backend& b) { return from_int(b, 0); }
Value Value::one(const Backend& b) { return from_int(b, 1); }

Value Value::from_int(const Backend& b, long long n) {
    if (b.kind() == MeadowKind::Modular) {
        long long m = static_cast<long long>(b.modulus());
        long long r = n % m;
        if (r < 0) r += m;
        return Value(b, static_cast<std::uint64_t>(r));
    }
    return Value(b, BigRat(n));
}

Value Value::from_rational(const Backend& b, const BigRat& q) {
    if (b.kind() == MeadowKind::Modular)
        throw UnsupportedOperation("rational value on modular backend");
    return Value(b, q);
}

Value Value::from_residue(const Backend& b, std::uint64_t r) {
    if (b.kind() != MeadowKind::Modular)
        throw UnsupportedOperation("residue value on rational backend");
    return Value(b, r % b.modulus());
}

Value Value::parse(const Backend& b, std::string_view text) {
    if (text.empty()) throw ParseError("empty value", 0);
    std::string s(text);
    if (b.kind() == MeadowKind::Modular) {
        try {
            BigInt n(s);
            BigInt m(b.modulus());
            BigInt r = n % m;
            if (r < 0) r += m;
            return Value(b, r.convert_to<std::uint64_t>());
        } catch (const std::exception&) {
            throw ParseError("bad modular value '" + s + "'", 0);
        }
    }
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Value(b, BigRat(BigInt(s)));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in value '" + s + "'", 0);
        return Value(b, BigRat(num, den));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("bad rational value '" + s + "'", 0);
    }
}

bool Value::is_zero() const {
    return backend_.kind() == MeadowKind::Modular ? res_ == 0 : rat_ == 0;
}

const BigRat& Value::rational() const {
    if (backend_.kind() == MeadowKind::Modular)
        throw UnsupportedOperation("rational() on modular value");
    return rat_;
}

std::uint64_t Value::residue() const {
    if (backend_.kind() != MeadowKind::Modular)
        throw UnsupportedOperation("residue() on rational value");
    return res_;
}

std::string Value::str() const {
    if (backend_.kind() == MeadowKind::Modular) return std::to_string(res_);
    return rat_.str();
}

bool operator==(const Value& a, const Value& b) {
    if (a.backend_ != b.backend_) return false;
    return a.backend_.kind() == MeadowKind::Modular ? a.res_ == b.res_ : a.rat_ == b.rat_;
}

namespace {
void check_same(const Value& a, const Value& b) {
    if (a.backend() != b.backend())
        throw BackendMismatch("mixed backends: " + a.backend().name() + " vs " +
                              b.backend().name());
}
} // namespace

Value add(const Value& a, const Value& b) {
    check_same(a, b);
    const Backend& bk = a.backend();
    if (bk.kind() == MeadowKind::Modular)
        return Value::from_residue(bk, (a.residue() + b.residue()) % bk.modulus());
    return Value::from_rational(bk, a.rational() + b.rational());
}

Value mul(const Value& a, const Value& b) {
    check_same(a, b);
    const Backend& bk = a.backend();
    if (bk.kind() == MeadowKind::Modular)
        return Value::from_residue(bk, (__uint128_t)a.residue() * b.residue() % bk.modulus());
    return Value::from_rational(bk, a.rational() * b.rational());
}

Value neg(const Value& a) {
    const Backend& bk = a.backend();
    if (bk.kind() == MeadowKind::Modular)
        return Value::from_residue(bk, (bk.modulus() - a.residue()) % bk.modulus());
    return Value::from_rational(bk, -a.rational());
}

Value inv(const Value& a) {
    const Backend& bk = a.backend();
    if (bk.kind() == MeadowKind::Modular)
        return Value::from_residue(bk, bk.mod_inverse(a.residue()));
    if (a.rational() == 0) return a; // 0^-1 = 0
    return Value::from_rational(bk, 1 / a.rational());
}

Value sign(const Value& a) {
    const Backend& bk = a.backend();
    if (!bk.has_sign())
        throw UnsupportedOperation("sign is not defined on backend " + bk.name());
    int s = a.rational() == 0 ? 0 : (a.rational() < 0 ? -1 : 1);
    return Value::from_int(bk, s);
}

Value pseudo_unit(const Value& a) { return mul(a, inv(a)); }

Value pseudo_zero(const Value& a) {
    return sub(Value::one(a.backend()), pseudo_unit(a));
}

Value sub(const Value& a, const Value& b) { return add(a, neg(b)); }

} // namespace mcalc
