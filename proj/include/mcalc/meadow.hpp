#ifndef MCALC_MEADOW_HPP
#define MCALC_MEADOW_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mcalc/errors.hpp"

namespace mcalc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class MeadowKind {
    Rational,       // the meadow Q with totalized inverse
    SignedRational, // Q plus the sign function
    Modular,        // Z/nZ for square-free n >= 2
};

/// An exact arithmetic backend realizing the meadow signature. Cheap to
/// copy; modular backends share a precomputed inverse table.
class Backend {
public:
    static Backend rational();
    static Backend signed_rational();
    /// Rejects moduli that are not square-free (no meadow structure) and
    /// moduli beyond the table limit.
    static Backend modular(std::uint64_t n);

    /// Parses a selector string: "q", "q-signed", or "mod:<n>".
    static Backend parse(std::string_view selector);

    MeadowKind kind() const { return kind_; }
    std::uint64_t modulus() const { return modulus_; }
    bool has_sign() const { return kind_ == MeadowKind::SignedRational; }
    bool is_cancellation() const;
    std::string name() const;

    std::uint64_t mod_inverse(std::uint64_t residue) const;

    friend bool operator==(const Backend& a, const Backend& b) {
        return a.kind_ == b.kind_ && a.modulus_ == b.modulus_;
    }
    friend bool operator!=(const Backend& a, const Backend& b) { return !(a == b); }

private:
    Backend(MeadowKind k, std::uint64_t n) : kind_(k), modulus_(n) {}

    MeadowKind kind_;
    std::uint64_t modulus_ = 0;
    bool prime_ = false;
    std::shared_ptr<const std::vector<std::uint64_t>> inv_table_;
};

/// An element of one concrete backend. Immutable in spirit: all operations
/// return fresh values.
class Value {
public:
    Value() : backend_(Backend::rational()) {}

    static Value zero(const Backend& b);
    static Value one(const Backend& b);
    static Value from_int(const Backend& b, long long n);
    static Value from_rational(const Backend& b, const BigRat& q);
    static Value from_residue(const Backend& b, std::uint64_t r);

    /// Parses the textual value syntax of the backend: "p/q" or an integer
    /// for rational backends, an integer for modular ones.
    static Value parse(const Backend& b, std::string_view text);

    const Backend& backend() const { return backend_; }
    bool is_zero() const;
    const BigRat& rational() const;
    std::uint64_t residue() const;

    std::string str() const;

    friend bool operator==(const Value& a, const Value& b);
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

private:
    Value(const Backend& b, BigRat q) : backend_(b), rat_(std::move(q)) {}
    Value(const Backend& b, std::uint64_t r) : backend_(b), res_(r) {}

    Backend backend_;
    BigRat rat_;
    std::uint64_t res_ = 0;
};

Value add(const Value& a, const Value& b);
Value mul(const Value& a, const Value& b);
Value neg(const Value& a);
/// Total inverse: 0 maps to 0; on Z/nZ the canonical meadow inverse.
Value inv(const Value& a);
/// -1/0/1 by the order of the rationals; requires has_sign().
Value sign(const Value& a);
Value pseudo_unit(const Value& a); // 1_a = a * a^-1
Value pseudo_zero(const Value& a); // 0_a = 1 - 1_a
Value sub(const Value& a, const Value& b);

} // namespace mcalc

#endif
