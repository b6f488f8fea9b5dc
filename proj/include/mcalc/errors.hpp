#ifndef MCALC_ERRORS_HPP
#define MCALC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mcalc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operands belong to different arithmetic backends.
struct BackendMismatch : Error {
    using Error::Error;
};

/// Operation not available on this backend (e.g. sign on Z/nZ).
struct UnsupportedOperation : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

/// Raised when a normalizer exceeds the configured nesting guard.
struct DepthGuardExceeded : Error {
    using Error::Error;
};

} // namespace mcalc

#endif
