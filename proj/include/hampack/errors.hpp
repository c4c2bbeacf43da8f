#pragma once

#include <stdexcept>
#include <string>

namespace hampack {

/// Malformed input: bad parameters, unparseable files, out-of-range values.
/// CLI maps this to exit code 2.
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// Parameter combination the pipeline does not handle (e.g. ell < k/2).
/// CLI maps this to exit code 3.
class UnsupportedCase : public std::runtime_error {
public:
    explicit UnsupportedCase(const std::string& what) : std::runtime_error(what) {}
};

/// A structural guarantee of the construction was violated. Never a normal
/// outcome; CLI maps this to exit code 4.
class InternalInvariantViolation : public std::logic_error {
public:
    explicit InternalInvariantViolation(const std::string& what) : std::logic_error(what) {}
};

inline void require_invariant(bool ok, const std::string& what) {
    if (!ok) throw InternalInvariantViolation(what);
}

} // namespace hampack
