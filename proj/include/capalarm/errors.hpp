#pragma once

#include <stdexcept>
#include <string>

namespace capalarm {

/// Invalid model/cost parameters, or evaluation outside a function's domain
/// (poles of a Laplace exponent, non-positive Levy tail argument, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller-side precondition does not hold (e.g. x <= A, invalid bracket).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The regret is infinite, so the stopping problem is degenerate
/// (q = 0 with non-negative overall drift, or a divergent penalty transform).
class InfiniteRegretError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to converge or a self-check did not pass.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested model variant is not supported by this routine.
class UnsupportedModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw DomainError(message);
}

inline void require_pre(bool condition, const std::string& message) {
    if (!condition) throw PreconditionError(message);
}

} // namespace detail
} // namespace capalarm
