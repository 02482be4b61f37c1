#pragma once

#include <stdexcept>
#include <string>

namespace isolp {

/// Argument outside the mathematical domain of an operation (negative
/// dimension, volume above the hemisphere bound, chord longer than 2r, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An integrand blows up on a measure atom (cos(alpha) = 0 under a
/// functional that divides by it).
class InfiniteContribution : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The supremum defining a dual function sits on the artificial search cap.
class SearchCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotImplementedCase : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Caller passed containers of inconsistent size.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace isolp
