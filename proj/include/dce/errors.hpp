#pragma once

#include <stdexcept>
#include <string>

namespace dce {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition or physical invariant was violated by the caller.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Root bracketing, iteration or quadrature did not converge.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A point was requested outside the region where a quantity is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace dce
