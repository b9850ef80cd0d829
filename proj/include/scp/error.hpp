#pragma once

#include <stdexcept>
#include <string>

namespace scp {

/// Input data or parameters break a documented invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Command-line misuse: unknown flag, missing or malformed argument.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace scp
