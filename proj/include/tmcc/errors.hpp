#pragma once

#include <stdexcept>
#include <string>

namespace tmcc {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Input violates a documented precondition (bad range, bad size, mismatch).
class validation_error : public error {
public:
    explicit validation_error(const std::string& what) : error(what) {}
};

/// Numeric machinery failed: truncation bound exceeded, solver did not
/// converge. Distinct from validation_error so callers can map the two
/// onto different exit codes.
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& what) : error(what) {}
};

}  // namespace tmcc
