#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace astroturf {

// Bad input data: malformed files, missing columns, inconsistent labels.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed tweet record. `offset` is the byte offset inside the record
// where parsing stopped (0 when the problem is a missing field).
class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t offset)
        : DataError(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Caller violated an API precondition (bad hyperparameter, dimension mismatch).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace astroturf
