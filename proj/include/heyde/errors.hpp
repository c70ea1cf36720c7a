#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heyde {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid group construction or elements from different groups.
class GroupError : public Error {
public:
    using Error::Error;
};

/// Matrix entry a_ij violating n_j * a_ij = 0 (mod n_i).
class IncompatibleMatrix : public Error {
public:
    IncompatibleMatrix(std::size_t row, std::size_t col, const std::string& what)
        : Error(what), row_(row), col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

class NotAnAutomorphism : public Error {
public:
    using Error::Error;
};

class InvalidDistribution : public Error {
public:
    using Error::Error;
};

class InvalidCharFunction : public Error {
public:
    using Error::Error;
};

/// A character value sits too close to 1 to decide membership reliably.
class AmbiguousMembership : public Error {
public:
    using Error::Error;
};

/// Logarithm of a vanishing or non-positive characteristic function value.
class DomainError : public Error {
public:
    using Error::Error;
};

class NonCanonicalInstance : public Error {
public:
    using Error::Error;
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
};

/// The exact and the Fourier-side predicate returned different verdicts.
class PredicateDisagreement : public Error {
public:
    using Error::Error;
};

class SearchSpaceOverflow : public Error {
public:
    using Error::Error;
};

/// Malformed JSON input.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace heyde
