#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slice4d {

// Root of everything the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonFiniteValue : public Error {
public:
    using Error::Error;
};

class NotARotation : public Error {
public:
    using Error::Error;
};

// Gram-Schmidt hit a (near) zero row; the orientation state is corrupt.
class DegenerateMatrix : public Error {
public:
    using Error::Error;
};

class InvalidEdgeLength : public Error {
public:
    using Error::Error;
};

class ParallelEdge : public Error {
public:
    using Error::Error;
};

// A polytope vertex lies on the slicing hyperplane.
class DegenerateSlice : public Error {
public:
    using Error::Error;
};

class InvalidPolytope : public Error {
public:
    using Error::Error;
};

class UnknownKey : public Error {
public:
    explicit UnknownKey(char symbol)
        : Error(std::string("unknown key symbol '") + symbol + "'"), symbol_(symbol) {}

    char symbol() const noexcept { return symbol_; }

private:
    char symbol_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t token_index, std::size_t offset)
        : Error("token " + std::to_string(token_index) + " (offset " + std::to_string(offset) +
                "): " + what),
          token_index_(token_index),
          offset_(offset) {}

    std::size_t token_index() const noexcept { return token_index_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t token_index_;
    std::size_t offset_;
};

// Thrown by replay(); the original error is nested (std::rethrow_if_nested).
class ReplayError : public Error {
public:
    ReplayError(const std::string& what, std::size_t event_index)
        : Error("event " + std::to_string(event_index) + ": " + what), event_index_(event_index) {}

    std::size_t event_index() const noexcept { return event_index_; }

private:
    std::size_t event_index_;
};

}  // namespace slice4d
