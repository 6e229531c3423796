#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dqbfloc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text; carries the 1-based line number (0 if unknown).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// The oracle refused to enumerate a candidate universe of 2^log2_size elements.
class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(std::uint64_t log2_size)
        : Error("oracle budget exceeded: candidate universe has 2^" + std::to_string(log2_size) + " elements"),
          log2_size_(log2_size) {}
    [[nodiscard]] std::uint64_t log2_size() const { return log2_size_; }

private:
    std::uint64_t log2_size_;
};

class WellFormednessError : public Error {
public:
    using Error::Error;
};

class VariableSetMismatch : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace dqbfloc
