#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfrp {

// Input rejected by a precondition of a closed-form formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Schema or value problem in user-supplied data or configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed CSV row. `row` is the 1-based line number in the source, header included.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t row, std::string column, const std::string& what)
        : ValidationError("row " + std::to_string(row) + ", column " + column + ": " + what),
          row_(row),
          column_(std::move(column)) {}

    std::size_t row() const noexcept { return row_; }
    const std::string& column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

// Missing or contradictory configuration (e.g. no rupture-strain source).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite loss/fitness during training or optimization.
class NumericError : public std::runtime_error {
public:
    NumericError(std::size_t iteration, std::size_t index, const std::string& what)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ", index " +
                             std::to_string(index) + ")"),
          iteration_(iteration),
          index_(index) {}

    std::size_t iteration() const noexcept { return iteration_; }
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t iteration_;
    std::size_t index_;
};

}  // namespace cfrp
