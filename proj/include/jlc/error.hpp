#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jlc {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model parameters, out-of-range indices, or a model that does not
/// satisfy the preconditions of the requested operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A coefficient or recurrence value became non-finite or non-positive.
class OverflowError : public Error {
public:
    OverflowError(const std::string& what, std::size_t index)
        : Error(what + " (index " + std::to_string(index) + ")"), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Adaptive truncation hit its limit before meeting the tolerance. Carries the
/// best partial values so callers may still use them.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, std::vector<std::complex<double>> partial,
                    double deficit)
        : Error(what), partial_(std::move(partial)), deficit_(deficit) {}
    const std::vector<std::complex<double>>& partial() const noexcept { return partial_; }
    double deficit() const noexcept { return deficit_; }

private:
    std::vector<std::complex<double>> partial_;
    double deficit_;
};

/// A resolvent coefficient was requested at (or numerically at) an eigenvalue.
class SpectralPointError : public Error {
public:
    SpectralPointError(const std::string& what, std::complex<double> denominator)
        : Error(what), denominator_(denominator) {}
    std::complex<double> denominator() const noexcept { return denominator_; }

private:
    std::complex<double> denominator_;
};

/// Numerical quality target not reached (Jost initialization, band spread, ...).
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Malformed model descriptor or coefficient table.
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& field,
               const std::string& message)
        : Error(file + ":" + std::to_string(line) + ": " +
                (field.empty() ? "" : "field '" + field + "': ") + message),
          line_(line), field_(field) {}
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

}  // namespace jlc
