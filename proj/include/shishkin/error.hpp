#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace shishkin {

/// Base of every error thrown by the library. The message is a single line
/// suitable for a CLI diagnostic.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad JSON, wrong shapes, unknown keys.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A pivot fell below the scale-relative singularity threshold.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(std::size_t pivot_index, double pivot_value);

    std::size_t pivot_index() const noexcept { return pivot_index_; }
    double pivot_value() const noexcept { return pivot_value_; }

private:
    std::size_t pivot_index_;
    double pivot_value_;
};

/// Evaluation requested outside [0, T].
class DomainError : public Error {
public:
    using Error::Error;
};

enum class Condition {
    EpsRange,       // 0 < eps_i <= 1
    EpsOrder,       // eps strictly increasing
    EpsCoincident,  // two equal parameters
    SignA1,         // off-diagonal a_ij(t) <= 0
    DominanceA1,    // a_ii(t) > sum_{j != i} |a_ij(t)|
    AlphaA2,        // min row sum must be positive
    Horizon,        // T >= 2 eps_n / alpha
    Finite,         // NaN or Inf in the data
};

const char* condition_name(Condition c) noexcept;

/// A problem violates one of the admissibility conditions. Row and column are
/// zero-based internally and reported one-based in the message.
class ValidationError : public Error {
public:
    ValidationError(Condition condition, std::string detail,
                    std::optional<std::size_t> row = std::nullopt,
                    std::optional<std::size_t> col = std::nullopt,
                    std::optional<double> t = std::nullopt);

    Condition condition() const noexcept { return condition_; }
    std::optional<std::size_t> row() const noexcept { return row_; }
    std::optional<std::size_t> col() const noexcept { return col_; }
    std::optional<double> t() const noexcept { return t_; }

private:
    Condition condition_;
    std::optional<std::size_t> row_;
    std::optional<std::size_t> col_;
    std::optional<double> t_;
};

/// Invalid mesh request (e.g. N not divisible by 2^n).
class MeshError : public Error {
public:
    using Error::Error;
};

/// Step solve failed its residual check.
class SolveError : public Error {
public:
    using Error::Error;
};

/// The measurement harness cannot proceed: oracle inapplicable, grids not
/// nested, N list not doubling.
class HarnessError : public Error {
public:
    using Error::Error;
};

}  // namespace shishkin
