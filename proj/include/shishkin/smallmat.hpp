#pragma once

// Dense linear algebra for the small n x n systems that appear in each
// implicit step (n is the number of coupled equations, typically <= 16).

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace shishkin {

using Vector = std::vector<double>;

class SquareMatrix {
public:
    SquareMatrix() = default;
    /// Zero matrix of dimension n (n >= 1).
    explicit SquareMatrix(std::size_t n);
    /// Row-major nested initializer, e.g. {{2, -1}, {-1, 2}}.
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SquareMatrix identity(std::size_t n);
    static SquareMatrix diagonal(std::span<const double> d);

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * n_, n_};
    }

    bool all_finite() const noexcept;
    /// max_{ij} |m_ij|
    double max_abs() const noexcept;
    /// Induced infinity norm (max absolute row sum).
    double norm_inf() const noexcept;

    SquareMatrix& operator+=(const SquareMatrix& rhs);
    SquareMatrix& operator*=(double s);

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b);
SquareMatrix operator*(double s, SquareMatrix a);
Vector operator*(const SquareMatrix& a, std::span<const double> x);

double norm_inf(std::span<const double> v) noexcept;

/// LU factorization with partial pivoting, PA = LU stored in place.
///
/// A pivot whose magnitude is below 1e-14 * max|entry| of the original matrix
/// is treated as singular.
class LuFactorization {
public:
    static constexpr double kSingularityRatio = 1e-14;

    /// Throws SingularMatrixError naming the zero pivot, or Error when the
    /// matrix contains non-finite entries.
    explicit LuFactorization(SquareMatrix m);

    std::size_t size() const noexcept { return lu_.size(); }
    Vector solve(std::span<const double> rhs) const;

private:
    SquareMatrix lu_;
    std::vector<std::size_t> perm_;
};

Vector lu_solve(const SquareMatrix& m, std::span<const double> rhs);
SquareMatrix inverse(const SquareMatrix& m);

/// True iff every entry of inverse(m) is >= -tol.
bool is_inverse_nonnegative(const SquareMatrix& m, double tol);

}  // namespace shishkin
