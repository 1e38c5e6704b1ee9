#include "shishkin/smallmat.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <string>

#include "shishkin/error.hpp"

namespace shishkin {

SingularMatrixError::SingularMatrixError(std::size_t pivot_index, double pivot_value)
    : Error("singular matrix: pivot " + std::to_string(pivot_index + 1) +
            " has magnitude " + std::to_string(std::abs(pivot_value)) +
            " below the singularity threshold"),
      pivot_index_(pivot_index),
      pivot_value_(pivot_value) {}

SquareMatrix::SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()), data_() {
    data_.reserve(n_ * n_);
    for (const auto& r : rows) {
        if (r.size() != n_) throw ParseError("matrix initializer is not square");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::diagonal(std::span<const double> d) {
    SquareMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

bool SquareMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double SquareMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double SquareMatrix::norm_inf() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (double x : row(i)) s += std::abs(x);
        m = std::max(m, s);
    }
    return m;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& rhs) {
    assert(rhs.n_ == n_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

SquareMatrix& SquareMatrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    assert(a.size() == b.size());
    const std::size_t n = a.size();
    SquareMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) {
    a += b;
    return a;
}

SquareMatrix operator*(double s, SquareMatrix a) {
    a *= s;
    return a;
}

Vector operator*(const SquareMatrix& a, std::span<const double> x) {
    assert(x.size() == a.size());
    Vector y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto r = a.row(i);
        y[i] = std::inner_product(r.begin(), r.end(), x.begin(), 0.0);
    }
    return y;
}

double norm_inf(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

LuFactorization::LuFactorization(SquareMatrix m) : lu_(std::move(m)), perm_(lu_.size()) {
    const std::size_t n = lu_.size();
    if (n == 0) throw Error("empty matrix");
    if (!lu_.all_finite()) throw Error("matrix has non-finite entries");
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    const double threshold = kSingularityRatio * lu_.max_abs();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
        if (!(std::abs(lu_(p, k)) > threshold)) throw SingularMatrixError(k, lu_(p, k));
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
        }
        const double pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = lu_(i, k) / pivot;
            lu_(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
        }
    }
}

Vector LuFactorization::solve(std::span<const double> rhs) const {
    const std::size_t n = lu_.size();
    assert(rhs.size() == n);
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = rhs[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

Vector lu_solve(const SquareMatrix& m, std::span<const double> rhs) {
    return LuFactorization(m).solve(rhs);
}

SquareMatrix inverse(const SquareMatrix& m) {
    const std::size_t n = m.size();
    const LuFactorization lu(m);
    SquareMatrix inv(n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const Vector col = lu.solve(e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    return inv;
}

bool is_inverse_nonnegative(const SquareMatrix& m, double tol) {
    const SquareMatrix inv = inverse(m);
    for (std::size_t i = 0; i < inv.size(); ++i)
        for (double x : inv.row(i))
            if (x < -tol) return false;
    return true;
}

}  // namespace shishkin
