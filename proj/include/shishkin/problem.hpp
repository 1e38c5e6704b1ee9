#pragma once

// Initial value problem  E u'(t) + A(t) u(t) = f(t),  t in (0, T],  u(0) given,
// with E = diag(eps_1, ..., eps_n), 0 < eps_1 < ... < eps_n <= 1.

#include <cstddef>
#include <span>
#include <vector>

#include "shishkin/smallmat.hpp"

namespace shishkin {

/// Ordered, pairwise distinct perturbation parameters.
class PerturbationVector {
public:
    /// Throws ValidationError (EpsRange / EpsCoincident / EpsOrder).
    explicit PerturbationVector(std::vector<double> eps);

    std::size_t size() const noexcept { return eps_.size(); }
    double operator[](std::size_t i) const { return eps_[i]; }
    double largest() const { return eps_.back(); }
    std::span<const double> values() const noexcept { return eps_; }

    SquareMatrix as_matrix() const { return SquareMatrix::diagonal(eps_); }

private:
    std::vector<double> eps_;
};

/// c_0 + c_1 t + ... + c_d t^d, d <= 16.
class TimePolynomial {
public:
    static constexpr std::size_t kMaxDegree = 16;

    TimePolynomial() = default;
    /// Throws ParseError on non-finite coefficients or degree > 16.
    explicit TimePolynomial(std::vector<double> coeffs);
    static TimePolynomial constant(double c) { return TimePolynomial({c}); }

    double operator()(double t) const noexcept;
    /// True when every coefficient beyond c_0 is zero.
    bool is_constant() const noexcept;
    std::span<const double> coeffs() const noexcept { return coeffs_; }

private:
    std::vector<double> coeffs_;
};

class ProblemSpec {
public:
    /// Throws ParseError for inconsistent dimensions, non-finite data, or T <= 0.
    ProblemSpec(std::vector<std::vector<TimePolynomial>> a, std::vector<TimePolynomial> f,
                Vector u0, double horizon, PerturbationVector eps);

    /// Constant-coefficient convenience constructor.
    static ProblemSpec constant(const SquareMatrix& a, std::span<const double> f,
                                std::span<const double> u0, double horizon,
                                PerturbationVector eps);

    std::size_t size() const noexcept { return u0_.size(); }
    double horizon() const noexcept { return horizon_; }
    const PerturbationVector& eps() const noexcept { return eps_; }
    std::span<const double> u0() const noexcept { return u0_; }
    const TimePolynomial& a_entry(std::size_t i, std::size_t j) const { return a_[i][j]; }
    const TimePolynomial& f_entry(std::size_t i) const { return f_[i]; }

    /// A(t) by Horner's scheme; throws DomainError outside [0, T].
    SquareMatrix eval_A(double t) const;
    /// f(t); throws DomainError outside [0, T].
    Vector eval_f(double t) const;

    /// A and f both constant in t.
    bool has_constant_coefficients() const noexcept;
    bool has_constant_matrix() const noexcept;

    /// Same A, f, u0, T with a different parameter vector.
    ProblemSpec with_eps(PerturbationVector eps) const;

private:
    void check_time(double t) const;

    std::vector<std::vector<TimePolynomial>> a_;
    std::vector<TimePolynomial> f_;
    Vector u0_;
    double horizon_;
    PerturbationVector eps_;
};

/// A ProblemSpec that passed the admissibility checks, together with the
/// alpha used for the mesh and the stability bound.
class ValidatedProblem {
public:
    const ProblemSpec& spec() const noexcept { return spec_; }
    double alpha() const noexcept { return alpha_; }
    std::size_t sample_count() const noexcept { return sample_count_; }
    std::size_t size() const noexcept { return spec_.size(); }

private:
    friend ValidatedProblem validate(ProblemSpec spec, std::size_t sample_count);
    ValidatedProblem(ProblemSpec spec, double alpha, std::size_t sample_count)
        : spec_(std::move(spec)), alpha_(alpha), sample_count_(sample_count) {}

    ProblemSpec spec_;
    double alpha_;
    std::size_t sample_count_;
};

inline constexpr std::size_t kDefaultSampleCount = 1024;

/// Checks (a1) sign and dominance and computes alpha = min row sum over
/// sample_count uniformly spaced times in [0, T], then the horizon condition
/// T >= 2 eps_n / alpha. Conditions are sampled, not proven: a violation
/// strictly between samples goes undetected.
///
/// alpha is taken equal to the sampled minimum row sum (the supremum of the
/// admissible values).
ValidatedProblem validate(ProblemSpec spec, std::size_t sample_count = kDefaultSampleCount);

}  // namespace shishkin
