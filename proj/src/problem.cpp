#include "shishkin/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shishkin/error.hpp"
#include "shishkin/format.hpp"

namespace shishkin {

const char* condition_name(Condition c) noexcept {
    switch (c) {
        case Condition::EpsRange: return "eps-range";
        case Condition::EpsOrder: return "eps-order";
        case Condition::EpsCoincident: return "eps-coincident";
        case Condition::SignA1: return "(a1)-sign";
        case Condition::DominanceA1: return "(a1)-dominance";
        case Condition::AlphaA2: return "(a2)-alpha";
        case Condition::Horizon: return "horizon";
        case Condition::Finite: return "finite";
    }
    return "unknown";
}

namespace {

std::string validation_message(Condition c, const std::string& detail,
                               std::optional<std::size_t> row, std::optional<std::size_t> col,
                               std::optional<double> t) {
    std::string msg = std::string("validation failed [") + condition_name(c) + "]";
    if (row && col)
        msg += " at entry (" + std::to_string(*row + 1) + "," + std::to_string(*col + 1) + ")";
    else if (row)
        msg += " in row " + std::to_string(*row + 1);
    if (t) msg += " at t=" + format_g(*t);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}

}  // namespace

ValidationError::ValidationError(Condition condition, std::string detail,
                                 std::optional<std::size_t> row,
                                 std::optional<std::size_t> col, std::optional<double> t)
    : Error(validation_message(condition, detail, row, col, t)),
      condition_(condition),
      row_(row),
      col_(col),
      t_(t) {}

PerturbationVector::PerturbationVector(std::vector<double> eps) : eps_(std::move(eps)) {
    if (eps_.empty()) throw ValidationError(Condition::EpsRange, "need at least one parameter");
    for (std::size_t i = 0; i < eps_.size(); ++i) {
        if (!std::isfinite(eps_[i]) || eps_[i] <= 0.0 || eps_[i] > 1.0)
            throw ValidationError(Condition::EpsRange,
                                  "eps_" + std::to_string(i + 1) + "=" + format_g(eps_[i]) +
                                      " outside (0, 1]");
    }
    for (std::size_t i = 1; i < eps_.size(); ++i) {
        if (eps_[i] == eps_[i - 1])
            throw ValidationError(Condition::EpsCoincident,
                                  "eps_" + std::to_string(i) + " = eps_" + std::to_string(i + 1) +
                                      "; coincident parameters are not supported");
        if (eps_[i] < eps_[i - 1])
            throw ValidationError(Condition::EpsOrder,
                                  "eps_" + std::to_string(i) + " > eps_" + std::to_string(i + 1) +
                                      "; parameters must be strictly increasing");
    }
}

TimePolynomial::TimePolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    if (coeffs_.size() > kMaxDegree + 1)
        throw ParseError("polynomial degree " + std::to_string(coeffs_.size() - 1) +
                         " exceeds " + std::to_string(kMaxDegree));
    for (double c : coeffs_)
        if (!std::isfinite(c)) throw ParseError("non-finite polynomial coefficient");
}

double TimePolynomial::operator()(double t) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

bool TimePolynomial::is_constant() const noexcept {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c == 0.0; });
}

ProblemSpec::ProblemSpec(std::vector<std::vector<TimePolynomial>> a,
                         std::vector<TimePolynomial> f, Vector u0, double horizon,
                         PerturbationVector eps)
    : a_(std::move(a)),
      f_(std::move(f)),
      u0_(std::move(u0)),
      horizon_(horizon),
      eps_(std::move(eps)) {
    const std::size_t n = u0_.size();
    if (n == 0) throw ParseError("problem dimension must be positive");
    if (eps_.size() != n)
        throw ParseError("eps has " + std::to_string(eps_.size()) + " entries, expected " +
                         std::to_string(n));
    if (f_.size() != n)
        throw ParseError("f has " + std::to_string(f_.size()) + " entries, expected " +
                         std::to_string(n));
    if (a_.size() != n)
        throw ParseError("A has " + std::to_string(a_.size()) + " rows, expected " +
                         std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        if (a_[i].size() != n)
            throw ParseError("A row " + std::to_string(i + 1) + " has " +
                             std::to_string(a_[i].size()) + " entries, expected " +
                             std::to_string(n));
    for (double x : u0_)
        if (!std::isfinite(x)) throw ParseError("u0 has a non-finite entry");
    if (!std::isfinite(horizon_) || horizon_ <= 0.0)
        throw ParseError("T must be positive and finite, got " + format_g(horizon_));
}

ProblemSpec ProblemSpec::constant(const SquareMatrix& a, std::span<const double> f,
                                  std::span<const double> u0, double horizon,
                                  PerturbationVector eps) {
    const std::size_t n = a.size();
    std::vector<std::vector<TimePolynomial>> ap(n, std::vector<TimePolynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ap[i][j] = TimePolynomial::constant(a(i, j));
    std::vector<TimePolynomial> fp;
    for (double x : f) fp.push_back(TimePolynomial::constant(x));
    return ProblemSpec(std::move(ap), std::move(fp), Vector(u0.begin(), u0.end()), horizon,
                       std::move(eps));
}

void ProblemSpec::check_time(double t) const {
    if (!(t >= 0.0 && t <= horizon_))
        throw DomainError("t=" + format_g(t) + " outside [0, " + format_g(horizon_) + "]");
}

SquareMatrix ProblemSpec::eval_A(double t) const {
    check_time(t);
    const std::size_t n = size();
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = a_[i][j](t);
    return m;
}

Vector ProblemSpec::eval_f(double t) const {
    check_time(t);
    Vector v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = f_[i](t);
    return v;
}

bool ProblemSpec::has_constant_matrix() const noexcept {
    for (const auto& row : a_)
        for (const auto& p : row)
            if (!p.is_constant()) return false;
    return true;
}

bool ProblemSpec::has_constant_coefficients() const noexcept {
    return has_constant_matrix() && std::all_of(f_.begin(), f_.end(), [](const auto& p) { return p.is_constant(); });
}

ProblemSpec ProblemSpec::with_eps(PerturbationVector eps) const {
    return ProblemSpec(a_, f_, u0_, horizon_, std::move(eps));
}

ValidatedProblem validate(ProblemSpec spec, std::size_t sample_count) {
    if (sample_count < 2) throw Error("sample_count must be at least 2");
    const std::size_t n = spec.size();
    const double horizon = spec.horizon();

    double alpha = std::numeric_limits<double>::infinity();
    std::size_t alpha_row = 0;
    double alpha_t = 0.0;
    for (std::size_t s = 0; s < sample_count; ++s) {
        const double t = s + 1 == sample_count
                             ? horizon
                             : horizon * static_cast<double>(s) / static_cast<double>(sample_count - 1);
        const SquareMatrix a = spec.eval_A(t);
        if (!a.all_finite()) throw ValidationError(Condition::Finite, "A(t) not finite", {}, {}, t);
        for (std::size_t i = 0; i < n; ++i) {
            double off = 0.0;
            double row_sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                row_sum += a(i, j);
                if (j == i) continue;
                if (a(i, j) > 0.0)
                    throw ValidationError(Condition::SignA1,
                                          "off-diagonal entry " + format_g(a(i, j)) + " > 0", i, j, t);
                off += std::abs(a(i, j));
            }
            if (!(a(i, i) > off))
                throw ValidationError(Condition::DominanceA1,
                                      "a_ii=" + format_g(a(i, i)) + " <= sum |a_ij|=" + format_g(off),
                                      i, {}, t);
            if (row_sum < alpha) {
                alpha = row_sum;
                alpha_row = i;
                alpha_t = t;
            }
        }
    }
    // Unreachable under strict dominance, kept for rounding in the row sum.
    if (!(alpha > 0.0))
        throw ValidationError(Condition::AlphaA2, "minimum row sum " + format_g(alpha) + " <= 0",
                              alpha_row, {}, alpha_t);

    const double required = 2.0 * spec.eps().largest() / alpha;
    if (horizon < required)
        throw ValidationError(Condition::Horizon,
                              "T=" + format_g(horizon) + " < 2*eps_n/alpha=" + format_g(required));
    return ValidatedProblem(std::move(spec), alpha, sample_count);
}

}  // namespace shishkin
