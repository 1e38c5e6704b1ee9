#include "shishkin/analysis.hpp"

#include <cmath>

#include "shishkin/error.hpp"

namespace shishkin {

namespace {

constexpr int kTaylorDegree = 16;
constexpr double kScaledNorm = 0.5;

}  // namespace

Vector layer_functions(const PerturbationVector& eps, double alpha, double t) {
    Vector b(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) b[i] = std::exp(-alpha * t / eps[i]);
    return b;
}

SquareMatrix matrix_exponential(const SquareMatrix& m) {
    if (!m.all_finite()) throw Error("matrix exponential of a non-finite matrix");
    const std::size_t n = m.size();
    const double norm = m.norm_inf();
    int squarings = 0;
    if (norm > kScaledNorm) squarings = static_cast<int>(std::ceil(std::log2(norm / kScaledNorm)));
    const SquareMatrix scaled = std::ldexp(1.0, -squarings) * m;

    // Horner: I + Y(I + Y/2(I + Y/3(...)))
    const SquareMatrix id = SquareMatrix::identity(n);
    SquareMatrix p = id;
    for (int k = kTaylorDegree; k >= 1; --k) p = id + (1.0 / k) * (scaled * p);
    for (int s = 0; s < squarings; ++s) p = p * p;
    return p;
}

Vector exact_constant_solution(const SquareMatrix& a, std::span<const double> f,
                               std::span<const double> u0, const PerturbationVector& eps, double t) {
    const std::size_t n = a.size();
    const Vector steady = lu_solve(a, f);
    SquareMatrix x(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) x(i, j) = -t * a(i, j) / eps[i];
    Vector offset(n);
    for (std::size_t i = 0; i < n; ++i) offset[i] = u0[i] - steady[i];
    Vector u = matrix_exponential(x) * offset;
    for (std::size_t i = 0; i < n; ++i) u[i] += steady[i];
    return u;
}

ConstantOracle::ConstantOracle(const ProblemSpec& spec) {
    if (!spec.has_constant_coefficients())
        throw HarnessError("exact oracle needs constant A and f; use two_mesh mode for this problem");
    const std::size_t n = spec.size();
    const SquareMatrix a = spec.eval_A(0.0);
    steady_ = lu_solve(a, spec.eval_f(0.0));
    generator_ = SquareMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) generator_(i, j) = -a(i, j) / spec.eps()[i];
    offset_.resize(n);
    for (std::size_t i = 0; i < n; ++i) offset_[i] = spec.u0()[i] - steady_[i];
}

Vector ConstantOracle::operator()(double t) const {
    Vector u = matrix_exponential(t * generator_) * offset_;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += steady_[i];
    return u;
}

double exact_error(const SolutionGrid& grid, const ConstantOracle& oracle) {
    double err = 0.0;
    for (std::size_t j = 0; j <= grid.intervals(); ++j) {
        const Vector u = oracle(grid.mesh().point(j));
        const auto approx = grid.at(j);
        for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(approx[i] - u[i]));
    }
    return err;
}

double two_mesh_difference(const SolutionGrid& coarse, const SolutionGrid& fine) {
    const auto& cm = coarse.mesh();
    const auto& fm = fine.mesh();
    if (coarse.components() != fine.components())
        throw HarnessError("two-mesh grids have different component counts");
    if (fm.intervals() != 2 * cm.intervals())
        throw HarnessError("fine mesh has " + std::to_string(fm.intervals()) +
                           " intervals, expected " + std::to_string(2 * cm.intervals()));
    const double scale = cm.horizon();
    for (std::size_t j = 0; j <= cm.intervals(); ++j)
        if (std::abs(cm.point(j) - fm.point(2 * j)) > 1e-12 * scale)
            throw HarnessError("meshes are not nested at coarse point j=" + std::to_string(j));

    double diff = 0.0;
    for (std::size_t j = 0; j <= cm.intervals(); ++j)
        for (std::size_t i = 0; i < coarse.components(); ++i)
            diff = std::max(diff, std::abs(coarse.value(i, j) - fine.value(i, 2 * j)));
    return diff;
}

}  // namespace shishkin
