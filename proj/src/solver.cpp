#include "shishkin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "shishkin/error.hpp"
#include "shishkin/format.hpp"

namespace shishkin {

const char* kind_name(GridKind kind) noexcept {
    switch (kind) {
        case GridKind::Full: return "full";
        case GridKind::Smooth: return "smooth";
        case GridKind::Singular: return "singular";
    }
    return "unknown";
}

SolutionGrid::SolutionGrid(std::shared_ptr<const ShishkinMesh> mesh, std::size_t n, GridKind kind,
                           RhsMode rhs_mode)
    : mesh_(std::move(mesh)),
      n_(n),
      kind_(kind),
      rhs_mode_(rhs_mode),
      values_((mesh_->intervals() + 1) * n, 0.0) {}

bool SolutionGrid::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

SquareMatrix step_matrix(const ValidatedProblem& vp, const ShishkinMesh& mesh, std::size_t j) {
    const auto& spec = vp.spec();
    SquareMatrix m = spec.eval_A(mesh.point(j));
    const double delta = mesh.delta(j);
    for (std::size_t i = 0; i < m.size(); ++i) m(i, i) += spec.eps()[i] / delta;
    return m;
}

Vector discrete_rhs(const ValidatedProblem& vp, const ShishkinMesh& mesh, RhsMode mode,
                    std::size_t j) {
    if (mode == RhsMode::ZeroF) return Vector(vp.size(), 0.0);
    return vp.spec().eval_f(mesh.point(j));
}

SolutionGrid march(const ValidatedProblem& vp, std::shared_ptr<const ShishkinMesh> mesh,
                   std::span<const double> u_init, RhsMode rhs_mode, const SolverOptions& options) {
    const std::size_t n = vp.size();
    if (u_init.size() != n) throw SolveError("initial value has wrong dimension");
    for (double x : u_init)
        if (!std::isfinite(x)) throw SolveError("initial value is not finite");

    SolutionGrid grid(mesh, n, rhs_mode == RhsMode::ZeroF ? GridKind::Singular : GridKind::Full,
                      rhs_mode);
    std::copy(u_init.begin(), u_init.end(), grid.at(0).begin());

    const auto& eps = vp.spec().eps();
    const bool cache = options.cache_factorizations && vp.spec().has_constant_matrix();
    std::map<double, LuFactorization> factors;

    Vector rhs(n);
    for (std::size_t j = 1; j <= mesh->intervals(); ++j) {
        const double delta = mesh->delta(j);
        rhs = discrete_rhs(vp, *mesh, rhs_mode, j);
        const auto prev = grid.at(j - 1);
        for (std::size_t i = 0; i < n; ++i) rhs[i] += eps[i] / delta * prev[i];

        const SquareMatrix m = step_matrix(vp, *mesh, j);
        std::optional<LuFactorization> local;
        const LuFactorization* lu = nullptr;
        if (cache) {
            auto it = factors.find(delta);
            if (it == factors.end()) it = factors.emplace(delta, LuFactorization(m)).first;
            lu = &it->second;
        } else {
            lu = &local.emplace(m);
        }
        const Vector x = lu->solve(rhs);

        const Vector mx = m * x;
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(mx[i] - rhs[i]));
        if (!(residual <= options.residual_tol * (1.0 + norm_inf(rhs))))
            throw SolveError("step " + std::to_string(j) + " at t=" + format_g(mesh->point(j)) +
                             ": residual " + format_g(residual, 3) + " exceeds tolerance");
        std::copy(x.begin(), x.end(), grid.at(j).begin());
    }
    return grid;
}

SolutionGrid solve(const ValidatedProblem& vp, std::size_t intervals, const SolverOptions& options) {
    auto mesh = std::make_shared<const ShishkinMesh>(build_mesh(vp, intervals));
    return march(vp, std::move(mesh), vp.spec().u0(), RhsMode::GivenF, options);
}

DecomposedSolution decompose(const ValidatedProblem& vp, std::shared_ptr<const ShishkinMesh> mesh,
                             const SolverOptions& options) {
    const auto& spec = vp.spec();
    const Vector v0 = lu_solve(spec.eval_A(0.0), spec.eval_f(0.0));
    Vector w0(spec.u0().begin(), spec.u0().end());
    for (std::size_t i = 0; i < w0.size(); ++i) w0[i] -= v0[i];

    SolutionGrid smooth = march(vp, mesh, v0, RhsMode::GivenF, options);
    smooth.relabel(GridKind::Smooth);
    SolutionGrid singular = march(vp, std::move(mesh), w0, RhsMode::ZeroF, options);
    return {std::move(smooth), std::move(singular)};
}

std::vector<Vector> apply_discrete_operator(const ValidatedProblem& vp, const SolutionGrid& grid) {
    const auto& mesh = grid.mesh();
    const auto& eps = vp.spec().eps();
    const std::size_t n = grid.components();
    std::vector<Vector> out;
    out.reserve(mesh.intervals());
    for (std::size_t j = 1; j <= mesh.intervals(); ++j) {
        const auto u = grid.at(j);
        const auto prev = grid.at(j - 1);
        Vector lu = vp.spec().eval_A(mesh.point(j)) * u;
        for (std::size_t i = 0; i < n; ++i) lu[i] += eps[i] * (u[i] - prev[i]) / mesh.delta(j);
        out.push_back(std::move(lu));
    }
    return out;
}

double superposition_defect(const SolutionGrid& full, const DecomposedSolution& parts) {
    if (&full.mesh() != &parts.smooth.mesh() || &full.mesh() != &parts.singular.mesh())
        throw SolveError("superposition requires grids on the same mesh");
    double defect = 0.0;
    for (std::size_t j = 0; j <= full.intervals(); ++j)
        for (std::size_t i = 0; i < full.components(); ++i)
            defect = std::max(defect, std::abs(full.value(i, j) - parts.smooth.value(i, j) -
                                               parts.singular.value(i, j)));
    return defect;
}

MaxPrincipleCertificate certify_max_principle(const ValidatedProblem& vp, const SolutionGrid& grid,
                                              double tol) {
    MaxPrincipleCertificate cert;
    const auto u0 = grid.at(0);
    cert.min_value = *std::min_element(u0.begin(), u0.end());
    bool hypotheses = cert.min_value >= 0.0;
    for (std::size_t j = 1; hypotheses && j <= grid.intervals(); ++j) {
        const Vector rhs = discrete_rhs(vp, grid.mesh(), grid.rhs_mode(), j);
        hypotheses = std::all_of(rhs.begin(), rhs.end(), [](double x) { return x >= 0.0; });
    }
    for (std::size_t j = 0; j <= grid.intervals(); ++j)
        for (double x : grid.at(j)) cert.min_value = std::min(cert.min_value, x);
    if (!hypotheses) {
        cert.vacuous = true;
        cert.ok = true;
        return cert;
    }
    const double scale = std::max(1.0, grid.max_abs());
    cert.ok = cert.min_value >= -tol * scale;
    return cert;
}

StabilityCertificate certify_stability(const ValidatedProblem& vp, const SolutionGrid& grid,
                                       double rel_tol) {
    StabilityCertificate cert;
    double rhs_norm = 0.0;
    for (std::size_t j = 1; j <= grid.intervals(); ++j)
        rhs_norm = std::max(rhs_norm, norm_inf(discrete_rhs(vp, grid.mesh(), grid.rhs_mode(), j)));
    cert.bound = std::max(norm_inf(grid.at(0)), rhs_norm / vp.alpha());
    cert.max_norm = grid.max_abs();
    cert.ok = cert.max_norm <= cert.bound + rel_tol * cert.bound;
    return cert;
}

}  // namespace shishkin
