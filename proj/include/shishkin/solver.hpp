#pragma once

// Backward Euler on a Shishkin mesh:
//
//   E (U(t_j) - U(t_(j-1))) / delta_j + A(t_j) U(t_j) = f(t_j),   U(t_0) = u(0).
//
// Each step solves the n x n system M_j U(t_j) = f(t_j) + (E/delta_j) U(t_(j-1))
// with M_j = E/delta_j + A(t_j), an M-matrix under (a1).

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "shishkin/mesh.hpp"
#include "shishkin/problem.hpp"
#include "shishkin/smallmat.hpp"

namespace shishkin {

enum class RhsMode { GivenF, ZeroF };
enum class GridKind { Full, Smooth, Singular };

const char* kind_name(GridKind kind) noexcept;

/// Discrete solution U_i(t_j), i < n, j <= N, bound to the mesh it was computed on.
class SolutionGrid {
public:
    SolutionGrid(std::shared_ptr<const ShishkinMesh> mesh, std::size_t n, GridKind kind,
                 RhsMode rhs_mode);

    const ShishkinMesh& mesh() const noexcept { return *mesh_; }
    const std::shared_ptr<const ShishkinMesh>& mesh_ptr() const noexcept { return mesh_; }
    std::size_t components() const noexcept { return n_; }
    std::size_t intervals() const noexcept { return mesh_->intervals(); }
    GridKind kind() const noexcept { return kind_; }
    RhsMode rhs_mode() const noexcept { return rhs_mode_; }
    void relabel(GridKind kind) noexcept { kind_ = kind; }

    double value(std::size_t i, std::size_t j) const { return values_[j * n_ + i]; }
    /// U(t_j) as an n-vector.
    std::span<const double> at(std::size_t j) const { return {values_.data() + j * n_, n_}; }
    std::span<double> at(std::size_t j) { return {values_.data() + j * n_, n_}; }

    double max_abs() const noexcept { return norm_inf(values_); }
    bool all_finite() const noexcept;

private:
    std::shared_ptr<const ShishkinMesh> mesh_;
    std::size_t n_;
    GridKind kind_;
    RhsMode rhs_mode_;
    std::vector<double> values_;
};

struct DecomposedSolution {
    SolutionGrid smooth;    // L^N V = f,  V(0) = A(0)^-1 f(0)
    SolutionGrid singular;  // L^N W = 0,  W(0) = u(0) - V(0)
};

struct SolverOptions {
    /// Per-step bound on |M x - rhs|_inf / (1 + |rhs|_inf).
    double residual_tol = 1e-12;
    /// Reuse step factorizations for equal delta_j. Only honoured when A is
    /// constant in t; results are bit-identical to the uncached path.
    bool cache_factorizations = false;
};

/// M_j = E/delta_j + A(t_j), 1 <= j <= N.
SquareMatrix step_matrix(const ValidatedProblem& vp, const ShishkinMesh& mesh, std::size_t j);

/// Right-hand side of L^N at t_j for the given mode (f(t_j) or 0).
Vector discrete_rhs(const ValidatedProblem& vp, const ShishkinMesh& mesh, RhsMode mode,
                    std::size_t j);

/// Marches j = 1..N. Throws SolveError if a step residual exceeds the tolerance.
/// The grid kind is Full for GivenF and Singular for ZeroF.
SolutionGrid march(const ValidatedProblem& vp, std::shared_ptr<const ShishkinMesh> mesh,
                   std::span<const double> u_init, RhsMode rhs_mode,
                   const SolverOptions& options = {});

/// build_mesh + march from u(0) with f.
SolutionGrid solve(const ValidatedProblem& vp, std::size_t intervals,
                   const SolverOptions& options = {});

DecomposedSolution decompose(const ValidatedProblem& vp, std::shared_ptr<const ShishkinMesh> mesh,
                             const SolverOptions& options = {});

/// (L^N U)(t_j) for j = 1..N; entry j-1 holds step j.
std::vector<Vector> apply_discrete_operator(const ValidatedProblem& vp, const SolutionGrid& grid);

/// max_{i,j} |U - (V + W)|.
double superposition_defect(const SolutionGrid& full, const DecomposedSolution& parts);

struct MaxPrincipleCertificate {
    bool ok = true;
    /// Hypotheses (U(0) >= 0, rhs >= 0) unmet; nothing was claimed.
    bool vacuous = false;
    double min_value = 0.0;
    explicit operator bool() const noexcept { return ok; }
};

/// If U(0) >= 0 and rhs(t_j) >= 0 for all j, checks U >= -tol * max(1, |U|_inf).
/// Otherwise passes vacuously.
MaxPrincipleCertificate certify_max_principle(const ValidatedProblem& vp, const SolutionGrid& grid,
                                              double tol = 1e-12);

struct StabilityCertificate {
    double bound = 0.0;     // max{|U(0)|, max_j |rhs(t_j)| / alpha}
    double max_norm = 0.0;  // max_{i,j} |U_i(t_j)|
    bool ok = false;
};

StabilityCertificate certify_stability(const ValidatedProblem& vp, const SolutionGrid& grid,
                                       double rel_tol = 1e-10);

}  // namespace shishkin
