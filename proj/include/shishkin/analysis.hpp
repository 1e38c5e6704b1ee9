#pragma once

// Measurement harness: layer functions, the closed-form constant-coefficient
// solution, exact and two-mesh errors, and order-of-convergence studies over
// grids of perturbation parameters.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shishkin/problem.hpp"
#include "shishkin/smallmat.hpp"
#include "shishkin/solver.hpp"

namespace shishkin {

/// B_i(t) = exp(-alpha t / eps_i), i = 1..n.
Vector layer_functions(const PerturbationVector& eps, double alpha, double t);

/// exp(m) by scaling and squaring: m is scaled by 2^-s so that |m|_inf <= 1/2,
/// a degree-16 Taylor polynomial is evaluated, and the result squared s times.
SquareMatrix matrix_exponential(const SquareMatrix& m);

/// u(t) = A^-1 f + exp(-t E^-1 A) (u0 - A^-1 f) for constant A and f.
Vector exact_constant_solution(const SquareMatrix& a, std::span<const double> f,
                               std::span<const double> u0, const PerturbationVector& eps, double t);

/// Closed-form solution of a constant-coefficient problem.
class ConstantOracle {
public:
    /// Throws HarnessError when A or f depend on t.
    explicit ConstantOracle(const ProblemSpec& spec);

    Vector operator()(double t) const;

private:
    SquareMatrix generator_;  // -E^-1 A
    Vector steady_;           // A^-1 f
    Vector offset_;           // u0 - A^-1 f
};

/// max_{i,j} |U_i(t_j) - u_i(t_j)| over the grid's mesh points.
double exact_error(const SolutionGrid& grid, const ConstantOracle& oracle);

/// max_{i, coarse j} |coarse_i(t_j) - fine_i(t_j)|. The fine mesh must contain
/// every coarse point at even index 2j (to 1e-12 relative); otherwise HarnessError.
double two_mesh_difference(const SolutionGrid& coarse, const SolutionGrid& fine);

/// High-accuracy reference on the Shishkin mesh with `intervals` points:
/// 2 U_fine(t_2j) - U_coarse(t_j), U_fine computed on the bisected mesh.
/// Independent of the matrix exponential, so it can cross-check ConstantOracle.
SolutionGrid extrapolated_reference(const ValidatedProblem& vp, std::size_t intervals,
                                    const SolverOptions& options = {});

enum class ErrorMode { ExactOracle, TwoMesh };

const char* mode_name(ErrorMode mode) noexcept;

/// log2(coarse / fine); absent when either value is zero or not finite.
std::optional<double> observed_order(double coarse, double fine);

struct ConvergenceRow {
    std::size_t intervals = 0;
    double error = 0.0;                 // E^N (exact) or D^N (two-mesh)
    std::optional<double> order;        // log2(error(N) / error(2N)), absent on the last row
    double c_fit = 0.0;                 // error * N / ln N
};

struct ConvergenceReport {
    ErrorMode mode = ErrorMode::TwoMesh;
    std::string eps_label;
    std::vector<ConvergenceRow> rows;
};

struct HarnessOptions {
    SolverOptions solver;
    /// Worker threads for independent solves; 0 means hardware concurrency.
    unsigned threads = 1;
};

/// Runs one solve per N (two per N in two-mesh mode, on the Shishkin mesh and
/// its bisection). Throws HarnessError for a non-doubling N list or when the
/// exact oracle is requested for a problem with variable coefficients.
ConvergenceReport convergence_study(const ValidatedProblem& vp, std::span<const std::size_t> n_list,
                                    ErrorMode mode, const HarnessOptions& options = {});

/// Builds the report rows (orders and constants) from raw errors.
ConvergenceReport make_report(ErrorMode mode, std::string eps_label,
                              std::span<const std::size_t> n_list, std::span<const double> errors);

struct UniformRow {
    std::size_t intervals = 0;
    double error = 0.0;            // max over the parameter grid
    std::optional<double> order;   // log2 ratio of consecutive maxima
};

struct SweepReport {
    ErrorMode mode = ErrorMode::TwoMesh;
    std::vector<ConvergenceReport> configs;
    std::vector<UniformRow> uniform;
};

/// Aggregates the uniform rows from exactly the reports given. All reports
/// must share the same N list.
SweepReport make_sweep_report(ErrorMode mode, std::vector<ConvergenceReport> configs);

struct EpsConfig {
    std::string label;
    PerturbationVector eps;
};

/// eps_n in {2^0, 2^-3, ..., 2^-18}, eps_i = eps_(i+1) 2^-k for k in {2, 6, 10}.
std::vector<EpsConfig> default_eps_grid(std::size_t n);

std::string eps_label(const PerturbationVector& eps);

/// Validates the template with each parameter vector, runs convergence_study on
/// every configuration and reduces the results. Output is ordered by eps then
/// N regardless of the thread count.
SweepReport uniform_sweep(const ProblemSpec& problem_template, std::span<const EpsConfig> grid,
                          std::span<const std::size_t> n_list, ErrorMode mode,
                          const HarnessOptions& options = {},
                          std::size_t sample_count = kDefaultSampleCount);

/// Fitted constants C in max_i |W_i(t_j)| <= C B_n(t_j), taken separately over
/// mesh points inside the layer region (t_j < s_n) and outside it.
struct LayerDecayFit {
    double c_inner = 0.0;
    double c_outer = 0.0;
    std::size_t inner_points = 0;
    std::size_t outer_points = 0;
};

LayerDecayFit fit_layer_decay(const ValidatedProblem& vp, const SolutionGrid& singular);

}  // namespace shishkin
