#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <thread>

#include "shishkin/analysis.hpp"
#include "shishkin/error.hpp"
#include "shishkin/format.hpp"
#include "shishkin/mesh.hpp"

namespace shishkin {

namespace {

// Runs task(k) for k < count on up to `threads` workers. Each task writes only
// to its own slot, so the result is independent of scheduling. The first
// failure by index is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::vector<std::exception_ptr> failures(count);
    if (threads <= 1) {
        for (std::size_t k = 0; k < count; ++k) {
            try {
                task(k);
            } catch (...) {
                failures[k] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w)
            workers.emplace_back([&] {
                for (std::size_t k = next++; k < count; k = next++) {
                    try {
                        task(k);
                    } catch (...) {
                        failures[k] = std::current_exception();
                    }
                }
            });
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

void check_doubling(std::span<const std::size_t> n_list) {
    if (n_list.empty()) throw HarnessError("empty N list");
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (n_list[k] != 2 * n_list[k - 1])
            throw HarnessError("N list must be strictly doubling: " + std::to_string(n_list[k - 1]) +
                               " then " + std::to_string(n_list[k]));
}

double measure(const ValidatedProblem& vp, std::size_t intervals, ErrorMode mode,
               const ConstantOracle* oracle, const SolverOptions& solver) {
    auto mesh = std::make_shared<const ShishkinMesh>(build_mesh(vp, intervals));
    const SolutionGrid coarse = march(vp, mesh, vp.spec().u0(), RhsMode::GivenF, solver);
    if (mode == ErrorMode::ExactOracle) return exact_error(coarse, *oracle);
    auto fine_mesh = std::make_shared<const ShishkinMesh>(bisect(*mesh));
    const SolutionGrid fine = march(vp, fine_mesh, vp.spec().u0(), RhsMode::GivenF, solver);
    return two_mesh_difference(coarse, fine);
}

}  // namespace

SolutionGrid extrapolated_reference(const ValidatedProblem& vp, std::size_t intervals,
                                    const SolverOptions& options) {
    auto mesh = std::make_shared<const ShishkinMesh>(build_mesh(vp, intervals));
    SolutionGrid coarse = march(vp, mesh, vp.spec().u0(), RhsMode::GivenF, options);
    auto fine_mesh = std::make_shared<const ShishkinMesh>(bisect(*mesh));
    const SolutionGrid fine = march(vp, fine_mesh, vp.spec().u0(), RhsMode::GivenF, options);
    for (std::size_t j = 0; j <= intervals; ++j) {
        auto u = coarse.at(j);
        const auto uf = fine.at(2 * j);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = 2.0 * uf[i] - u[i];
    }
    return coarse;
}

const char* mode_name(ErrorMode mode) noexcept {
    return mode == ErrorMode::ExactOracle ? "exact" : "two_mesh";
}

std::optional<double> observed_order(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0) || !std::isfinite(coarse) || !std::isfinite(fine))
        return std::nullopt;
    return std::log2(coarse / fine);
}

ConvergenceReport make_report(ErrorMode mode, std::string label,
                              std::span<const std::size_t> n_list, std::span<const double> errors) {
    check_doubling(n_list);
    if (errors.size() != n_list.size()) throw HarnessError("one error per N required");
    ConvergenceReport report{mode, std::move(label), {}};
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        ConvergenceRow row;
        row.intervals = n_list[k];
        row.error = errors[k];
        if (k + 1 < n_list.size()) row.order = observed_order(errors[k], errors[k + 1]);
        row.c_fit = errors[k] * static_cast<double>(n_list[k]) /
                    std::log(static_cast<double>(n_list[k]));
        report.rows.push_back(row);
    }
    return report;
}

std::string eps_label(const PerturbationVector& eps) {
    std::string label = "eps=";
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (i) label += ';';
        label += format_g(eps[i], 6);
    }
    return label;
}

ConvergenceReport convergence_study(const ValidatedProblem& vp, std::span<const std::size_t> n_list,
                                    ErrorMode mode, const HarnessOptions& options) {
    check_doubling(n_list);
    std::optional<ConstantOracle> oracle;
    if (mode == ErrorMode::ExactOracle) oracle.emplace(vp.spec());

    std::vector<double> errors(n_list.size());
    parallel_for(n_list.size(), options.threads, [&](std::size_t k) {
        errors[k] = measure(vp, n_list[k], mode, oracle ? &*oracle : nullptr, options.solver);
    });
    return make_report(mode, eps_label(vp.spec().eps()), n_list, errors);
}

SweepReport make_sweep_report(ErrorMode mode, std::vector<ConvergenceReport> configs) {
    SweepReport sweep{mode, std::move(configs), {}};
    if (sweep.configs.empty()) return sweep;
    const auto& first = sweep.configs.front().rows;
    for (std::size_t k = 0; k < first.size(); ++k) {
        UniformRow row;
        row.intervals = first[k].intervals;
        for (const auto& c : sweep.configs) {
            if (c.rows.size() != first.size() || c.rows[k].intervals != row.intervals)
                throw HarnessError("sweep reports use different N lists");
            row.error = std::max(row.error, c.rows[k].error);
        }
        sweep.uniform.push_back(row);
    }
    for (std::size_t k = 0; k + 1 < sweep.uniform.size(); ++k)
        sweep.uniform[k].order = observed_order(sweep.uniform[k].error, sweep.uniform[k + 1].error);
    return sweep;
}

std::vector<EpsConfig> default_eps_grid(std::size_t n) {
    std::vector<EpsConfig> grid;
    // k is meaningless for a single layer
    const std::vector<int> ks = n > 1 ? std::vector<int>{2, 6, 10} : std::vector<int>{0};
    for (int k : ks) {
        for (int e = 0; e <= 18; e += 3) {
            std::vector<double> eps(n);
            eps[n - 1] = std::ldexp(1.0, -e);
            for (std::size_t i = n - 1; i-- > 0;) eps[i] = std::ldexp(eps[i + 1], -k);
            std::string label = "eps_n=2^-" + std::to_string(e);
            if (n > 1) label += " k=" + std::to_string(k);
            grid.push_back({std::move(label),
                            PerturbationVector(std::move(eps))});
        }
    }
    return grid;
}

SweepReport uniform_sweep(const ProblemSpec& problem_template, std::span<const EpsConfig> grid,
                          std::span<const std::size_t> n_list, ErrorMode mode,
                          const HarnessOptions& options, std::size_t sample_count) {
    check_doubling(n_list);

    std::vector<std::size_t> order(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ea = grid[a].eps.values();
        const auto eb = grid[b].eps.values();
        return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
    });

    std::vector<ValidatedProblem> problems;
    std::vector<std::optional<ConstantOracle>> oracles;
    problems.reserve(grid.size());
    for (std::size_t c : order) {
        problems.push_back(validate(problem_template.with_eps(grid[c].eps), sample_count));
        oracles.emplace_back();
        if (mode == ErrorMode::ExactOracle) oracles.back().emplace(problems.back().spec());
    }

    const std::size_t per = n_list.size();
    std::vector<double> errors(problems.size() * per);
    parallel_for(errors.size(), options.threads, [&](std::size_t task) {
        const std::size_t c = task / per;
        const std::size_t k = task % per;
        const auto& oracle = oracles[c];
        errors[task] = measure(problems[c], n_list[k], mode, oracle ? &*oracle : nullptr,
                               options.solver);
    });

    std::vector<ConvergenceReport> reports;
    for (std::size_t c = 0; c < problems.size(); ++c)
        reports.push_back(make_report(mode, grid[order[c]].label, n_list,
                                      std::span<const double>(errors).subspan(c * per, per)));
    return make_sweep_report(mode, std::move(reports));
}

LayerDecayFit fit_layer_decay(const ValidatedProblem& vp, const SolutionGrid& singular) {
    const auto& mesh = singular.mesh();
    const auto& eps = vp.spec().eps();
    const double sigma_n = mesh.sigmas().back();
    LayerDecayFit fit;
    for (std::size_t j = 0; j <= mesh.intervals(); ++j) {
        const double t = mesh.point(j);
        const double envelope = std::exp(-vp.alpha() * t / eps.largest());
        const double w = norm_inf(singular.at(j));
        const double ratio = w == 0.0 ? 0.0 : w / envelope;
        if (t < sigma_n) {
            fit.c_inner = std::max(fit.c_inner, ratio);
            ++fit.inner_points;
        } else {
            fit.c_outer = std::max(fit.c_outer, ratio);
            ++fit.outer_points;
        }
    }
    return fit;
}

}  // namespace shishkin
