#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shishkin/error.hpp"
#include "shishkin/format.hpp"
#include "shishkin/problem_io.hpp"

namespace shishkin::cli {

namespace {

enum class Command { Validate, Mesh, Solve, Converge, Sweep };

struct RunConfig {
    Command command = Command::Validate;
    std::string problem_path;
    std::vector<std::size_t> intervals;
    ErrorMode mode = ErrorMode::TwoMesh;
    std::string output_path;
    bool json = false;
    bool decompose = false;
    bool certify = false;
    bool cache = false;
    std::size_t samples = kDefaultSampleCount;
    unsigned threads = 1;
    double residual_tol = 1e-12;
    std::optional<double> min_order;
    std::vector<int> sweep_k{2, 6, 10};
    std::vector<int> sweep_exponents{0, 3, 6, 9, 12, 15, 18};
};

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string s;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) s += sep;
        s += parts[k];
    }
    return s;
}

std::string fmt_opt(const std::optional<double>& x) { return x ? format_g(*x) : std::string(); }

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            os_ = &fallback;
        } else {
            file_.open(path);
            if (!file_) throw Error("cannot open output file " + path);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

int cmd_validate(const RunConfig& cfg, std::ostream& os) {
    const ValidatedProblem vp = validate(load_problem(cfg.problem_path), cfg.samples);
    const auto& spec = vp.spec();
    const double required = 2.0 * spec.eps().largest() / vp.alpha();
    if (cfg.json) {
        nlohmann::json doc;
        doc["n"] = spec.size();
        doc["T"] = spec.horizon();
        doc["alpha"] = vp.alpha();
        doc["sample_count"] = vp.sample_count();
        doc["horizon_required"] = required;
        doc["constant_coefficients"] = spec.has_constant_coefficients();
        os << doc.dump(2) << '\n';
    } else {
        os << "alpha = " << format_g(vp.alpha()) << '\n'
           << "n = " << spec.size() << '\n'
           << "T = " << format_g(spec.horizon()) << " (requires >= " << format_g(required) << ")\n"
           << "samples = " << vp.sample_count() << '\n'
           << "constant coefficients = " << (spec.has_constant_coefficients() ? "yes" : "no")
           << '\n';
    }
    return kOk;
}

std::size_t single_n(const RunConfig& cfg) {
    if (cfg.intervals.size() != 1) throw ParseError("--N takes a single value for this command");
    return cfg.intervals.front();
}

int cmd_mesh(const RunConfig& cfg, std::ostream& os) {
    const ValidatedProblem vp = validate(load_problem(cfg.problem_path), cfg.samples);
    write_mesh_csv(os, build_mesh(vp, single_n(cfg)));
    return kOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const ValidatedProblem vp = validate(load_problem(cfg.problem_path), cfg.samples);
    SolverOptions opts;
    opts.residual_tol = cfg.residual_tol;
    opts.cache_factorizations = cfg.cache;
    auto mesh = std::make_shared<const ShishkinMesh>(build_mesh(vp, single_n(cfg)));
    const SolutionGrid grid = march(vp, mesh, vp.spec().u0(), RhsMode::GivenF, opts);
    std::optional<DecomposedSolution> parts;
    if (cfg.decompose) parts = decompose(vp, mesh, opts);

    bool certified = true;
    if (cfg.certify) {
        const auto mp = certify_max_principle(vp, grid);
        const auto st = certify_stability(vp, grid);
        os << "# max_principle=" << (mp.ok ? "ok" : "FAIL") << (mp.vacuous ? " (vacuous)" : "")
           << " min=" << format_g(mp.min_value) << '\n';
        os << "# stability=" << (st.ok ? "ok" : "FAIL") << " bound=" << format_g(st.bound)
           << " max_norm=" << format_g(st.max_norm) << '\n';
        certified = mp.ok && st.ok;
        if (parts) {
            const double defect = superposition_defect(grid, *parts);
            const bool ok = defect <= 1e-10 * (1.0 + grid.max_abs());
            os << "# superposition=" << (ok ? "ok" : "FAIL") << " defect=" << format_g(defect)
               << '\n';
            certified = certified && ok;
        }
    }
    write_solution_csv(os, grid, parts ? &*parts : nullptr);
    if (!certified) {
        err << "error: certification failed for N=" << grid.intervals() << '\n';
        return kBandViolation;
    }
    return kOk;
}

bool check_band(const RunConfig& cfg, const SweepReport& report, std::ostream& err) {
    if (!cfg.min_order) return true;
    bool ok = true;
    for (const auto& row : report.uniform) {
        if (row.order && *row.order < *cfg.min_order) {
            err << "error: order " << format_g(*row.order, 4) << " at N=" << row.intervals
                << " below --min-order " << format_g(*cfg.min_order, 4) << '\n';
            ok = false;
        }
    }
    return ok;
}

int emit_report(const RunConfig& cfg, const SweepReport& report, std::ostream& os,
                std::ostream& err) {
    if (cfg.json)
        os << report_json(report) << '\n';
    else
        write_report_csv(os, report);
    return check_band(cfg, report, err) ? kOk : kBandViolation;
}

HarnessOptions harness_options(const RunConfig& cfg) {
    HarnessOptions opts;
    opts.threads = cfg.threads;
    opts.solver.residual_tol = cfg.residual_tol;
    opts.solver.cache_factorizations = cfg.cache;
    return opts;
}

int cmd_converge(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const ValidatedProblem vp = validate(load_problem(cfg.problem_path), cfg.samples);
    auto report = convergence_study(vp, cfg.intervals, cfg.mode, harness_options(cfg));
    std::vector<ConvergenceReport> configs;
    configs.push_back(std::move(report));
    return emit_report(cfg, make_sweep_report(cfg.mode, std::move(configs)), os, err);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const ProblemSpec tmpl = load_problem(cfg.problem_path);
    const std::size_t n = tmpl.size();
    std::vector<EpsConfig> grid;
    for (int k : cfg.sweep_k)
        for (int e : cfg.sweep_exponents) {
            if (k <= 0 || e < 0) throw ParseError("--k must be positive and --exponents nonnegative");
            std::vector<double> eps(n);
            eps[n - 1] = std::ldexp(1.0, -e);
            for (std::size_t i = n - 1; i-- > 0;) eps[i] = std::ldexp(eps[i + 1], -k);
            grid.push_back({"eps_n=2^-" + std::to_string(e) + " k=" + std::to_string(k),
                            PerturbationVector(std::move(eps))});
        }
    const auto report =
        uniform_sweep(tmpl, grid, cfg.intervals, cfg.mode, harness_options(cfg), cfg.samples);
    return emit_report(cfg, report, os, err);
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Output output(cfg.output_path, out);
    std::ostream& os = output.stream();
    switch (cfg.command) {
        case Command::Validate: return cmd_validate(cfg, os);
        case Command::Mesh: return cmd_mesh(cfg, os);
        case Command::Solve: return cmd_solve(cfg, os, err);
        case Command::Converge: return cmd_converge(cfg, os, err);
        case Command::Sweep: return cmd_sweep(cfg, os, err);
    }
    return kFailure;
}

}  // namespace

void write_mesh_csv(std::ostream& os, const ShishkinMesh& mesh) {
    std::vector<std::string> sig, bits;
    for (double s : mesh.sigmas()) sig.push_back(format_g(s));
    for (auto b : mesh.bits()) bits.push_back(std::to_string(b));
    os << "# N=" << mesh.intervals() << '\n'
       << "# sigmas=" << join(sig, ';') << '\n'
       << "# b=" << join(bits, ';') << '\n'
       << "j,t_j,delta_j\n";
    for (std::size_t j = 0; j <= mesh.intervals(); ++j) {
        os << j << ',' << format_g(mesh.point(j)) << ',';
        if (j > 0) os << format_g(mesh.delta(j));
        os << '\n';
    }
}

void write_solution_csv(std::ostream& os, const SolutionGrid& grid, const DecomposedSolution* parts) {
    const std::size_t n = grid.components();
    const auto& mesh = grid.mesh();
    std::vector<std::string> sig, bits;
    for (double s : mesh.sigmas()) sig.push_back(format_g(s));
    for (auto b : mesh.bits()) bits.push_back(std::to_string(b));
    os << "# n=" << n << " N=" << mesh.intervals() << '\n'
       << "# sigmas=" << join(sig, ';') << '\n'
       << "# b=" << join(bits, ';') << '\n';
    os << "j,t_j";
    for (std::size_t i = 1; i <= n; ++i) os << ",U_" << i;
    if (parts) {
        for (std::size_t i = 1; i <= n; ++i) os << ",V_" << i;
        for (std::size_t i = 1; i <= n; ++i) os << ",W_" << i;
    }
    os << '\n';
    for (std::size_t j = 0; j <= mesh.intervals(); ++j) {
        os << j << ',' << format_g(mesh.point(j));
        for (double x : grid.at(j)) os << ',' << format_g(x);
        if (parts) {
            for (double x : parts->smooth.at(j)) os << ',' << format_g(x);
            for (double x : parts->singular.at(j)) os << ',' << format_g(x);
        }
        os << '\n';
    }
}

void write_report_csv(std::ostream& os, const SweepReport& report) {
    os << "# mode=" << mode_name(report.mode) << '\n' << "eps_label,N,D,p,C_fit\n";
    for (const auto& config : report.configs)
        for (const auto& row : config.rows)
            os << config.eps_label << ',' << row.intervals << ',' << format_g(row.error) << ','
               << fmt_opt(row.order) << ',' << format_g(row.c_fit) << '\n';
    os << "# uniform\n" << "N,D_uniform,p_uniform\n";
    for (const auto& row : report.uniform)
        os << row.intervals << ',' << format_g(row.error) << ',' << fmt_opt(row.order) << '\n';
}

std::string report_json(const SweepReport& report) {
    using nlohmann::json;
    auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
    json doc;
    doc["mode"] = mode_name(report.mode);
    doc["configs"] = json::array();
    for (const auto& config : report.configs) {
        json rows = json::array();
        for (const auto& row : config.rows)
            rows.push_back({{"N", row.intervals}, {"D", row.error}, {"p", opt(row.order)},
                            {"C_fit", row.c_fit}});
        doc["configs"].push_back({{"eps_label", config.eps_label}, {"rows", std::move(rows)}});
    }
    doc["uniform"] = json::array();
    for (const auto& row : report.uniform)
        doc["uniform"].push_back({{"N", row.intervals}, {"D", row.error}, {"p", opt(row.order)}});
    return doc.dump(2);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Shishkin-mesh backward Euler solver for singularly perturbed linear IVP systems"};
    app.require_subcommand(1);

    std::string mode = "two_mesh";
    auto common = [&](CLI::App* sub) {
        sub->add_option("problem,--problem", cfg.problem_path, "problem JSON file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", cfg.output_path, "write output to this file");
        sub->add_flag("--json", cfg.json, "machine-readable output");
        sub->add_option("--samples", cfg.samples, "validation sample count")
            ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
    };
    auto with_n = [&](CLI::App* sub, bool list) {
        sub->add_option("--N", cfg.intervals, list ? "doubling N list, e.g. 128,256,512" : "mesh intervals")
            ->required()
            ->delimiter(',');
    };
    auto with_tol = [&](CLI::App* sub) {
        sub->add_option("--residual-tol", cfg.residual_tol, "per-step relative residual bound");
        sub->add_flag("--cache", cfg.cache, "reuse step factorizations (constant A only)");
    };
    auto with_harness = [&](CLI::App* sub) {
        sub->add_option("--mode", mode, "exact or two_mesh")
            ->check(CLI::IsMember({"exact", "two_mesh"}));
        sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
        sub->add_option("--min-order", cfg.min_order, "fail (exit 5) if any uniform order is lower");
    };

    auto* v = app.add_subcommand("validate", "check conditions and print alpha");
    common(v);
    auto* m = app.add_subcommand("mesh", "emit the Shishkin mesh as CSV");
    common(m);
    with_n(m, false);
    auto* s = app.add_subcommand("solve", "solve and emit the grid as CSV");
    common(s);
    with_n(s, false);
    with_tol(s);
    s->add_flag("--decompose", cfg.decompose, "add smooth (V) and singular (W) components");
    s->add_flag("--certify", cfg.certify, "check max principle, stability and superposition");
    auto* c = app.add_subcommand("converge", "order-of-convergence table");
    common(c);
    with_n(c, true);
    with_tol(c);
    with_harness(c);
    auto* w = app.add_subcommand("sweep", "parameter-uniform sweep over an eps grid");
    common(w);
    with_n(w, true);
    with_tol(w);
    with_harness(w);
    w->add_option("--k", cfg.sweep_k, "eps_i = eps_(i+1) 2^-k")->delimiter(',');
    w->add_option("--exponents", cfg.sweep_exponents, "eps_n = 2^-e")->delimiter(',');

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }

    if (v->parsed()) cfg.command = Command::Validate;
    if (m->parsed()) cfg.command = Command::Mesh;
    if (s->parsed()) cfg.command = Command::Solve;
    if (c->parsed()) cfg.command = Command::Converge;
    if (w->parsed()) cfg.command = Command::Sweep;
    cfg.mode = mode == "exact" ? ErrorMode::ExactOracle : ErrorMode::TwoMesh;

    try {
        return dispatch(cfg, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const ValidationError& e) {
        err << "error: " << cfg.problem_path << ": " << e.what() << '\n';
        return kValidationFailure;
    } catch (const MeshError& e) {
        err << "error: " << e.what() << '\n';
        return kMeshError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace shishkin::cli
