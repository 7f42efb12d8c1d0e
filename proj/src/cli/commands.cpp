#include "dispersal/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "dispersal/config_io.hpp"
#include "dispersal/elliptic.hpp"
#include "dispersal/errors.hpp"
#include "dispersal/hj.hpp"
#include "dispersal/output.hpp"
#include "dispersal/parabolic.hpp"
#include "dispersal/quadrature.hpp"
#include "dispersal/verify.hpp"

namespace dispersal {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::string rho_source = "nm";
    std::string hamiltonian_path;
};

class Run {
public:
    Run(std::string command, const ModelConfig& config, const std::string& out_dir)
        : config_(config), out_(out_dir), start_(std::chrono::steady_clock::now()) {
        header_.command = std::move(command);
        header_.config_digest = config_digest(config);
        manifest_.command = header_.command;
        manifest_.config_digest = header_.config_digest;
    }

    void csv(const std::string& name, const std::vector<std::string>& columns,
             const std::vector<std::vector<double>>& rows) {
        const fs::path path = out_ / name;
        write_csv(path, header_, columns, rows);
        manifest_.output_paths.push_back(path.string());
    }

    void finish(int status) {
        manifest_.exit_status = status;
        manifest_.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        write_manifest(out_ / "manifest.json", manifest_);
    }

    RunManifest& manifest() { return manifest_; }
    const ModelConfig& config() const { return config_; }

private:
    const ModelConfig& config_;
    fs::path out_;
    OutputHeader header_;
    RunManifest manifest_;
    std::chrono::steady_clock::time_point start_;
};

std::string default_preset(const std::string& command) {
    if (command == "figure1") return "figure1";
    if (command == "canonical") return "canonical";
    return "smooth_periodic";
}

ModelConfig resolve_config(const std::string& command, const Options& o) {
    if (!o.config_path.empty() && !o.preset.empty())
        throw ConfigError("--config and --preset are mutually exclusive");
    if (!o.config_path.empty()) return load_config(o.config_path, o.overrides);
    return preset_config(o.preset.empty() ? default_preset(command) : o.preset, o.overrides);
}

int worker_count() {
    const char* env = std::getenv("DISPERSAL_LAB_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024)
        throw ConfigError(fmt::format("DISPERSAL_LAB_THREADS='{}' is not a positive integer", env));
    return static_cast<int>(n);
}

bool report_violations(const ModelConfig& config) {
    const auto violations = validate_config(config);
    for (const auto& v : violations) {
        const bool err = v.severity == Violation::Severity::error;
        std::cerr << fmt::format("{}: [{}] {}\n", err ? "error" : "warning", v.code, v.message);
    }
    return !has_errors(violations);
}

std::vector<std::vector<double>> profile_rows(const SpatialGrid& sg,
                                              std::initializer_list<const std::vector<double>*> cols) {
    std::vector<std::vector<double>> rows(sg.size());
    for (int i = 0; i < sg.size(); ++i) {
        rows[i].push_back(sg.node(i));
        for (const auto* c : cols) rows[i].push_back((*c)[i]);
    }
    return rows;
}

std::vector<std::vector<double>> trait_rows(const TraitGrid& tg,
                                            std::initializer_list<const std::vector<double>*> cols) {
    std::vector<std::vector<double>> rows(tg.size());
    for (int j = 0; j < tg.size(); ++j) {
        rows[j].push_back(tg.node(j));
        for (const auto* c : cols) rows[j].push_back((*c)[j]);
    }
    return rows;
}

int declared_trait_index(const ModelConfig& config) {
    return config.theta_m ? config.trait.nearest(*config.theta_m) : config.dispersal_argmin();
}

DensityProfile limit_weight(const ModelConfig& config) {
    const DensityProfile k(config.capacity_samples());
    return solve_fisher_kpp(config.dispersal_min(), k, config.spatial, config.solver);
}

int cmd_figure1(Run& run) {
    const auto& c = run.config();
    const auto snaps = run_transient(c, default_initial_density(c), c.output.final_time,
                                     c.output.sample_every, c.output.snapshot_times);

    std::vector<std::vector<double>> series;
    for (const auto& s : snaps)
        series.push_back({s.t, static_cast<double>(s.step_count), s.moments.mean_trait,
                          s.moments.trait_stddev, s.moments.mass});
    run.csv("mean_trait.csv", {"t", "step", "mean_trait", "trait_stddev", "mass"}, series);

    int k = 0;
    for (double target : c.output.snapshot_times) {
        for (const auto& s : snaps) {
            if (!s.state || std::abs(s.t - target) > 1e-9 * std::max(1.0, target)) continue;
            ++k;
            run.csv(fmt::format("snapshot_{}_rho.csv", k), {"x", "rho"},
                    profile_rows(c.spatial, {&s.rho.values}));
            run.csv(fmt::format("snapshot_{}_trait.csv", k), {"theta", "trait_marginal"},
                    trait_rows(c.trait, {&s.trait_marginal}));
            run.manifest().snapshot_times.push_back(s.t);
            break;
        }
    }
    std::cout << fmt::format("initial mean trait: {:.6f}\nfinal mean trait: {:.6f} at t = {}\n",
                             snaps.front().moments.mean_trait, snaps.back().moments.mean_trait,
                             snaps.back().t);
    return exit_ok;
}

int cmd_steady(Run& run) {
    const auto& c = run.config();
    const auto steady = run_to_steady(c, default_initial_density(c), c.solver.steady_tol);
    const auto rho = integrate_trait(steady.n, c.trait);
    const auto k = c.capacity_samples();
    const auto marginal = trait_marginal(steady.n, c.spatial);
    const auto m = trait_moments(steady.n, c.spatial, c.trait);
    const auto report = check_rho_identities(steady, c);

    std::cout << fmt::format(
        "steady at t = {} ({} steps)\nmean trait {:.6f}, stddev {:.6f}\n"
        "rho in [{:.6g}, {:.6g}], ceiling {:.6g}\nidentity defect {:.3e} (int rho^2 = {:.6g})\n",
        steady.t, steady.step_count, m.mean_trait, m.trait_stddev, report.min_rho, report.max_rho,
        report.ceiling, report.identity_defect, report.integral_rho_sq);
    if (!report.nonnegative || !report.identity_holds || !report.positive_mass)
        throw PostconditionError("steady state fails the integrated rho identities");

    run.csv("steady_rho.csv", {"x", "rho", "capacity"}, profile_rows(c.spatial, {&rho.values, &k}));
    run.csv("steady_trait.csv", {"theta", "trait_marginal"}, trait_rows(c.trait, {&marginal}));
    return exit_ok;
}

int cmd_hamiltonian(Run& run, const Options& o) {
    const auto& c = run.config();
    DensityProfile rho;
    if (o.rho_source == "nm") {
        rho = limit_weight(c);
    } else if (o.rho_source == "steady") {
        const auto steady = run_to_steady(c, default_initial_density(c), c.solver.steady_tol);
        rho = integrate_trait(steady.n, c.trait);
    } else {
        throw ConfigError(fmt::format("--rho must be nm or steady, got '{}'", o.rho_source));
    }
    const DensityProfile k(c.capacity_samples());
    const auto h = hamiltonian_curve(rho, c);
    const auto bounds = hamiltonian_bounds(rho, k, c.spatial);
    for (int j = 0; j < c.trait.size(); ++j) {
        if (!bounds.contains(h.values[j]))
            throw PostconditionError(fmt::format(
                "H({}) = {} outside [{}, {}]", c.trait.node(j), h.values[j], bounds.lower, bounds.upper));
    }
    const auto d = c.dispersal_samples();
    std::cout << fmt::format("min H = {:.6e} at theta = {}\n", h.min(), c.trait.node(h.argmin_index));
    run.csv("hamiltonian.csv", {"theta", "dispersal", "hamiltonian"}, trait_rows(c.trait, {&d, &h.values}));
    return exit_ok;
}

int cmd_hj(Run& run, const Options& o) {
    const auto& c = run.config();
    HamiltonianCurve h;
    if (!o.hamiltonian_path.empty()) {
        const auto rows = read_csv(o.hamiltonian_path);
        if (static_cast<int>(rows.size()) != c.trait.size())
            throw ConfigError(fmt::format("'{}' has {} rows, the trait grid has {} nodes",
                                          o.hamiltonian_path, rows.size(), c.trait.size()));
        for (const auto& r : rows) {
            if (r.size() < 2)
                throw ConfigError(fmt::format("'{}' needs theta and H columns", o.hamiltonian_path));
            h.values.push_back(r.back());
        }
        h.argmin_index = static_cast<int>(std::min_element(h.values.begin(), h.values.end()) -
                                          h.values.begin());
    } else {
        h = hamiltonian_curve(limit_weight(c), c);
    }

    const auto u = solve_constrained_hj(h, c.trait, c.hj.tol_ess);
    const auto ess = check_ess(h, c.trait, declared_trait_index(c), c.hj.tol_ess);
    std::cout << fmt::format(
        "min H = {:.3e} at theta = {}\n|H(theta_m)| = {:.3e}, |H_theta(theta_m)| = {:.3e}\n"
        "argmax u at theta = {}\n",
        ess.min_value, c.trait.node(ess.argmin_index), ess.value_at_declared, ess.slope_at_declared,
        c.trait.node(u.argmax_index));
    run.csv("potential.csv", {"theta", "u", "hamiltonian"}, trait_rows(c.trait, {&u.values, &h.values}));
    return exit_ok;
}

int cmd_canonical(Run& run) {
    const auto& c = run.config();
    const auto traj = quasistatic_dynamics(c.hj.theta0, c.hj.final_time, c.hj.dt, c);
    std::vector<std::vector<double>> rows;
    for (std::size_t s = 0; s < traj.times.size(); ++s)
        rows.push_back({traj.times[s], traj.fittest_trait[s], traj.hamiltonian_at_fittest[s],
                        traj.hamiltonian_slope[s], traj.canonical_rate[s]});
    run.csv("trajectory.csv",
            {"t", "theta_bar", "hamiltonian", "hamiltonian_slope", "canonical_rate"}, rows);
    std::cout << fmt::format("theta_bar: {} -> {} over t = {}\n", traj.fittest_trait.front(),
                             traj.fittest_trait.back(), traj.times.back());
    return exit_ok;
}

int cmd_converge(Run& run) {
    const auto& c = run.config();
    if (c.epsilons.size() < 3)
        throw ConfigError("model.epsilons needs at least three values for a convergence study");
    const auto rows = convergence_study(c, c.epsilons);
    std::vector<std::vector<double>> table;
    for (const auto& r : rows) {
        if (r.failed) break;
        table.push_back({r.epsilon, r.max_u_eps, r.max_u_eps / r.epsilon, r.lipschitz_theta,
                         r.lipschitz_x_scaled, r.x_oscillation, r.rho_error, r.u_error, r.trait_mean,
                         r.trait_stddev, c.trait.node(r.argmax_u_index), r.steady_time});
        std::cout << fmt::format("eps {}: rho error {:.3e}, u error {:.3e}, stddev {:.4f}\n",
                                 r.epsilon, r.rho_error, r.u_error, r.trait_stddev);
    }
    run.csv("convergence.csv",
            {"epsilon", "max_u_eps", "max_u_eps_over_eps", "lipschitz_theta", "lipschitz_x_scaled",
             "x_oscillation", "rho_error", "u_error", "trait_mean", "trait_stddev", "argmax_u_theta",
             "steady_time"},
            table);
    if (!rows.empty() && rows.back().failed)
        throw SolverError(fmt::format("epsilon {}: {}", rows.back().epsilon, rows.back().failure));
    return exit_ok;
}

int dispatch(const std::string& command, const Options& o) {
    ModelConfig config;
    try {
        config = resolve_config(command, o);
        config.solver.threads = worker_count();
    } catch (const ConfigError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return exit_parse;
    }

    const bool valid = report_violations(config);
    if (command == "validate") {
        std::cout << (valid ? "configuration is valid\n" : "configuration has violations\n");
        return valid ? exit_ok : exit_validation;
    }
    if (!valid) return exit_validation;

    Run run(command, config, o.out_dir);
    int status = exit_ok;
    try {
        if (command == "figure1") status = cmd_figure1(run);
        else if (command == "steady") status = cmd_steady(run);
        else if (command == "hamiltonian") status = cmd_hamiltonian(run, o);
        else if (command == "hj") status = cmd_hj(run, o);
        else if (command == "canonical") status = cmd_canonical(run);
        else if (command == "converge") status = cmd_converge(run);
    } catch (const ConfigError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        status = exit_parse;
    } catch (const EssViolation& e) {
        std::cerr << "postcondition failed: " << e.what() << '\n';
        status = exit_postcondition;
    } catch (const PostconditionError& e) {
        std::cerr << "postcondition failed: " << e.what() << '\n';
        status = exit_postcondition;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        status = exit_solver;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        status = exit_solver;
    }
    try {
        run.finish(status);
    } catch (const std::exception& e) {
        std::cerr << "cannot write manifest: " << e.what() << '\n';
        if (status == exit_ok) status = exit_solver;
    }
    return status;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Numerical lab for a dispersal-selection model"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "configuration file");
        sub->add_option("--preset", o.preset, "compiled-in preset (figure1, smooth_periodic, canonical)");
        sub->add_option("--set", o.overrides, "section.key=value override, repeatable");
        return sub;
    };
    auto with_out = [&](CLI::App* sub) {
        common(sub)->add_option("--out", o.out_dir, "output directory");
        return sub;
    };

    common(app.add_subcommand("validate", "check a configuration"));
    with_out(app.add_subcommand("figure1", "transient run with snapshots and mean trait series"));
    with_out(app.add_subcommand("steady", "steady state of the parabolic problem"));
    auto* ham = with_out(app.add_subcommand("hamiltonian", "effective Hamiltonian curve"));
    ham->add_option("--rho", o.rho_source, "nm (limit weight) or steady")->capture_default_str();
    auto* hj = with_out(app.add_subcommand("hj", "constrained Hamilton-Jacobi potential"));
    hj->add_option("--hamiltonian", o.hamiltonian_path, "CSV whose last column is H on the trait grid");
    with_out(app.add_subcommand("canonical", "quasi-static fittest-trait trajectory"));
    with_out(app.add_subcommand("converge", "epsilon convergence study"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_parse;
    }
    return dispatch(app.get_subcommands().front()->get_name(), o);
}

}  // namespace dispersal
