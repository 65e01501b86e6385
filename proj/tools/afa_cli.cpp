// afa - command-line front end: solve, sweep, verify, energy
//
// Exit codes: 0 success, 1 configuration / usage / format error,
// 2 numerical failure, 3 invariant violation in verify.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "afa/afa.hpp"

namespace {

using afa::json;

constexpr int exit_config = 1;
constexpr int exit_numerical = 2;
constexpr int exit_invariant = 3;

struct ModelOptions {
    double beta = 0.0;
    double R = 0.0;
    std::string trap = "harmonic";
    double trap_strength = 1.0;
    double trap_exponent = 2.0;
    std::size_t grid = 128;
    double box = 0.0;
};

struct SolverOptions {
    int max_iters = 20000;
    double tol_energy = 1e-10;
    double tol_grad = 1e-7;
    double step0 = 0.1;
    std::string init = "gaussian";
    std::uint64_t seed = 0;
    std::string state_in;
};

void add_model_options(CLI::App& app, ModelOptions& m) {
    app.add_option("--beta", m.beta, "coupling beta");
    app.add_option("--R", m.R, "smearing radius (0 = point kernel)");
    app.add_option("--trap", m.trap, "trap kind: harmonic | power")->check(CLI::IsMember({"harmonic", "power"}));
    app.add_option("--trap-strength", m.trap_strength, "c in V = c |x|^s (power trap)");
    app.add_option("--trap-exponent", m.trap_exponent, "s in V = c |x|^s (power trap)");
    app.add_option("--grid", m.grid, "grid points per axis (power of two >= 16)");
    // No default box: the decay scale depends on the model, so L is always explicit.
    app.add_option("--box", m.box, "half-width L of the box [-L, L)^2")->required();
}

void add_solver_options(CLI::App& app, SolverOptions& s) {
    app.add_option("--max-iters", s.max_iters, "iteration cap");
    app.add_option("--tol-energy", s.tol_energy, "relative energy-decrease tolerance");
    app.add_option("--tol-grad", s.tol_grad, "projected-gradient L2 tolerance");
    app.add_option("--step0", s.step0, "initial step");
    app.add_option("--init", s.init, "gaussian | gaussian_vortex | from_file | seeded_random_perturbation");
    app.add_option("--seed", s.seed, "seed for random initial states");
    app.add_option("--state-in", s.state_in, "initial state file (with --init from_file)");
}

afa::TrapPotential trap_of(const ModelOptions& m) {
    if (m.trap == "harmonic") return afa::TrapPotential::harmonic();
    return afa::TrapPotential{m.trap_strength, m.trap_exponent};
}

afa::FunctionalParams params_of(const ModelOptions& m) {
    afa::FunctionalParams p{m.beta, m.R, trap_of(m)};
    p.validate();
    return p;
}

afa::SolverConfig solver_of(const SolverOptions& s, const afa::GridSpec& g) {
    afa::SolverConfig c;
    c.max_iters = s.max_iters;
    c.tol_energy = s.tol_energy;
    c.tol_grad = s.tol_grad;
    c.step0 = s.step0;
    c.init = afa::init_kind_from_string(s.init);
    c.seed = s.seed;
    if (c.init == afa::InitKind::from_file) {
        if (s.state_in.empty()) throw afa::ConfigError("--init from_file needs --state-in");
        c.initial_state = afa::load_state(s.state_in, g).u;
    } else if (!s.state_in.empty()) {
        throw afa::ConfigError("--state-in is only used with --init from_file");
    }
    c.validate();
    return c;
}

json model_json(const ModelOptions& m) {
    const afa::TrapPotential t = trap_of(m);
    return json{{"beta", m.beta},
                {"R", m.R},
                {"trap", {{"kind", m.trap}, {"strength", t.strength}, {"exponent", t.exponent}}},
                {"grid", m.grid},
                {"box", m.box}};
}

json solver_json(const SolverOptions& s) {
    return json{{"max_iters", s.max_iters}, {"tol_energy", s.tol_energy}, {"tol_grad", s.tol_grad},
                {"step0", s.step0},         {"backtrack", 0.5},           {"armijo", 1e-4},
                {"init", s.init},           {"seed", s.seed},             {"state_in", s.state_in}};
}

json breakdown_json(const afa::EnergyBreakdown& e) {
    return json{{"total", e.total},     {"kinetic", e.kinetic},     {"mixed", e.mixed},
                {"quartic", e.quartic}, {"potential", e.potential}, {"magnetic_kinetic", e.magnetic_kinetic()}};
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    afa::write_file_atomic(path, text);
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw afa::ConfigError("bad sweep value '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw afa::ConfigError("bad sweep value '" + item + "'");
        out.push_back(v);
    }
    return out;
}

int cmd_solve(const ModelOptions& m, const SolverOptions& s, const std::string& state_out,
              const std::string& summary_out, const std::string& history_out) {
    const afa::GridSpec g(m.grid, m.box);
    const afa::FunctionalParams p = params_of(m);
    const afa::SolverConfig cfg = solver_of(s, g);
    json summary{{"version", afa::version_string},
                 {"command", "solve"},
                 {"config", {{"model", model_json(m)}, {"solver", solver_json(s)}}}};
    try {
        const afa::SolveResult r = afa::minimize(p, g, cfg);
        summary["result"] = json{{"breakdown", breakdown_json(r.breakdown)},
                                 {"iterations", r.iterations},
                                 {"converged", r.converged},
                                 {"grad_norm", r.grad_norm},
                                 {"boundary_mass", r.boundary_mass},
                                 {"winding_number", afa::winding_number(r.u, 1.0)},
                                 {"warnings", r.warnings},
                                 {"failed", false}};
        if (!state_out.empty()) afa::save_state(state_out, r.u, m.beta, m.R);
        if (!history_out.empty()) {
            std::ostringstream os;
            os.precision(17);
            os << "iteration,total\n";
            for (std::size_t k = 0; k < r.energy_history.size(); ++k) os << k << ',' << r.energy_history[k] << '\n';
            write_text(history_out, os.str());
        }
        write_text(summary_out, summary.dump(2) + "\n");
        return 0;
    } catch (const afa::SolverError& e) {
        // Partial artifacts: the last valid iterate, flagged as such.
        const afa::AverageFieldFunctional F(g, p);
        summary["result"] = json{{"failed", true},
                                 {"error", e.what()},
                                 {"last_state_breakdown", breakdown_json(F.energy(e.last_state()))}};
        if (!state_out.empty()) afa::save_state(state_out, e.last_state(), m.beta, m.R);
        write_text(summary_out, summary.dump(2) + "\n");
        std::cerr << "afa solve: " << e.what() << '\n';
        return exit_numerical;
    }
}

int cmd_sweep(const std::string& axis, const std::string& values_csv, const ModelOptions& m, const SolverOptions& s,
              const std::string& out) {
    const std::vector<double> values = parse_values(values_csv);
    if (values.empty()) throw afa::ConfigError("sweep: --values is empty");
    afa::SweepBase base;
    base.params = params_of(m);
    base.grid = afa::GridSpec(m.grid, m.box);
    base.solver = solver_of(s, base.grid);
    const auto rows = afa::sweep(afa::sweep_axis_from_string(axis), values, base);
    write_text(out, afa::sweep_csv(rows));
    for (const auto& r : rows)
        if (r.failed) std::cerr << "afa sweep: row " << r.axis_value << " failed: " << r.error << '\n';
    return 0;
}

int cmd_verify(const std::string& suite, const afa::VerifyOptions& opt, const std::string& report_out,
               const std::string& replay_in) {
    json report;
    bool ok = true;
    if (!replay_in.empty()) {
        std::ifstream f(replay_in);
        if (!f) throw afa::ConfigError("cannot open replay file " + replay_in);
        json stored;
        try {
            stored = json::parse(f);
        } catch (const json::parse_error& e) {
            throw afa::FormatError(std::string("replay file: ") + e.what());
        }
        report = afa::replay_report(stored);
        ok = report.at("identical").get<bool>();
    } else {
        report = afa::run_suite(afa::suite_from_string(suite), opt);
        ok = report.at("pass").get<bool>();
    }
    write_text(report_out, report.dump(2) + "\n");
    if (!ok) {
        std::cerr << "afa verify: invariant check failed\n";
        return exit_invariant;
    }
    return 0;
}

int cmd_energy(const std::string& state_path, long N, double beta, double R, const ModelOptions& m,
               const std::string& out) {
    const afa::StateFile st = afa::load_state(state_path);
    const afa::ManyBodyParams mp{N, beta, R, trap_of(m)};
    mp.validate();
    const afa::ProductStateEvaluator ev(st.u, R, mp.trap);
    const afa::ManyBodyBreakdown b = ev.evaluate(N, beta);
    const double eaf = ev.average_field_energy(beta);
    const json report{
        {"version", afa::version_string},
        {"command", "energy"},
        {"config",
         {{"state", state_path}, {"N", N}, {"beta", beta}, {"R", R}, {"trap", model_json(m)["trap"]},
          {"grid", st.u.grid().n()}, {"box", st.u.grid().half_width()}}},
        {"breakdown",
         {{"kinetic", b.kinetic},
          {"potential", b.potential},
          {"one_body", b.one_body},
          {"mixed", b.mixed},
          {"three_body", b.three_body},
          {"singular", b.singular},
          {"per_particle_total", b.per_particle_total}}},
        {"average_field_energy", eaf},
        {"gap", b.per_particle_total - eaf}};
    write_text(out, report.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"average-field anyon functional: solver, sweeps and verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", afa::version_string);

    ModelOptions model;
    SolverOptions solver;

    auto* solve = app.add_subcommand("solve", "minimize the average-field functional");
    add_model_options(*solve, model);
    add_solver_options(*solve, solver);
    std::string state_out, summary_out, history_out;
    solve->add_option("--state", state_out, "write the minimizer to this state file");
    solve->add_option("--summary", summary_out, "JSON summary path (default stdout)");
    solve->add_option("--history", history_out, "CSV of the energy history");

    auto* sweep = app.add_subcommand("sweep", "minimize along one parameter axis");
    add_model_options(*sweep, model);
    add_solver_options(*sweep, solver);
    std::string axis, values, sweep_out;
    sweep->add_option("--axis", axis, "beta | R | N | s")->required();
    sweep->add_option("--values", values, "comma-separated axis values, swept in order")->required();
    sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite, report_out, replay_in;
    afa::VerifyOptions vopt;
    verify->add_option("suite", suite, "kernels | geometry | functional-inequalities | manybody-identities");
    verify->add_option("--seed", vopt.seed, "master seed");
    verify->add_option("--samples", vopt.samples, "samples (suite-specific meaning; 0 = default)");
    verify->add_option("--grid", vopt.grid_n, "grid points per axis for state-based suites");
    verify->add_option("--box", vopt.box, "box half-width for state-based suites");
    verify->add_option("--mc-samples", vopt.mc_samples, "Monte Carlo triples per radial density");
    verify->add_option("--report", report_out, "JSON report path (default stdout)");
    verify->add_option("--replay", replay_in, "re-evaluate the worst cases of a stored report");

    auto* energy = app.add_subcommand("energy", "product-state energy per particle of a stored state");
    ModelOptions energy_model;
    std::string energy_state, energy_out;
    long N = 2;
    double e_beta = 0.0, e_R = 0.0;
    energy->add_option("--state", energy_state, "state file")->required();
    energy->add_option("--N", N, "particle number (>= 2)")->required();
    energy->add_option("--beta", e_beta, "coupling beta");
    energy->add_option("--R", e_R, "smearing radius (> 0)");
    energy->add_option("--trap", energy_model.trap, "harmonic | power")->check(CLI::IsMember({"harmonic", "power"}));
    energy->add_option("--trap-strength", energy_model.trap_strength, "c in V = c |x|^s");
    energy->add_option("--trap-exponent", energy_model.trap_exponent, "s in V = c |x|^s");
    energy->add_option("--out", energy_out, "JSON output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (solve->parsed()) return cmd_solve(model, solver, state_out, summary_out, history_out);
        if (sweep->parsed()) return cmd_sweep(axis, values, model, solver, sweep_out);
        if (verify->parsed()) {
            if (suite.empty() && replay_in.empty()) throw afa::ConfigError("verify: name a suite or pass --replay");
            return cmd_verify(suite, vopt, report_out, replay_in);
        }
        if (energy->parsed()) return cmd_energy(energy_state, N, e_beta, e_R, energy_model, energy_out);
    } catch (const afa::NumericalError& e) {
        std::cerr << "afa: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const afa::FormatError& e) {
        std::cerr << "afa: format error: " << e.what() << '\n';
        return exit_config;
    } catch (const afa::DomainError& e) {
        std::cerr << "afa: domain error: " << e.what() << '\n';
        return exit_config;
    } catch (const afa::ConfigError& e) {
        std::cerr << "afa: configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "afa: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "afa: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_config;
}
