#include "rotns/cli.hpp"

#include <cmath>
#include <iostream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotns/diagnostics.hpp"
#include "rotns/initial_data.hpp"
#include "rotns/io.hpp"
#include "rotns/mild.hpp"

namespace rotns {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "config file (key = value lines)");
    cmd->add_option("--set", opts.overrides, "override, e.g. --set nu=0.5")
        ->take_all()
        ->allow_extra_args(false);
    cmd->add_option("--out", opts.out_dir, "output directory (default $ROTNS_OUT or .)");
}

ExperimentConfig build_config(const CommonOpts& opts) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) cfg = load_config_file(opts.config_path);
    for (const std::string& s : opts.overrides) apply_config_assignment(cfg, s);
    cfg.validate();
    return cfg;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    const std::string dir = opts.out_dir.empty() ? output_directory() : opts.out_dir;
    return dir + "/" + name;
}

std::string run_label(const ExperimentConfig& cfg) {
    return cfg.label.empty() ? "run" : cfg.label;
}

void emit_run(const CommonOpts& opts, const RunOutput& run) {
    const std::string label = run_label(run.config);
    write_text_file(out_path(opts, label + ".csv"), run.csv);
    write_text_file(out_path(opts, label + ".json"), run.manifest);
    write_text_file(out_path(opts, label + ".gp"),
                    plot_script(label + ".csv", label, run.ledger.chi_m1_initial));
}

int exit_code_for(const RunOutput& run) {
    if (run.trajectory.blew_up) return kExitBlowup;
    if (run.ledger.in_hypothesis && !run.ledger.pass) return kExitViolation;
    return kExitOk;
}

int cmd_simulate(const CommonOpts& opts) {
    const ExperimentConfig cfg = build_config(opts);
    const RunOutput run = run_simulation(cfg);
    emit_run(opts, run);
    const char* label = run.ledger.in_hypothesis ? "IN-HYPOTHESIS" : "OUT-OF-HYPOTHESIS";
    std::cout << "simulate " << run_label(cfg) << ": " << label
              << (run.ledger.pass ? " PASS" : " FAIL") << ", chi_m1 "
              << format_double(run.ledger.chi_m1_initial) << " -> "
              << format_double(run.trajectory.reports.back().chi_m1) << ", min margin "
              << format_double(run.ledger.min_margin) << "\n";
    if (run.trajectory.blew_up) {
        std::cout << "blow-up at t = " << format_double(run.trajectory.blowup_time) << "\n";
    }
    return exit_code_for(run);
}

int cmd_picard(const CommonOpts& opts, int refine) {
    const ExperimentConfig cfg = build_config(opts);
    const SpectralField u0 = materialize_initial_data(cfg);

    PicardResult picard;
    ordered_json j;
    try {
        picard = picard_solve(u0, cfg.solver, cfg.picard);
    } catch (const PicardNoConvergence& e) {
        std::cerr << "picard: " << e.what() << "\n";
        return kExitViolation;
    }
    const double residual = picard_residual(picard, cfg.solver);

    // Cross-check against the time stepper on the same node times.
    const double delta = cfg.picard.T / (cfg.picard.n_nodes - 1);
    SolverConfig scfg = cfg.solver;
    scfg.T = cfg.picard.T;
    scfg.dt = delta / refine;
    scfg.observer_stride = refine;
    const Trajectory marched = integrate(u0, scfg);
    double distance = 0.0;
    if (!marched.blew_up && marched.times.size() == picard.trajectory.times.size()) {
        for (std::size_t i = 0; i < marched.times.size(); ++i) {
            SpectralField d = marched.snapshots[i];
            d -= picard.trajectory.snapshots[i];
            distance = std::max(distance, chi_norm(d, -1));
        }
    }

    SolverConfig uncapped = cfg.solver;
    uncapped.T = 1e12;
    const ContractionHorizon horizon = contraction_horizon(u0, uncapped);

    j["iterations"] = picard.iterations;
    j["gaps"] = picard.gaps;
    j["fixed_point_residual"] = residual;
    j["stepper_distance"] = distance;
    j["stepper_blew_up"] = marched.blew_up;
    j["contraction_horizon"] = horizon.degenerate ? -1.0 : horizon.T;
    j["horizon_exceeded"] = picard.horizon_exceeded;
    j["nodes"] = cfg.picard.n_nodes;
    j["T"] = cfg.picard.T;
    write_text_file(out_path(opts, run_label(cfg) + "_picard.json"), j.dump(2) + "\n");

    std::cout << "picard " << run_label(cfg) << ": " << picard.iterations
              << " iterations, final gap "
              << format_double(picard.gaps.empty() ? 0.0 : picard.gaps.back())
              << ", residual " << format_double(residual) << ", stepper distance "
              << format_double(distance) << "\n";
    if (marched.blew_up) return kExitBlowup;
    return kExitOk;
}

int cmd_verify(int trials, std::uint64_t seed, int n, double s, int kmax, double exponent,
               const CommonOpts& opts) {
    const Grid grid(n);
    FftEngine fft(grid);
    const double omega = 100.0;

    int lemma_violations = 0, neutrality_violations = 0, heat_violations = 0;
    bool any_tail_flag = false;
    for (int t = 0; t < trials; ++t) {
        const SpectralField f =
            random_solenoidal(grid, kmax, exponent, seed + static_cast<std::uint64_t>(t));
        const Lemma1Report rep = lemma1_check(f, s, fft);
        if (!rep.ok()) ++lemma_violations;
        any_tail_flag = any_tail_flag || rep.tail_flagged;

        double sum2 = 0.0;
        for (std::size_t idx = 0; idx < grid.size(); ++idx) {
            const double m = f.modulus(idx);
            sum2 += m * m;
        }
        if (coriolis_neutrality_residual(f, omega) > 1e-12 * omega * sum2) {
            ++neutrality_violations;
        }
    }
    const int heat_trials = std::min(trials, 10);
    for (int t = 0; t < heat_trials; ++t) {
        const SpectralField f =
            random_solenoidal(grid, kmax, exponent, seed + 7000 + static_cast<std::uint64_t>(t));
        const HeatL1Report rep = heat_l1_identity(f, 1.0, 10.0);
        if (rep.rel_error > 1e-8) ++heat_violations;
    }

    ordered_json j;
    j["trials"] = trials;
    j["seed"] = seed;
    j["n"] = n;
    j["s"] = s;
    j["lemma1_violations"] = lemma_violations;
    j["neutrality_violations"] = neutrality_violations;
    j["heat_identity_trials"] = heat_trials;
    j["heat_identity_violations"] = heat_violations;
    j["lemma1_tail_flagged"] = any_tail_flag;
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    write_text_file(out_path(opts, "verify.json"), text);
    return lemma_violations + neutrality_violations + heat_violations > 0 ? kExitViolation
                                                                          : kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<double>& omegas,
              const std::vector<double>& chis, int workers) {
    const ExperimentConfig base = build_config(opts);
    std::vector<ExperimentConfig> members;
    const std::vector<double> omega_list = omegas.empty()
                                               ? std::vector<double>{base.solver.omega}
                                               : omegas;
    const std::vector<double> chi_list = chis.empty() ? std::vector<double>{base.chi_target}
                                                      : chis;
    for (double w : omega_list) {
        for (double x : chi_list) {
            ExperimentConfig cfg = base;
            cfg.solver.omega = w;
            cfg.chi_target = x;
            cfg.label = run_label(base) + "_omega" + format_double(w) + "_chi" +
                        format_double(x);
            cfg.validate();
            members.push_back(std::move(cfg));
        }
    }
    const std::vector<RunOutput> runs = run_many(members, workers);
    int worst = kExitOk;
    for (const RunOutput& run : runs) {
        emit_run(opts, run);
        const int code = exit_code_for(run);
        std::cout << "sweep " << run_label(run.config) << ": "
                  << (run.ledger.in_hypothesis ? "IN-HYPOTHESIS" : "OUT-OF-HYPOTHESIS")
                  << (run.ledger.pass ? " PASS" : " FAIL") << ", exit " << code << "\n";
        if (code == kExitBlowup) {
            worst = kExitBlowup;
        } else if (code == kExitViolation && worst != kExitBlowup) {
            worst = kExitViolation;
        }
    }
    return worst;
}

int cmd_decay(const CommonOpts& opts) {
    const ExperimentConfig cfg = build_config(opts);
    const RunOutput run = run_simulation(cfg);
    emit_run(opts, run);
    const DecayReport rep = decay_report(run.trajectory, cfg.solver.nu);

    ordered_json j;
    j["empty"] = rep.empty;
    j["chi_start"] = rep.chi_start;
    j["chi_end"] = rep.chi_end;
    j["kmin"] = rep.kmin;
    j["half_life_times"] = rep.half_life_times;
    j["monotonicity_violations"] = rep.monotonicity_violations;
    if (!rep.ratio_to_linear.empty()) j["final_ratio_to_linear"] = rep.ratio_to_linear.back();
    write_text_file(out_path(opts, run_label(cfg) + "_decay.json"), j.dump(2) + "\n");

    std::cout << "decay " << run_label(cfg) << ": chi_m1 " << format_double(rep.chi_start)
              << " -> " << format_double(rep.chi_end) << ", violations "
              << rep.monotonicity_violations << "\n";
    if (run.trajectory.blew_up) return kExitBlowup;
    if (run.ledger.in_hypothesis && rep.monotonicity_violations > 0) return kExitViolation;
    return exit_code_for(run);
}

int cmd_compare(const CommonOpts& opts, double R, double tol) {
    const ExperimentConfig cfg = build_config(opts);
    const SpectralField u0 = materialize_initial_data(cfg);
    const SpectralField u0_cut = truncate_R(u0, R);

    const Trajectory a = integrate(u0, cfg.solver);
    const Trajectory b = integrate(u0_cut, cfg.solver);
    if (a.blew_up || b.blew_up) return kExitBlowup;
    const StabilityReport rep = stability_gap(a, b, cfg.solver.nu);

    ordered_json j;
    j["R"] = R;
    j["initial_gap"] = rep.initial_gap;
    j["max_ratio"] = rep.max_ratio;
    j["in_hypothesis"] = rep.in_hypothesis;
    j["final_gap"] = rep.gap.back();
    j["final_bound"] = rep.bound.back();
    write_text_file(out_path(opts, run_label(cfg) + "_compare.json"), j.dump(2) + "\n");

    std::cout << "compare " << run_label(cfg) << ": initial gap "
              << format_double(rep.initial_gap) << ", max ratio "
              << format_double(rep.max_ratio)
              << (rep.in_hypothesis ? " (in hypothesis)" : " (out of hypothesis)") << "\n";
    if (rep.in_hypothesis && rep.max_ratio > 1.0 + tol) return kExitViolation;
    return kExitOk;
}

}  // namespace

int run_command(int argc, const char* const* argv) {
    CLI::App app{"Pseudo-spectral rotating Navier-Stokes laboratory"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    CLI::App* sim = app.add_subcommand("simulate", "integrate and emit estimate ledgers");
    add_common(sim, sim_opts);

    CommonOpts picard_opts;
    int picard_refine = 4;
    CLI::App* picard = app.add_subcommand("picard", "mild-solution solve and cross-check");
    add_common(picard, picard_opts);
    picard->add_option("--refine", picard_refine, "stepper steps per quadrature node")
        ->check(CLI::PositiveNumber);

    CommonOpts verify_opts;
    int trials = 100, verify_n = 16, verify_kmax = 5;
    std::uint64_t verify_seed = 1;
    double verify_s = 1.0, verify_exp = 2.0;
    CLI::App* verify = app.add_subcommand("verify", "norm inequality and identity sweeps");
    verify->add_option("--trials", trials)->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed);
    verify->add_option("--n", verify_n);
    verify->add_option("--s", verify_s);
    verify->add_option("--kmax", verify_kmax);
    verify->add_option("--exponent", verify_exp);
    verify->add_option("--out", verify_opts.out_dir);

    CommonOpts sweep_opts;
    std::vector<double> sweep_omegas, sweep_chis;
    int sweep_workers = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "grid over omega and data scale");
    add_common(sweep, sweep_opts);
    sweep->add_option("--omega", sweep_omegas, "omega values");
    sweep->add_option("--chi", sweep_chis, "chi^{-1} targets");
    sweep->add_option("--workers", sweep_workers, "parallel workers (default $ROTNS_WORKERS)");

    CommonOpts decay_opts;
    CLI::App* decay = app.add_subcommand("decay", "long-horizon decay report");
    add_common(decay, decay_opts);

    CommonOpts compare_opts;
    double compare_R = 1.0, compare_tol = 1e-6;
    CLI::App* compare = app.add_subcommand("compare", "two-solution stability gap");
    add_common(compare, compare_opts);
    compare->add_option("--R", compare_R, "truncation radius for the second run");
    compare->add_option("--tol", compare_tol, "allowed ratio excess");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (picard->parsed()) return cmd_picard(picard_opts, picard_refine);
        if (verify->parsed()) {
            return cmd_verify(trials, verify_seed, verify_n, verify_s, verify_kmax, verify_exp,
                              verify_opts);
        }
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_omegas, sweep_chis, sweep_workers);
        if (decay->parsed()) return cmd_decay(decay_opts);
        if (compare->parsed()) return cmd_compare(compare_opts, compare_R, compare_tol);
    } catch (const ConfigError& e) {
        std::cerr << "config error";
        if (e.line() > 0) std::cerr << " (line " << e.line() << ", column " << e.column() << ")";
        std::cerr << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const BlowupError& e) {
        std::cerr << e.what() << "\n";
        return kExitBlowup;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitConfig;
}

}  // namespace rotns
