#include "rotns/io.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace rotns {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string timeseries_csv(const Trajectory& traj, const AprioriLedger& ledger,
                           const EnergyBalanceReport& energy) {
    std::ostringstream out;
    out << "t,chi_m1,chi_0,chi_1,l2,hs,grad_inf,apriori_lhs,apriori_margin,energy_residual\n";
    std::size_t step = 0;  // walks the dense per-step series
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const NormReport& r = traj.reports[j];
        double interval_residual = 0.0;
        if (j > 0) {
            while (step < energy.residuals.size() &&
                   traj.step_times[step + 1] <= traj.times[j] + 1e-12) {
                interval_residual += energy.residuals[step];
                ++step;
            }
        }
        out << format_double(traj.times[j]) << ',' << format_double(r.chi_m1) << ','
            << format_double(r.chi_0) << ',' << format_double(r.chi_1) << ','
            << format_double(r.l2) << ',' << format_double(r.hs_full) << ','
            << format_double(r.grad_inf) << ',' << format_double(ledger.lhs[j]) << ','
            << format_double(ledger.margin[j]) << ',' << format_double(interval_residual)
            << '\n';
    }
    return out.str();
}

std::string run_manifest(const RunOutput& out) {
    const ExperimentConfig& cfg = out.config;
    ordered_json j;
    j["config"] = {{"n", cfg.n},
                   {"period", cfg.period},
                   {"dealias_fraction", cfg.dealias_fraction},
                   {"nu", cfg.solver.nu},
                   {"omega", cfg.solver.omega},
                   {"dt", cfg.solver.dt},
                   {"T", cfg.solver.T},
                   {"scheme", scheme_name(cfg.solver.scheme)},
                   {"s", cfg.solver.s},
                   {"observer_stride", cfg.solver.observer_stride},
                   {"c0", cfg.solver.c0},
                   {"c1", cfg.solver.c1},
                   {"nonlinear", cfg.solver.nonlinear},
                   {"data", data_kind_name(cfg.data)},
                   {"amplitude", cfg.amplitude},
                   {"chi_target", cfg.chi_target},
                   {"kmax", cfg.kmax},
                   {"spectral_exponent", cfg.spectral_exponent},
                   {"seed", cfg.seed},
                   {"tol_ledger", cfg.tol_ledger},
                   {"picard_T", cfg.picard.T},
                   {"picard_nodes", cfg.picard.n_nodes},
                   {"picard_tol", cfg.picard.tol},
                   {"picard_max_iter", cfg.picard.max_iter},
                   {"label", cfg.label}};
    const Grid grid = cfg.grid();
    j["grid"] = {{"n", grid.n()},
                 {"period", grid.period()},
                 {"dealias_limit", grid.dealias_limit()},
                 {"max_k", grid.max_k()}};
    j["convention"] = kConventionNote;
    if (!out.trajectory.reports.empty()) {
        const NormReport& r0 = out.trajectory.reports.front();
        j["initial"] = {{"chi_m1", r0.chi_m1},
                        {"chi_0", r0.chi_0},
                        {"chi_1", r0.chi_1},
                        {"l2", r0.l2},
                        {"hs", r0.hs_full},
                        {"grad_inf", r0.grad_inf},
                        {"threshold", out.ledger.threshold},
                        {"threshold_margin", out.ledger.threshold_margin}};
        const NormReport& rf = out.trajectory.reports.back();
        j["final"] = {{"t", out.trajectory.times.back()},
                      {"chi_m1", rf.chi_m1},
                      {"chi_1", rf.chi_1},
                      {"l2", rf.l2},
                      {"grad_inf", rf.grad_inf}};
    }
    j["ledger"] = {{"label", out.ledger.in_hypothesis ? "IN-HYPOTHESIS" : "OUT-OF-HYPOTHESIS"},
                   {"pass", out.ledger.pass},
                   {"min_margin", out.ledger.min_margin},
                   {"min_ap1_margin", out.ledger.min_ap1_margin},
                   {"sup_chi_m1", out.ledger.sup_chi_m1},
                   {"integral_chi1", out.ledger.integral_chi1.empty()
                                         ? 0.0
                                         : out.ledger.integral_chi1.back()},
                   {"integral_chi_m1", out.ledger.integral_chi_m1},
                   {"tol_ledger", out.ledger.tol}};
    j["energy"] = {{"max_abs_residual", out.energy.max_abs_residual},
                   {"max_rel_residual", out.energy.max_rel_residual}};
    j["monotonicity_violations"] = chi_m1_monotonicity_violations(out.trajectory);
    j["blew_up"] = out.trajectory.blew_up;
    if (out.trajectory.blew_up) j["blowup_time"] = out.trajectory.blowup_time;
    j["coriolis_underresolved"] =
        cfg.solver.scheme == Scheme::IfRk4 && cfg.solver.coriolis_underresolved();
    j["snapshots"] = out.trajectory.times.size();
    j["steps"] = out.trajectory.step_times.empty() ? 0 : out.trajectory.step_times.size() - 1;
    return j.dump(2) + "\n";
}

std::string plot_script(const std::string& csv_name, const std::string& title,
                        double chi_bound) {
    std::ostringstream out;
    out << "set datafile separator ','\n"
        << "set title '" << title << "'\n"
        << "set xlabel 't'\n"
        << "set ylabel 'chi^{-1}'\n"
        << "set key left bottom\n"
        << "plot '" << csv_name << "' using 1:2 with lines title 'chi_m1(t)', \\\n"
        << "     " << format_double(chi_bound) << " with lines dashtype 2 title 'initial bound'\n";
    return out.str();
}

RunOutput run_simulation(const ExperimentConfig& cfg) {
    cfg.validate();
    RunOutput out;
    out.config = cfg;
    const SpectralField u0 = materialize_initial_data(cfg);
    out.trajectory = integrate(u0, cfg.solver);
    out.ledger = apriori_ledger(out.trajectory, cfg.solver.nu, cfg.tol_ledger);
    out.energy = energy_balance(out.trajectory, cfg.solver.nu);
    out.csv = timeseries_csv(out.trajectory, out.ledger, out.energy);
    out.manifest = run_manifest(out);
    return out;
}

std::vector<RunOutput> run_many(const std::vector<ExperimentConfig>& cfgs, int workers) {
    std::vector<RunOutput> outputs(cfgs.size());
    const int count = worker_count(workers);
    if (count <= 1 || cfgs.size() <= 1) {
        for (std::size_t i = 0; i < cfgs.size(); ++i) outputs[i] = run_simulation(cfgs[i]);
        return outputs;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < cfgs.size(); i = next.fetch_add(1)) {
                    outputs[i] = run_simulation(cfgs[i]);
                }
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return outputs;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string output_directory() {
    const char* dir = std::getenv("ROTNS_OUT");
    return dir != nullptr && *dir != '\0' ? dir : ".";
}

int worker_count(int requested) {
    if (requested > 0) return requested;
    const char* env = std::getenv("ROTNS_WORKERS");
    if (env != nullptr && *env != '\0') {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

}  // namespace rotns
