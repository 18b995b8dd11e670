#pragma once

#include <string>
#include <vector>

#include "rotns/config.hpp"
#include "rotns/diagnostics.hpp"

namespace rotns {

/// Normalization note recorded in every manifest. All norms use the
/// plain lattice sums over Z^3 with e^{ik.x} modes on the 2*pi box, so
/// the convolution constant in the chi^{-1} product estimate is 1 and
/// the smallness threshold is nu itself.
inline constexpr const char* kConventionNote =
    "torus convolution constant = 1; continuum threshold (2*pi)^3*nu "
    "maps to nu";

/// One completed experiment: trajectory plus the derived diagnostics
/// and the serialized artifacts.
struct RunOutput {
    ExperimentConfig config;
    Trajectory trajectory;
    AprioriLedger ledger;
    EnergyBalanceReport energy;
    std::string csv;       // timeseries_csv of the above
    std::string manifest;  // run_manifest of the above
};

/// Integrate cfg and assemble ledger, energy balance, and artifacts.
/// Deterministic: equal configs give byte-identical csv and manifest.
RunOutput run_simulation(const ExperimentConfig& cfg);

/// Run several configs, round-robin over workers (ROTNS_WORKERS or the
/// explicit count). Each worker owns its transform engine; outputs come
/// back in input order regardless of scheduling.
std::vector<RunOutput> run_many(const std::vector<ExperimentConfig>& cfgs,
                                int workers = 0);

/// Fixed-layout table at the stored snapshot times. Header:
///   t,chi_m1,chi_0,chi_1,l2,hs,grad_inf,apriori_lhs,apriori_margin,energy_residual
/// hs is the inhomogeneous Sobolev norm at the configured s;
/// energy_residual sums the per-step balance defects inside each output
/// interval (0 in the first row). Values are printed with %.17g.
std::string timeseries_csv(const Trajectory& traj, const AprioriLedger& ledger,
                           const EnergyBalanceReport& energy);

/// JSON record of the full configuration and the headline diagnostics,
/// sufficient to reproduce the run via config_from_manifest.
std::string run_manifest(const RunOutput& out);

/// Gnuplot script plotting chi_m1(t) from a timeseries csv against the
/// horizontal initial-norm bound line.
std::string plot_script(const std::string& csv_name, const std::string& title,
                        double chi_bound);

std::string format_double(double v);  // shortest round-trip "%.17g"

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// $ROTNS_OUT if set, else the current directory.
std::string output_directory();

/// Explicit argument if > 0, else $ROTNS_WORKERS, else 1.
int worker_count(int requested = 0);

}  // namespace rotns
