#pragma once

#include <vector>

#include "rotns/field.hpp"
#include "rotns/timestepper.hpp"

namespace rotns {

/// Cumulative check of the a priori estimate along a trajectory:
///   lhs(t) = chi_m1(t) + (nu - chi_m1(0)) * int_0^t chi_1,
///   margin(t) = chi_m1(0) - lhs(t) >= 0 (up to tolerance).
/// Also carries the intermediate form
///   chi_m1(t) + nu I(t) <= chi_m1(0) + sup_tau chi_m1 * I(t).
/// Out-of-hypothesis trajectories (chi_m1(0) >= nu) are computed and
/// labeled but make no claim.
struct AprioriLedger {
    std::vector<double> times;
    std::vector<double> chi_m1;
    std::vector<double> integral_chi1;  // trapezoid, nondecreasing
    std::vector<double> lhs;
    std::vector<double> margin;
    std::vector<double> ap1_margin;

    double chi_m1_initial = 0.0;
    double threshold = 0.0;         // smallness_threshold(nu)
    double threshold_margin = 0.0;  // chi_m1(0) / threshold
    double min_margin = 0.0;
    double min_ap1_margin = 0.0;
    double sup_chi_m1 = 0.0;
    double integral_chi_m1 = 0.0;  // reported alongside, not asserted
    double tol = 0.0;
    bool in_hypothesis = false;
    bool pass = false;
};

AprioriLedger apriori_ledger(const Trajectory& traj, double nu, double tol_ledger);

/// Count of chi_m1 increases beyond 1e-10 relative between consecutive
/// stored times.
int chi_m1_monotonicity_violations(const Trajectory& traj, double rel_tol = 1e-10);

/// Per-step residual of E(t+dt) - E(t) + 2 nu int ||grad u||^2 (trapezoid),
/// from the dense step series.
struct EnergyBalanceReport {
    std::vector<double> residuals;
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;  // relative to E(0)
    double initial_energy = 0.0;
};

EnergyBalanceReport energy_balance(const Trajectory& traj, double nu);

/// Empirical Gronwall constant of the H^s energy estimate:
///   C* = sup_t log(||u(t)||_{H^s} / ||u0||_{H^s}) / int_0^t ||grad u||_inf,
/// clamped at 0; the growth bound holds with any C >= C*. H^s is
/// recomputed from the stored snapshots at the requested s.
double hs_gronwall(const Trajectory& traj, double s);

/// Two-solution stability in chi^{-1}: with w = A - B and
/// a = (chi_1^A + chi_1^B)/2, checks ||w(t)|| <= ||w(0)|| e^{int_0^t a}.
struct StabilityReport {
    std::vector<double> times;
    std::vector<double> gap;    // chi^{-1} of the difference
    std::vector<double> bound;  // Gronwall envelope
    std::vector<double> ratio;
    double initial_gap = 0.0;
    double max_ratio = 0.0;
    bool in_hypothesis = false;  // both data below the smallness threshold
};

StabilityReport stability_gap(const Trajectory& a, const Trajectory& b, double nu);

struct DecayReport {
    bool empty = false;  // zero initial data
    double chi_start = 0.0;
    double chi_end = 0.0;
    double kmin = 0.0;  // smallest active shell radius of the initial field
    std::vector<double> half_life_times;  // first times below chi(0)/2^j
    std::vector<double> ratio_to_linear;  // chi(t) / (chi(0) e^{-nu kmin^2 t})
    int monotonicity_violations = 0;
};

DecayReport decay_report(const Trajectory& traj, double nu);

/// L^1-in-time identity of the heat semigroup:
///   int_0^Tmax sum_k nu |k| |uhat0| e^{-nu |k|^2 t} dt
///     + sum_k |k|^{-1} |uhat0| e^{-nu |k|^2 Tmax}  ==  chi^{-1}(u0),
/// with the time integral done by adaptive Simpson quadrature and the
/// remainder by the exact tail sum.
struct HeatL1Report {
    double quadrature = 0.0;
    double tail = 0.0;
    double total = 0.0;
    double chi_m1 = 0.0;
    double rel_error = 0.0;
    int evaluations = 0;
};

HeatL1Report heat_l1_identity(const SpectralField& u0, double nu, double t_max);

}  // namespace rotns
