#include "rotns/diagnostics.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "rotns/initial_data.hpp"
#include "rotns/norms.hpp"

namespace rotns {

namespace {

// Cumulative trapezoid of y over t; out[0] = 0.
std::vector<double> cumtrapz(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t j = 1; j < t.size(); ++j) {
        out[j] = out[j - 1] + 0.5 * (t[j] - t[j - 1]) * (y[j] + y[j - 1]);
    }
    return out;
}

}  // namespace

AprioriLedger apriori_ledger(const Trajectory& traj, double nu, double tol_ledger) {
    AprioriLedger led;
    led.tol = tol_ledger;
    led.threshold = smallness_threshold(nu);
    if (traj.reports.empty()) return led;

    led.times = traj.times;
    led.chi_m1.reserve(traj.reports.size());
    std::vector<double> chi1;
    chi1.reserve(traj.reports.size());
    for (const NormReport& r : traj.reports) {
        led.chi_m1.push_back(r.chi_m1);
        chi1.push_back(r.chi_1);
    }
    led.chi_m1_initial = led.chi_m1.front();
    led.threshold_margin = led.chi_m1_initial / led.threshold;
    led.in_hypothesis = led.chi_m1_initial < led.threshold;

    led.integral_chi1 = cumtrapz(led.times, chi1);
    led.integral_chi_m1 = cumtrapz(led.times, led.chi_m1).back();

    const double coeff = nu - led.chi_m1_initial;
    led.lhs.resize(led.times.size());
    led.margin.resize(led.times.size());
    led.ap1_margin.resize(led.times.size());
    led.min_margin = std::numeric_limits<double>::infinity();
    led.min_ap1_margin = std::numeric_limits<double>::infinity();
    double running_sup = 0.0;
    for (std::size_t j = 0; j < led.times.size(); ++j) {
        running_sup = std::max(running_sup, led.chi_m1[j]);
        led.lhs[j] = led.chi_m1[j] + coeff * led.integral_chi1[j];
        led.margin[j] = led.chi_m1_initial - led.lhs[j];
        led.ap1_margin[j] = led.chi_m1_initial + running_sup * led.integral_chi1[j] -
                            (led.chi_m1[j] + nu * led.integral_chi1[j]);
        led.min_margin = std::min(led.min_margin, led.margin[j]);
        led.min_ap1_margin = std::min(led.min_ap1_margin, led.ap1_margin[j]);
    }
    led.sup_chi_m1 = running_sup;
    led.pass = led.min_margin >= -tol_ledger * led.chi_m1_initial;
    return led;
}

int chi_m1_monotonicity_violations(const Trajectory& traj, double rel_tol) {
    int count = 0;
    for (std::size_t j = 1; j < traj.reports.size(); ++j) {
        const double prev = traj.reports[j - 1].chi_m1;
        if (traj.reports[j].chi_m1 > prev * (1.0 + rel_tol)) ++count;
    }
    return count;
}

EnergyBalanceReport energy_balance(const Trajectory& traj, double nu) {
    EnergyBalanceReport rep;
    if (traj.step_times.size() < 2) return rep;
    rep.initial_energy = traj.step_energy.front();
    // Balance on ||u||_{L2}^2 = 2E: d/dt ||u||^2 + 2 nu ||grad u||^2 = 0
    // for the viscous dynamics (Coriolis and transport are neutral).
    const double scale = 2.0 * rep.initial_energy;
    rep.residuals.reserve(traj.step_times.size() - 1);
    for (std::size_t j = 0; j + 1 < traj.step_times.size(); ++j) {
        const double dt = traj.step_times[j + 1] - traj.step_times[j];
        const double r = 2.0 * (traj.step_energy[j + 1] - traj.step_energy[j]) +
                         2.0 * nu * 0.5 * dt *
                             (traj.step_enstrophy[j] + traj.step_enstrophy[j + 1]);
        rep.residuals.push_back(r);
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r));
    }
    rep.max_rel_residual = scale > 0.0 ? rep.max_abs_residual / scale : 0.0;
    return rep;
}

double hs_gronwall(const Trajectory& traj, double s) {
    if (traj.snapshots.size() < 2) return 0.0;
    const double hs0 = sobolev_norms(traj.snapshots.front(), s).hs_full;
    if (hs0 == 0.0) return 0.0;
    std::vector<double> ginf;
    ginf.reserve(traj.reports.size());
    for (const NormReport& r : traj.reports) ginf.push_back(r.grad_inf);
    const std::vector<double> integral = cumtrapz(traj.times, ginf);
    double best = 0.0;
    for (std::size_t j = 1; j < traj.snapshots.size(); ++j) {
        if (integral[j] <= 0.0) continue;
        const double hs = sobolev_norms(traj.snapshots[j], s).hs_full;
        if (hs <= 0.0) continue;
        best = std::max(best, std::log(hs / hs0) / integral[j]);
    }
    return best;
}

StabilityReport stability_gap(const Trajectory& a, const Trajectory& b, double nu) {
    if (a.times.size() != b.times.size() || !(a.grid == b.grid)) {
        throw std::invalid_argument("stability_gap: trajectories must share grid and times");
    }
    for (std::size_t j = 0; j < a.times.size(); ++j) {
        if (std::abs(a.times[j] - b.times[j]) > 1e-12 * std::max(1.0, std::abs(a.times[j]))) {
            throw std::invalid_argument("stability_gap: snapshot times differ");
        }
    }
    StabilityReport rep;
    rep.times = a.times;
    std::vector<double> weight(a.times.size());
    for (std::size_t j = 0; j < a.times.size(); ++j) {
        weight[j] = 0.5 * (a.reports[j].chi_1 + b.reports[j].chi_1);
        SpectralField w = a.snapshots[j];
        w -= b.snapshots[j];
        rep.gap.push_back(chi_norm(w, -1));
    }
    rep.initial_gap = rep.gap.front();
    const std::vector<double> integral = cumtrapz(a.times, weight);
    rep.bound.resize(a.times.size());
    rep.ratio.resize(a.times.size());
    for (std::size_t j = 0; j < a.times.size(); ++j) {
        rep.bound[j] = rep.initial_gap * std::exp(integral[j]);
        rep.ratio[j] = rep.bound[j] > 0.0
                           ? rep.gap[j] / rep.bound[j]
                           : (rep.gap[j] == 0.0 ? 0.0
                                                : std::numeric_limits<double>::infinity());
        rep.max_ratio = std::max(rep.max_ratio, rep.ratio[j]);
    }
    const double thresh = smallness_threshold(nu);
    rep.in_hypothesis =
        a.reports.front().chi_m1 < thresh && b.reports.front().chi_m1 < thresh;
    return rep;
}

DecayReport decay_report(const Trajectory& traj, double nu) {
    DecayReport rep;
    if (traj.reports.empty() || traj.reports.front().chi_m1 == 0.0) {
        rep.empty = true;
        return rep;
    }
    rep.chi_start = traj.reports.front().chi_m1;
    rep.chi_end = traj.reports.back().chi_m1;

    const SpectralField& u0 = traj.snapshots.front();
    const double ks = traj.grid.k_scale();
    const double cutoff = 1e-14 * u0.max_abs();
    double kmin2 = std::numeric_limits<double>::infinity();
    for_each_mode(traj.grid, [&](const std::array<int, 3>& k, std::size_t idx) {
        const double q = static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2];
        if (q == 0.0 || u0.modulus(idx) <= cutoff) return;
        kmin2 = std::min(kmin2, ks * ks * q);
    });
    rep.kmin = std::isfinite(kmin2) ? std::sqrt(kmin2) : 0.0;

    rep.ratio_to_linear.reserve(traj.times.size());
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const double envelope = rep.chi_start * std::exp(-nu * kmin2 * traj.times[j]);
        rep.ratio_to_linear.push_back(envelope > 0.0 ? traj.reports[j].chi_m1 / envelope : 0.0);
    }

    double level = 0.5 * rep.chi_start;
    std::size_t j = 0;
    while (level > 0.0 && rep.half_life_times.size() < 60) {
        while (j < traj.times.size() && traj.reports[j].chi_m1 > level) ++j;
        if (j == traj.times.size()) break;
        rep.half_life_times.push_back(traj.times[j]);
        level *= 0.5;
    }

    rep.monotonicity_violations = chi_m1_monotonicity_violations(traj);
    return rep;
}

HeatL1Report heat_l1_identity(const SpectralField& u0, double nu, double t_max) {
    if (!(nu > 0.0) || !(t_max > 0.0)) {
        throw std::invalid_argument("heat_l1_identity: nu and t_max must be > 0");
    }
    HeatL1Report rep;
    // Shell-reduced integrand: F(t) = sum_m nu r_m c_m e^{-nu r_m^2 t}
    // with c_m the summed moduli on shell radius r_m.
    std::vector<double> radius, mass;
    {
        std::map<long long, double> shell;
        for_each_mode(u0.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
            const long long q =
                static_cast<long long>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2];
            if (q == 0) return;
            const double mag = u0.modulus(idx);
            if (mag > 0.0) shell[q] += mag;
        });
        const double ks = u0.grid().k_scale();
        for (const auto& [q, c] : shell) {
            radius.push_back(ks * std::sqrt(static_cast<double>(q)));
            mass.push_back(c);
        }
    }
    rep.chi_m1 = chi_norm(u0, -1);
    if (radius.empty()) return rep;

    const auto integrand = [&](double t) {
        ++rep.evaluations;
        double sum = 0.0;
        for (std::size_t m = 0; m < radius.size(); ++m) {
            sum += nu * radius[m] * mass[m] * std::exp(-nu * radius[m] * radius[m] * t);
        }
        return sum;
    };

    // Adaptive Simpson with the classic 1/15 error estimate.
    const double tol = 1e-12 * rep.chi_m1;
    const std::function<double(double, double, double, double, double, double, int)> refine =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
            int depth) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
        const double fl = integrand(lmid), fr = integrand(rmid);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
        if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol) {
            return left + right + (left + right - whole) / 15.0;
        }
        return refine(lo, mid, flo, fl, fmid, left, depth + 1) +
               refine(mid, hi, fmid, fr, fhi, right, depth + 1);
    };
    const double f0 = integrand(0.0), f1 = integrand(0.5 * t_max), f2 = integrand(t_max);
    const double whole = t_max / 6.0 * (f0 + 4.0 * f1 + f2);
    rep.quadrature = refine(0.0, t_max, f0, f1, f2, whole, 0);

    for (std::size_t m = 0; m < radius.size(); ++m) {
        rep.tail += mass[m] / radius[m] * std::exp(-nu * radius[m] * radius[m] * t_max);
    }
    rep.total = rep.quadrature + rep.tail;
    rep.rel_error = std::abs(rep.total - rep.chi_m1) / rep.chi_m1;
    return rep;
}

}  // namespace rotns
