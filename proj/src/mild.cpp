#include "rotns/mild.hpp"

#include <cmath>
#include <stdexcept>

#include "rotns/dynamics.hpp"
#include "rotns/norms.hpp"

namespace rotns {

namespace {

std::vector<double> mode_k2(const Grid& grid) {
    std::vector<double> k2(grid.size());
    const double ks = grid.k_scale();
    for_each_mode(grid, [&](const std::array<int, 3>& k, std::size_t idx) {
        k2[idx] = ks * ks * (static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2]);
    });
    return k2;
}

// One application of the Picard map on uniform nodes:
//   V_j = e^{nu t_j Lap} u0 + delta * trapezoid_l e^{nu (t_j - t_l) Lap} N(U_l)
// with N the non-viscous right-hand side (Coriolis + nonlinear terms,
// signs already those of the evolution equation).
std::vector<SpectralField> picard_map(const std::vector<SpectralField>& u,
                                      const std::vector<SpectralField>& heat0, double delta,
                                      const std::vector<std::vector<double>>& heat_pow,
                                      const SolverConfig& cfg, FftEngine& fft) {
    const int nodes = static_cast<int>(u.size());
    const Grid& grid = u[0].grid();
    const std::size_t size = grid.size();

    std::vector<SpectralField> rhs;
    rhs.reserve(nodes);
    for (int l = 0; l < nodes; ++l) {
        SpectralField r = coriolis_rhs(u[l], cfg.omega);
        if (cfg.nonlinear) r += nonlinear_rhs(u[l], fft);
        rhs.push_back(std::move(r));
    }

    std::vector<SpectralField> v;
    v.reserve(nodes);
    for (int j = 0; j < nodes; ++j) {
        SpectralField acc(grid);  // empty integral at t = 0
        for (int l = 0; j > 0 && l <= j; ++l) {
            const double w = (l == 0 || l == j) ? 0.5 : 1.0;
            const std::vector<double>& fac = heat_pow[j - l];
            const SpectralField& r = rhs[l];
            for (int c = 0; c < 3; ++c) {
                auto& dst = acc.component(c);
                const auto& src = r.component(c);
                for (std::size_t i = 0; i < size; ++i) dst[i] += w * fac[i] * src[i];
            }
        }
        SpectralField vj = heat0[j];
        acc *= delta;
        vj += acc;
        if (!vj.finite()) throw BlowupError("picard_map: non-finite iterate");
        v.push_back(std::move(vj));
    }
    return v;
}

double sup_chi_gap(const std::vector<SpectralField>& a, const std::vector<SpectralField>& b) {
    double gap = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        SpectralField d = a[j];
        d -= b[j];
        gap = std::max(gap, chi_norm(d, -1));
    }
    return gap;
}

}  // namespace

SpectralField heat_propagate(SpectralField f, double nu, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_propagate: t must be >= 0");
    const std::vector<double> k2 = mode_k2(f.grid());
    for (std::size_t idx = 0; idx < f.grid().size(); ++idx) {
        const double fac = std::exp(-nu * k2[idx] * t);
        for (int c = 0; c < 3; ++c) f.at(c, idx) *= fac;
    }
    return f;
}

ContractionHorizon contraction_horizon(const SpectralField& u0, const SolverConfig& cfg) {
    if (!(cfg.nu > 0.0)) throw std::invalid_argument("contraction_horizon: nu must be > 0");
    ContractionHorizon out;
    out.hs_norm = sobolev_norms(u0, cfg.s).hs_full;

    const double a = cfg.c0 * std::abs(cfg.omega) + cfg.c1 * out.hs_norm;  // times T
    const double b = cfg.c1 * out.hs_norm / std::sqrt(cfg.nu);            // times sqrt(T)
    if (a == 0.0 && b == 0.0) {
        out.degenerate = true;
        out.capped = true;
        out.T = cfg.T;
        return out;
    }

    // g(x) = a x^2 + b x - 1/2 in x = sqrt(T): strictly increasing from
    // -1/2, so bisection on a doubled bracket.
    const auto g = [&](double x) { return a * x * x + b * x - 0.5; };
    double lo = 0.0, hi = 1.0;
    while (g(hi) < 0.0) hi *= 2.0;
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    const double x = 0.5 * (lo + hi);
    out.T = x * x;
    if (out.T > cfg.T) {
        out.T = cfg.T;
        out.capped = true;
    }
    return out;
}

PicardResult picard_solve(const SpectralField& u0, const SolverConfig& cfg,
                          const PicardOptions& options) {
    cfg.validate();
    if (!(options.T > 0.0)) throw std::invalid_argument("picard_solve: T must be > 0");
    if (options.n_nodes < 2) throw std::invalid_argument("picard_solve: n_nodes must be >= 2");
    if (!(options.tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be > 0");
    if (options.max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be >= 1");

    const Grid& grid = u0.grid();
    FftEngine fft(grid);
    const int nodes = options.n_nodes;
    const double delta = options.T / (nodes - 1);

    // Heat factors for every node separation, indexed by step count.
    const std::vector<double> k2 = mode_k2(grid);
    std::vector<std::vector<double>> heat_pow(nodes);
    for (int d = 0; d < nodes; ++d) {
        heat_pow[d].resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            heat_pow[d][i] = std::exp(-cfg.nu * k2[i] * (d * delta));
        }
    }

    std::vector<SpectralField> heat0;
    heat0.reserve(nodes);
    for (int j = 0; j < nodes; ++j) {
        SpectralField h = u0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (int c = 0; c < 3; ++c) h.at(c, i) *= heat_pow[j][i];
        }
        heat0.push_back(std::move(h));
    }

    PicardResult result;
    std::vector<SpectralField> u = heat0;
    bool converged = false;
    for (int m = 0; m < options.max_iter; ++m) {
        std::vector<SpectralField> v = picard_map(u, heat0, delta, heat_pow, cfg, fft);
        const double gap = sup_chi_gap(v, u);
        result.gaps.push_back(gap);
        u = std::move(v);
        ++result.iterations;
        if (gap < options.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw PicardNoConvergence("picard_solve: no convergence after max_iter",
                                  std::move(result.gaps));
    }

    Trajectory traj;
    traj.grid = grid;
    const double vol = std::pow(grid.period(), 3.0);
    for (int j = 0; j < nodes; ++j) {
        const double t = j * delta;
        traj.times.push_back(t);
        traj.reports.push_back(norm_report(u[j], cfg.s, fft));
        double e = 0.0, ens = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double mag2 = std::norm(u[j].at(0, i)) + std::norm(u[j].at(1, i)) +
                                std::norm(u[j].at(2, i));
            e += mag2;
            ens += k2[i] * mag2;
        }
        traj.step_times.push_back(t);
        traj.step_energy.push_back(0.5 * vol * e);
        traj.step_enstrophy.push_back(vol * ens);
        traj.snapshots.push_back(std::move(u[j]));
    }

    // Compare against the uncapped horizon: the config cap is about run
    // length, not contraction.
    SolverConfig uncapped = cfg;
    uncapped.T = 1e12;
    const ContractionHorizon horizon = contraction_horizon(u0, uncapped);
    result.horizon_exceeded = !horizon.degenerate && options.T > horizon.T;

    result.trajectory = std::move(traj);
    return result;
}

double picard_residual(const PicardResult& result, const SolverConfig& cfg) {
    const Trajectory& traj = result.trajectory;
    if (traj.times.size() < 2) return 0.0;
    const Grid& grid = traj.grid;
    FftEngine fft(grid);
    const int nodes = static_cast<int>(traj.times.size());
    const double delta = traj.times[1] - traj.times[0];

    const std::vector<double> k2 = mode_k2(grid);
    std::vector<std::vector<double>> heat_pow(nodes);
    for (int d = 0; d < nodes; ++d) {
        heat_pow[d].resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            heat_pow[d][i] = std::exp(-cfg.nu * k2[i] * (d * delta));
        }
    }
    std::vector<SpectralField> heat0;
    heat0.reserve(nodes);
    for (int j = 0; j < nodes; ++j) {
        SpectralField h = traj.snapshots[0];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (int c = 0; c < 3; ++c) h.at(c, i) *= heat_pow[j][i];
        }
        heat0.push_back(std::move(h));
    }
    const std::vector<SpectralField> mapped =
        picard_map(traj.snapshots, heat0, delta, heat_pow, cfg, fft);
    return sup_chi_gap(mapped, traj.snapshots);
}

}  // namespace rotns
