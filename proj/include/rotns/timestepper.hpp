#pragma once

#include <memory>
#include <vector>

#include "rotns/dynamics.hpp"
#include "rotns/field.hpp"
#include "rotns/norms.hpp"
#include "rotns/transform.hpp"

namespace rotns {

enum class Scheme {
    IfRk4,           // exact heat factor, RK4 for Coriolis + nonlinear
    ExactLinearRk4,  // exact heat + Coriolis propagator, RK4 for nonlinear only
};

struct SolverConfig {
    double nu = 1.0;
    double omega = 0.0;
    double dt = 1e-3;
    double T = 1.0;
    Scheme scheme = Scheme::ExactLinearRk4;
    double s = 2.0;  // Sobolev index for reports
    int observer_stride = 1;
    double c0 = 1.0;  // contraction constants of the horizon condition
    double c1 = 1.0;
    bool nonlinear = true;

    /// Throws std::invalid_argument on nu <= 0, dt <= 0, dt > T, bad stride.
    void validate() const;

    /// True when an explicit Coriolis treatment is marginal (|Omega| dt > 0.5).
    bool coriolis_underresolved() const;
};

/// Stored time series of one integration. Snapshots are kept every
/// observer_stride steps (plus t = 0 and the final time); the per-step
/// energy/enstrophy series is kept densely so the energy balance can be
/// checked at step resolution without storing every field.
struct Trajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<SpectralField> snapshots;
    std::vector<NormReport> reports;

    std::vector<double> step_times;      // every accepted step, starting at 0
    std::vector<double> step_energy;     // E = 0.5 ||u||_{L2}^2
    std::vector<double> step_enstrophy;  // ||grad u||_{L2}^2

    bool blew_up = false;
    double blowup_time = 0.0;

    std::size_t size() const { return times.size(); }
};

/// One-step integrator with cached linear propagators for dt and dt/2.
class Stepper {
  public:
    Stepper(const Grid& grid, const SolverConfig& cfg);
    ~Stepper();

    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    /// Advance one step of size cfg.dt (Lawson/integrating-factor RK4).
    /// Throws BlowupError when the state stops being finite.
    SpectralField step(const SpectralField& f);

    const SolverConfig& config() const { return cfg_; }
    FftEngine& fft();

  private:
    struct Impl;
    SolverConfig cfg_;
    std::unique_ptr<Impl> impl_;
};

/// Single-step convenience wrapper around Stepper.
SpectralField step(const SpectralField& f, const SolverConfig& cfg);

/// Integrate u0 over [0, T]; on blow-up the partial trajectory is returned
/// with blew_up set.
Trajectory integrate(const SpectralField& u0, const SolverConfig& cfg);

/// Advisory step size: min(0.5/|Omega|, 0.5 h/||u||_inf, 0.5/chi_1), with
/// cfg.T as the sentinel when every bound is infinite.
double cfl_suggest(const SpectralField& f, const SolverConfig& cfg, FftEngine& fft);

}  // namespace rotns
