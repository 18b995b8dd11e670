#pragma once

#include <stdexcept>
#include <vector>

#include "rotns/field.hpp"
#include "rotns/timestepper.hpp"

namespace rotns {

/// Heat semigroup: per-mode multiply by e^{-nu |k|^2 t}. Contraction in
/// every chi^m norm for t >= 0.
SpectralField heat_propagate(SpectralField f, double nu, double t);

/// Largest T with c0 |Omega| T + c1 ||u0||_{H^s} (T + sqrt(T/nu)) = 1/2,
/// solved by a bracketed bisection in sqrt(T) and capped at cfg.T.
struct ContractionHorizon {
    double T = 0.0;
    double hs_norm = 0.0;  // ||u0||_{H^s} at cfg.s (full Sobolev norm)
    bool capped = false;
    bool degenerate = false;  // zero data and Omega = 0: condition vacuous
};

ContractionHorizon contraction_horizon(const SpectralField& u0, const SolverConfig& cfg);

struct PicardOptions {
    double T = 0.1;
    int n_nodes = 101;
    double tol = 1e-10;
    int max_iter = 40;
};

struct PicardResult {
    Trajectory trajectory;       // fixed point sampled at the quadrature nodes
    std::vector<double> gaps;    // sup-in-time chi^{-1} distance per iteration
    int iterations = 0;
    bool horizon_exceeded = false;  // options.T beyond the contraction horizon
};

class PicardNoConvergence : public std::runtime_error {
  public:
    PicardNoConvergence(const std::string& what, std::vector<double> gap_history)
        : std::runtime_error(what), gaps(std::move(gap_history)) {}
    std::vector<double> gaps;
};

/// Picard iteration on the Duhamel integral equation
///   u(t) = e^{nu t Lap} u0 - int_0^t e^{nu (t-tau) Lap}
///            [Omega P(e3 x u) + P div(u (x) u)](tau) dtau
/// with trapezoidal quadrature on n_nodes uniform nodes. Stops when the
/// sup-in-time chi^{-1} gap between iterates drops below tol; throws
/// PicardNoConvergence (carrying the gap history) after max_iter.
PicardResult picard_solve(const SpectralField& u0, const SolverConfig& cfg,
                          const PicardOptions& options);

/// sup-in-time chi^{-1} residual of the integral equation at the stored
/// nodes (one extra application of the Picard map).
double picard_residual(const PicardResult& result, const SolverConfig& cfg);

}  // namespace rotns
