#pragma once

#include <stdexcept>
#include <vector>

#include "rotns/field.hpp"
#include "rotns/transform.hpp"

namespace rotns {

struct SolverConfig;

/// Thrown when an evolved or computed field stops being finite.
class BlowupError : public std::runtime_error {
  public:
    explicit BlowupError(const std::string& what) : std::runtime_error(what) {}
};

/// Right-hand side of the projected momentum equation, split by term.
struct RhsTerms {
    SpectralField viscous;
    SpectralField coriolis;
    SpectralField nonlinear;
    SpectralField total;
};

/// -Omega * P(e3 x u); per mode (e3 x uhat) = (-u2, u1, 0).
SpectralField coriolis_rhs(const SpectralField& f, double omega);

/// nu * Laplacian in Fourier form: -nu |k|^2 uhat per mode.
SpectralField viscous_rhs(const SpectralField& f, double nu);

/// -P div(u (x) u), pseudo-spectral with 2/3 dealiasing on the quadratic
/// products. Equals -P(u.grad)u for solenoidal input on the retained modes.
/// Throws BlowupError if the result is not finite.
SpectralField nonlinear_rhs(const SpectralField& f, FftEngine& fft);

RhsTerms full_rhs(const SpectralField& f, const SolverConfig& cfg, bool linear_only,
                  FftEngine& fft);

/// div(u (x) u) in spectral form, dealiased, unprojected (shared by the
/// nonlinear term and the pressure solve).
SpectralField divergence_uu(const SpectralField& f, FftEngine& fft);

/// Diagnostic pressure: phat_k = i k.ghat_k / |k|^2 with
/// g = (u.grad)u + Omega e3 x u; phat_0 = 0.
struct ScalarSpectralField {
    Grid grid;
    std::vector<Complex> coeffs;
};

ScalarSpectralField recover_pressure(const SpectralField& f, double omega, FftEngine& fft);

/// |Re sum_k Omega (e3 x uhat_k).conj(uhat_k)| -- the rotation term's work,
/// which vanishes mode by mode.
double coriolis_neutrality_residual(const SpectralField& f, double omega);

}  // namespace rotns
