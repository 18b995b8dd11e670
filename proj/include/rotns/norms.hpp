#pragma once

#include <vector>

#include "rotns/field.hpp"
#include "rotns/transform.hpp"

namespace rotns {

/// All norms of one field at one time. chi_m is the lattice sum
/// sum_{k!=0} |k|^m |uhat_k|; l2 and the Sobolev norms carry the Parseval
/// volume factor period^{3/2}; h1_hom = ||grad u||_{L2} is kept separately
/// because the energy balance needs it at every report.
struct NormReport {
    double chi_m1 = 0.0;
    double chi_0 = 0.0;
    double chi_1 = 0.0;
    double l2 = 0.0;
    double hs_hom = 0.0;
    double hs_full = 0.0;
    double h1_hom = 0.0;
    double grad_inf = 0.0;
    double energy = 0.0;  // = l2^2 / 2
    double s = 0.0;
};

/// sum_{k!=0} |k|^m |uhat_k| for m in {-1, 0, 1}. For m = -1 a field with
/// uhat(0) != 0 is rejected (the norm would be meaningless).
double chi_norm(const SpectralField& f, int m);

struct SobolevNorms {
    double l2 = 0.0;
    double hs_hom = 0.0;   // weight |k|^{2s}
    double hs_full = 0.0;  // weight (1 + |k|^2)^s
};

SobolevNorms sobolev_norms(const SpectralField& f, double s);

/// ||grad u||_{L^inf}: max over grid points of the Frobenius norm of the
/// Jacobian, via inverse transform of i k_j uhat_i. Bounded by chi_1.
double grad_inf(const SpectralField& f, FftEngine& fft);

/// max over grid points of |u(x)| (used by the CFL advisory).
double linf_velocity(const SpectralField& f, FftEngine& fft);

NormReport norm_report(const SpectralField& f, double s, FftEngine& fft);

/// Lattice-exact check of the three elementary chi^m estimates:
///   (1) chi_m1 <= min over shell radii R of sqrt(S2(R)) E + sqrt(T(R)) H_s,
///       with S2(R) = sum_{0<|k|<=R} |k|^{-2}, T(R) = sum_{|k|>R} |k|^{-2-2s}
///       taken over the grid's own lattice (Cauchy-Schwarz on each part),
///   (2) chi_0 <= sqrt(chi_m1 * chi_1),
///   (3) grad_inf <= chi_1.
struct Lemma1Report {
    double chi_m1 = 0.0, chi_0 = 0.0, chi_1 = 0.0;
    double e_l2 = 0.0;  // (sum |uhat|^2)^{1/2}, no volume factor
    double h_s = 0.0;   // (sum |k|^{2s} |uhat|^2)^{1/2}
    double bound_1 = 0.0;
    double best_radius = 0.0;
    double interp_rhs = 0.0;  // sqrt(chi_m1 * chi_1)
    double grad_inf = 0.0;
    bool tail_flagged = false;  // analytic tail beyond the grid > 1e-6 of T
    bool violated_1 = false, violated_2 = false, violated_3 = false;
    bool ok() const { return !(violated_1 || violated_2 || violated_3); }
};

Lemma1Report lemma1_check(const SpectralField& f, double s, FftEngine& fft);

/// Relative slack used when comparing floating-point norm inequalities.
inline constexpr double kNormCheckTol = 1e-12;

}  // namespace rotns
