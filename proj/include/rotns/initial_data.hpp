#pragma once

#include <cstdint>
#include <utility>

#include "rotns/field.hpp"

namespace rotns {

/// u = A (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0): eight modes on
/// the |k_i| = 1 corners, divergence-free, mean-free.
SpectralField taylor_green(const Grid& grid, double amplitude);

/// Random Hermitian solenoidal field supported on 0 < |k| <= kmax with
/// |uhat_k| ~ |k|^{-spectral_exponent} before projection. Phases come from
/// a counter-based hash of (seed, k), so the field is reproducible across
/// runs and platforms.
SpectralField random_solenoidal(const Grid& grid, double kmax, double spectral_exponent,
                                std::uint64_t seed);

/// Rescale so chi_norm(f, -1) == target; rejects the zero field.
SpectralField scale_to_chi(SpectralField f, double target);

/// Smallness threshold of the a priori estimate under the torus convention
/// (convolution constant 1): the continuum (2*pi)^3 nu becomes nu.
double smallness_threshold(double nu);

/// Keep modes with |k| <= R and |uhat_k| <= R, zero the rest (the D_R
/// spectral cut: both a frequency and an amplitude truncation).
SpectralField truncate_R(SpectralField f, double R);

/// (v0, w0) with v0 on |k| <= R0 and w0 on |k| > R0; v0 + w0 == f exactly.
std::pair<SpectralField, SpectralField> split_lowhigh(const SpectralField& f, double R0);

/// Smallest shell radius R0 with chi^{-1} of the |k| > R0 tail < eps/2.
/// Returns the largest shell radius if no shell satisfies it.
double choose_R0(const SpectralField& f, double eps);

}  // namespace rotns
