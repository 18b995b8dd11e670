#pragma once

#include <array>
#include <complex>
#include <vector>

#include "rotns/grid.hpp"

namespace rotns {

using Complex = std::complex<double>;

/// Velocity field in Fourier representation: three complex coefficient
/// arrays over the full integer lattice, u(x) = sum_k uhat_k e^{i k.x}.
/// Valid fields are Hermitian (real in physical space) and mean-free.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const Grid& grid);

    const Grid& grid() const { return grid_; }

    Complex& at(int comp, std::size_t idx) { return coeffs_[comp][idx]; }
    const Complex& at(int comp, std::size_t idx) const { return coeffs_[comp][idx]; }

    std::vector<Complex>& component(int comp) { return coeffs_[comp]; }
    const std::vector<Complex>& component(int comp) const { return coeffs_[comp]; }

    Complex mode(int comp, int k1, int k2, int k3) const {
        return coeffs_[comp][grid_.mode_index(k1, k2, k3)];
    }

    /// Set one vector coefficient; does not touch the mirror mode.
    void set_mode(int k1, int k2, int k3, const std::array<Complex, 3>& value);

    /// Set uhat(k) = value and uhat(-k) = conj(value): the Hermitian pair.
    void set_mode_pair(int k1, int k2, int k3, const std::array<Complex, 3>& value);

    /// Euclidean modulus over the three components at one lattice site.
    double modulus(std::size_t idx) const;

    double max_abs() const;
    bool finite() const;

    /// |uhat(0)| (must be 0 for a mean-free field).
    double mean_mode_abs() const;
    void clear_mean();

    /// sup_k |uhat(-k) - conj(uhat(k))| / max|uhat|; 0 for the zero field.
    double hermitian_residual() const;

    /// sup over modes of |k.uhat| / (|k| |uhat|); 0 for the zero field.
    double divergence_residual() const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double c);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(SpectralField a, double c) { return a *= c; }
    friend SpectralField operator*(double c, SpectralField a) { return a *= c; }

  private:
    Grid grid_;
    std::array<std::vector<Complex>, 3> coeffs_;
};

/// Helmholtz/Leray projection: per mode k != 0, uhat -> uhat - k (k.uhat)/|k|^2.
/// Annihilates gradients, fixes divergence-free fields, idempotent.
SpectralField project_leray(SpectralField f);

/// 2/3-rule mask: zero every mode with any |k_i| > dealias_fraction * n/2.
SpectralField dealias(SpectralField f);

void project_leray_inplace(SpectralField& f);
void dealias_inplace(SpectralField& f);

}  // namespace rotns
