#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace rotns {

constexpr double two_pi() { return 6.283185307179586476925286766559; }

/// Lattice geometry of the periodic box: n points per axis, integer
/// wavevectors k with |k_i| <= n/2, and the 2/3-rule dealias cutoff.
class Grid {
  public:
    Grid() = default;
    Grid(int n, double period = two_pi(), double dealias_fraction = 2.0 / 3.0);

    int n() const { return n_; }
    double period() const { return period_; }
    double dealias_fraction() const { return dealias_fraction_; }

    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

    /// Physical wavevector = k_scale * integer triple (equals the integers
    /// when period = 2*pi).
    double k_scale() const { return two_pi() / period_; }

    /// Signed integer wavenumber for storage index i in [0, n).
    int wavenumber(int i) const { return i <= n_ / 2 - 1 ? i : i - n_; }

    /// Storage index of signed wavenumber k in [-n/2, n/2).
    int index_of(int k) const { return k >= 0 ? k : k + n_; }

    std::size_t flat_index(int i1, int i2, int i3) const {
        return (static_cast<std::size_t>(i3) * n_ + i2) * n_ + i1;
    }

    std::size_t mode_index(int k1, int k2, int k3) const {
        return flat_index(index_of(k1), index_of(k2), index_of(k3));
    }

    /// Per-axis retention bound of the dealias mask: keep |k_i| <= limit.
    double dealias_limit() const { return dealias_fraction_ * n_ / 2.0; }

    /// Largest physical |k| on the lattice.
    double max_k() const;

    /// Sorted distinct physical shell radii |k| > 0 of the full lattice.
    std::vector<double> shell_radii() const;

    bool operator==(const Grid&) const = default;

  private:
    int n_ = 0;
    double period_ = two_pi();
    double dealias_fraction_ = 2.0 / 3.0;
};

/// Visit every lattice mode: f(k, flat_index) with k the signed integer
/// wavevector triple. Iteration order is fixed (x fastest), which keeps
/// norm accumulations deterministic.
template <typename F>
void for_each_mode(const Grid& grid, F&& f) {
    const int n = grid.n();
    std::size_t idx = 0;
    for (int i3 = 0; i3 < n; ++i3) {
        const int k3 = grid.wavenumber(i3);
        for (int i2 = 0; i2 < n; ++i2) {
            const int k2 = grid.wavenumber(i2);
            for (int i1 = 0; i1 < n; ++i1, ++idx) {
                f(std::array<int, 3>{grid.wavenumber(i1), k2, k3}, idx);
            }
        }
    }
}

}  // namespace rotns
