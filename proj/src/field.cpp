#include "rotns/field.hpp"

#include <cmath>
#include <stdexcept>

namespace rotns {

namespace {

void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid())) {
        throw std::invalid_argument("SpectralField: grid mismatch");
    }
}

}  // namespace

SpectralField::SpectralField(const Grid& grid) : grid_(grid) {
    for (auto& c : coeffs_) c.assign(grid_.size(), Complex(0.0, 0.0));
}

void SpectralField::set_mode(int k1, int k2, int k3, const std::array<Complex, 3>& value) {
    const std::size_t idx = grid_.mode_index(k1, k2, k3);
    for (int c = 0; c < 3; ++c) coeffs_[c][idx] = value[c];
}

void SpectralField::set_mode_pair(int k1, int k2, int k3, const std::array<Complex, 3>& value) {
    set_mode(k1, k2, k3, value);
    set_mode(-k1, -k2, -k3, {std::conj(value[0]), std::conj(value[1]), std::conj(value[2])});
}

double SpectralField::modulus(std::size_t idx) const {
    return std::sqrt(std::norm(coeffs_[0][idx]) + std::norm(coeffs_[1][idx]) +
                     std::norm(coeffs_[2][idx]));
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (std::size_t idx = 0; idx < grid_.size(); ++idx) m = std::max(m, modulus(idx));
    return m;
}

bool SpectralField::finite() const {
    for (const auto& c : coeffs_) {
        for (const Complex& z : c) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    }
    return true;
}

double SpectralField::mean_mode_abs() const {
    return modulus(grid_.mode_index(0, 0, 0));
}

void SpectralField::clear_mean() {
    const std::size_t idx = grid_.mode_index(0, 0, 0);
    for (auto& c : coeffs_) c[idx] = Complex(0.0, 0.0);
}

double SpectralField::hermitian_residual() const {
    const double scale = max_abs();
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for_each_mode(grid_, [&](const std::array<int, 3>& k, std::size_t idx) {
        const std::size_t mirror = grid_.mode_index(-k[0], -k[1], -k[2]);
        for (int c = 0; c < 3; ++c) {
            worst = std::max(worst, std::abs(coeffs_[c][mirror] - std::conj(coeffs_[c][idx])));
        }
    });
    return worst / scale;
}

double SpectralField::divergence_residual() const {
    double worst = 0.0;
    for_each_mode(grid_, [&](const std::array<int, 3>& k, std::size_t idx) {
        if (k[0] == 0 && k[1] == 0 && k[2] == 0) return;
        const double mag = modulus(idx);
        if (mag == 0.0) return;
        const Complex dot = static_cast<double>(k[0]) * coeffs_[0][idx] +
                            static_cast<double>(k[1]) * coeffs_[1][idx] +
                            static_cast<double>(k[2]) * coeffs_[2][idx];
        const double kk = std::sqrt(static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2]);
        worst = std::max(worst, std::abs(dot) / (kk * mag));
    });
    return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_grid(*this, other);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < coeffs_[c].size(); ++i) coeffs_[c][i] += other.coeffs_[c][i];
    }
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_grid(*this, other);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < coeffs_[c].size(); ++i) coeffs_[c][i] -= other.coeffs_[c][i];
    }
    return *this;
}

SpectralField& SpectralField::operator*=(double c) {
    for (auto& comp : coeffs_) {
        for (Complex& z : comp) z *= c;
    }
    return *this;
}

void project_leray_inplace(SpectralField& f) {
    for_each_mode(f.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        const double kk = static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2];
        if (kk == 0.0) return;
        const Complex dot = static_cast<double>(k[0]) * f.at(0, idx) +
                            static_cast<double>(k[1]) * f.at(1, idx) +
                            static_cast<double>(k[2]) * f.at(2, idx);
        const Complex scale = dot / kk;
        for (int c = 0; c < 3; ++c) f.at(c, idx) -= static_cast<double>(k[c]) * scale;
    });
}

void dealias_inplace(SpectralField& f) {
    const double limit = f.grid().dealias_limit();
    for_each_mode(f.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        if (std::abs(k[0]) > limit || std::abs(k[1]) > limit || std::abs(k[2]) > limit) {
            for (int c = 0; c < 3; ++c) f.at(c, idx) = Complex(0.0, 0.0);
        }
    });
}

SpectralField project_leray(SpectralField f) {
    project_leray_inplace(f);
    return f;
}

SpectralField dealias(SpectralField f) {
    dealias_inplace(f);
    return f;
}

}  // namespace rotns
