#include "rotns/dynamics.hpp"

#include <cmath>

#include "rotns/timestepper.hpp"

namespace rotns {

namespace {

double k_phys_sq(const Grid& grid, const std::array<int, 3>& k) {
    const double s = grid.k_scale();
    return s * s * (static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2]);
}

}  // namespace

SpectralField coriolis_rhs(const SpectralField& f, double omega) {
    SpectralField out(f.grid());
    if (omega == 0.0) return out;
    const std::size_t size = f.grid().size();
    for (std::size_t idx = 0; idx < size; ++idx) {
        out.at(0, idx) = -f.at(1, idx);
        out.at(1, idx) = f.at(0, idx);
    }
    project_leray_inplace(out);
    out *= -omega;
    return out;
}

SpectralField viscous_rhs(const SpectralField& f, double nu) {
    SpectralField out(f.grid());
    for_each_mode(f.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        const double factor = -nu * k_phys_sq(f.grid(), k);
        for (int c = 0; c < 3; ++c) out.at(c, idx) = factor * f.at(c, idx);
    });
    return out;
}

SpectralField divergence_uu(const SpectralField& f, FftEngine& fft) {
    const Grid& grid = f.grid();
    const std::size_t size = grid.size();

    const SpectralField fd = dealias(f);
    std::array<std::vector<double>, 3> u;
    fft.velocity_to_physical(fd, u);

    // Six distinct entries of the symmetric product tensor u_i u_j.
    static constexpr int pair_i[6] = {0, 1, 2, 0, 0, 1};
    static constexpr int pair_j[6] = {0, 1, 2, 1, 2, 2};
    std::array<std::vector<Complex>, 6> w;
    {
        std::vector<double> prod(size);
        for (int p = 0; p < 6; ++p) {
            const std::vector<double>& a = u[pair_i[p]];
            const std::vector<double>& b = u[pair_j[p]];
            for (std::size_t q = 0; q < size; ++q) prod[q] = a[q] * b[q];
            fft.to_spectral(prod, w[p]);
        }
    }
    const auto tensor = [&](int i, int j) -> const std::vector<Complex>& {
        for (int p = 0; p < 6; ++p) {
            if ((pair_i[p] == i && pair_j[p] == j) || (pair_i[p] == j && pair_j[p] == i)) {
                return w[p];
            }
        }
        return w[0];  // unreachable
    };

    SpectralField out(grid);
    const double ks = grid.k_scale();
    for (int i = 0; i < 3; ++i) {
        const std::vector<Complex>& wi0 = tensor(i, 0);
        const std::vector<Complex>& wi1 = tensor(i, 1);
        const std::vector<Complex>& wi2 = tensor(i, 2);
        for_each_mode(grid, [&](const std::array<int, 3>& k, std::size_t idx) {
            const Complex div = static_cast<double>(k[0]) * wi0[idx] +
                                static_cast<double>(k[1]) * wi1[idx] +
                                static_cast<double>(k[2]) * wi2[idx];
            out.at(i, idx) = Complex(0.0, ks) * div;
        });
    }
    dealias_inplace(out);
    out.clear_mean();
    return out;
}

SpectralField nonlinear_rhs(const SpectralField& f, FftEngine& fft) {
    SpectralField out = divergence_uu(f, fft);
    project_leray_inplace(out);
    out *= -1.0;
    if (!out.finite()) throw BlowupError("nonlinear_rhs: non-finite coefficients");
    return out;
}

RhsTerms full_rhs(const SpectralField& f, const SolverConfig& cfg, bool linear_only,
                  FftEngine& fft) {
    RhsTerms terms{viscous_rhs(f, cfg.nu), coriolis_rhs(f, cfg.omega), SpectralField(f.grid()),
                   SpectralField(f.grid())};
    if (!linear_only && cfg.nonlinear) terms.nonlinear = nonlinear_rhs(f, fft);
    terms.total = terms.viscous;
    terms.total += terms.coriolis;
    terms.total += terms.nonlinear;
    return terms;
}

ScalarSpectralField recover_pressure(const SpectralField& f, double omega, FftEngine& fft) {
    const Grid& grid = f.grid();
    // g = (u.grad)u + Omega e3 x u, unprojected; the advective form equals
    // the divergence form on the retained modes for solenoidal input.
    SpectralField g = divergence_uu(f, fft);
    if (omega != 0.0) {
        for (std::size_t idx = 0; idx < grid.size(); ++idx) {
            g.at(0, idx) += -omega * f.at(1, idx);
            g.at(1, idx) += omega * f.at(0, idx);
        }
    }
    ScalarSpectralField p{grid, std::vector<Complex>(grid.size(), Complex(0.0, 0.0))};
    const double ks = grid.k_scale();
    for_each_mode(grid, [&](const std::array<int, 3>& k, std::size_t idx) {
        const double kk2 = k_phys_sq(grid, k);
        if (kk2 == 0.0) return;
        const Complex kdotg = ks * (static_cast<double>(k[0]) * g.at(0, idx) +
                                    static_cast<double>(k[1]) * g.at(1, idx) +
                                    static_cast<double>(k[2]) * g.at(2, idx));
        p.coeffs[idx] = Complex(0.0, 1.0) * kdotg / kk2;
    });
    return p;
}

double coriolis_neutrality_residual(const SpectralField& f, double omega) {
    // Re[(e3 x uhat).conj(uhat)] = Re[-u2 conj(u1) + u1 conj(u2)] per mode.
    double sum = 0.0, carry = 0.0;
    const std::size_t size = f.grid().size();
    for (std::size_t idx = 0; idx < size; ++idx) {
        const Complex term =
            -f.at(1, idx) * std::conj(f.at(0, idx)) + f.at(0, idx) * std::conj(f.at(1, idx));
        const double x = term.real();
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return std::abs(omega * sum);
}

}  // namespace rotns
