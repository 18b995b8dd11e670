#include "rotns/initial_data.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "rotns/norms.hpp"

namespace rotns {

namespace {

// splitmix64 finalizer: a stateless counter-based generator keyed on
// (seed, wavevector, component), so fields are identical across
// platforms and independent of evaluation order.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

double uniform01(std::uint64_t key) {
    return static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

std::uint64_t mode_key(std::uint64_t seed, int k1, int k2, int k3, int channel) {
    std::uint64_t packed = static_cast<std::uint64_t>(static_cast<std::uint16_t>(k1 + 512));
    packed = (packed << 16) | static_cast<std::uint16_t>(k2 + 512);
    packed = (packed << 16) | static_cast<std::uint16_t>(k3 + 512);
    packed = (packed << 8) | static_cast<std::uint8_t>(channel);
    return mix64(seed) ^ mix64(packed);
}

bool canonical_half(const std::array<int, 3>& k) {
    if (k[2] != 0) return k[2] > 0;
    if (k[1] != 0) return k[1] > 0;
    return k[0] > 0;
}

}  // namespace

SpectralField taylor_green(const Grid& grid, double amplitude) {
    SpectralField f(grid);
    // A sin x1 cos x2 cos x3 expands to coefficients -i A s1 / 8 on the
    // eight corners (s1, s2, s3) in {+-1}^3; the second component carries
    // +i A s2 / 8. Divergence vanishes because s1^2 = s2^2 = 1.
    for (int s1 = -1; s1 <= 1; s1 += 2) {
        for (int s2 = -1; s2 <= 1; s2 += 2) {
            for (int s3 = -1; s3 <= 1; s3 += 2) {
                f.set_mode(s1, s2, s3,
                           {Complex(0.0, -amplitude * s1 / 8.0),
                            Complex(0.0, amplitude * s2 / 8.0), Complex(0.0, 0.0)});
            }
        }
    }
    return f;
}

SpectralField random_solenoidal(const Grid& grid, double kmax, double spectral_exponent,
                                std::uint64_t seed) {
    if (!(kmax > 0.0)) throw std::invalid_argument("random_solenoidal: kmax must be > 0");
    SpectralField f(grid);
    const double ks = grid.k_scale();
    for_each_mode(grid, [&](const std::array<int, 3>& k, std::size_t) {
        if (!canonical_half(k)) return;
        const double kk =
            ks * std::sqrt(static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2]);
        if (kk > kmax) return;
        const double radius = std::pow(kk, -spectral_exponent) / std::sqrt(3.0);
        std::array<Complex, 3> value;
        for (int c = 0; c < 3; ++c) {
            const double phase = two_pi() * uniform01(mode_key(seed, k[0], k[1], k[2], c));
            value[c] = radius * Complex(std::cos(phase), std::sin(phase));
        }
        f.set_mode_pair(k[0], k[1], k[2], value);
    });
    project_leray_inplace(f);
    f.clear_mean();
    return f;
}

SpectralField scale_to_chi(SpectralField f, double target) {
    if (!(target > 0.0)) throw std::invalid_argument("scale_to_chi: target must be > 0");
    const double current = chi_norm(f, -1);
    if (current == 0.0) throw std::invalid_argument("scale_to_chi: zero field");
    f *= target / current;
    return f;
}

double smallness_threshold(double nu) { return nu; }

SpectralField truncate_R(SpectralField f, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("truncate_R: R must be > 0");
    const double ks = f.grid().k_scale();
    for_each_mode(f.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        const double kk =
            ks * std::sqrt(static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2]);
        if (kk > R || f.modulus(idx) > R) {
            for (int c = 0; c < 3; ++c) f.at(c, idx) = Complex(0.0, 0.0);
        }
    });
    return f;
}

std::pair<SpectralField, SpectralField> split_lowhigh(const SpectralField& f, double R0) {
    SpectralField low(f.grid()), high(f.grid());
    const double ks = f.grid().k_scale();
    for_each_mode(f.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        const double kk =
            ks * std::sqrt(static_cast<double>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2]);
        SpectralField& dst = kk <= R0 ? low : high;
        for (int c = 0; c < 3; ++c) dst.at(c, idx) = f.at(c, idx);
    });
    return {std::move(low), std::move(high)};
}

double choose_R0(const SpectralField& f, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("choose_R0: eps must be > 0");
    // Per-shell chi^{-1} mass, keyed by the exact squared magnitude.
    std::map<long long, double> shell_mass;
    const double ks = f.grid().k_scale();
    for_each_mode(f.grid(), [&](const std::array<int, 3>& k, std::size_t idx) {
        const long long q = static_cast<long long>(k[0]) * k[0] + k[1] * k[1] + k[2] * k[2];
        if (q == 0) return;
        const double mag = f.modulus(idx);
        if (mag == 0.0) return;
        shell_mass[q] += mag / (ks * std::sqrt(static_cast<double>(q)));
    });
    const std::vector<double> radii = f.grid().shell_radii();
    double total = 0.0;
    for (const auto& [q, m] : shell_mass) total += m;
    // tail(R_j) = mass strictly above shell j; walk shells in order.
    double below = 0.0;
    for (double r : radii) {
        const long long q = std::llround((r / ks) * (r / ks));
        const auto it = shell_mass.find(q);
        if (it != shell_mass.end()) below += it->second;
        if (total - below < 0.5 * eps) return r;
    }
    return radii.empty() ? 0.0 : radii.back();
}

}  // namespace rotns
