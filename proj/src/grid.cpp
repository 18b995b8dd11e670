#include "rotns/grid.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace rotns {

Grid::Grid(int n, double period, double dealias_fraction)
    : n_(n), period_(period), dealias_fraction_(dealias_fraction) {
    if (n < 8 || n % 2 != 0) {
        throw std::invalid_argument("Grid: n must be an even integer >= 8");
    }
    if (period <= 0.0) {
        throw std::invalid_argument("Grid: period must be positive");
    }
    if (dealias_fraction <= 0.0 || dealias_fraction > 1.0) {
        throw std::invalid_argument("Grid: dealias_fraction must be in (0, 1]");
    }
}

double Grid::max_k() const {
    const double half = n_ / 2.0;
    return k_scale() * std::sqrt(3.0 * half * half);
}

std::vector<double> Grid::shell_radii() const {
    // Distinct squared magnitudes are exact integers, so collecting them
    // instead of the radii avoids duplicate shells from sqrt roundoff.
    std::set<long long> squares;
    for_each_mode(*this, [&](const std::array<int, 3>& k, std::size_t) {
        const long long q = static_cast<long long>(k[0]) * k[0] +
                            static_cast<long long>(k[1]) * k[1] +
                            static_cast<long long>(k[2]) * k[2];
        if (q > 0) squares.insert(q);
    });
    std::vector<double> radii;
    radii.reserve(squares.size());
    for (long long q : squares) {
        radii.push_back(k_scale() * std::sqrt(static_cast<double>(q)));
    }
    return radii;
}

}  // namespace rotns
