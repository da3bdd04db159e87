#include "gpstrip/grid.hpp"

namespace gpstrip {

StripDomain make_domain(double half_length, double width, int nx, int n_modes,
                        int ny_quad) {
    if (nx < 3) throw std::invalid_argument("nx must be at least 3");
    if (nx % 2 == 0) throw std::invalid_argument("nx must be odd so that x = 0 is a grid point");
    if (n_modes < 1) throw std::invalid_argument("n_modes must be at least 1");
    if (half_length < 10.0)
        throw std::invalid_argument("half_length must be at least 10 (tail truncation)");
    if (width <= 0.0) throw std::invalid_argument("width must be positive");
    if (ny_quad == 0) ny_quad = 4 * n_modes;
    if (ny_quad < 4 * n_modes)
        throw std::invalid_argument("ny_quad must be at least 4*n_modes (dealiasing)");
    return StripDomain{half_length, width, nx, n_modes, ny_quad};
}

double simpson(std::span<const double> f, double h) {
    const size_t n = f.size();
    double odd = 0.0, even = 0.0;
    for (size_t i = 1; i + 1 < n; i += 2) odd += f[i];
    for (size_t i = 2; i + 1 < n; i += 2) even += f[i];
    return h / 3.0 * (f[0] + f[n - 1] + 4.0 * odd + 2.0 * even);
}

double simpson_abs2(std::span<const complexd> f, double h) {
    const size_t n = f.size();
    double odd = 0.0, even = 0.0;
    auto a2 = [](complexd z) { return std::norm(z); };
    for (size_t i = 1; i + 1 < n; i += 2) odd += a2(f[i]);
    for (size_t i = 2; i + 1 < n; i += 2) even += a2(f[i]);
    return h / 3.0 * (a2(f[0]) + a2(f[n - 1]) + 4.0 * odd + 2.0 * even);
}

}  // namespace gpstrip
