#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace gpstrip {

using complexd = std::complex<double>;
using cvector = std::vector<complexd>;
using rvector = std::vector<double>;

/// Truncated strip geometry: x in [-L, L] on a uniform grid with an odd
/// number of points (so x = 0 is a grid point), transverse width d, cosine
/// modes 0..n_modes, and ny_quad midpoint quadrature nodes on (0, d) for
/// dealiased evaluation of cubic terms.
struct StripDomain {
    double half_length = 0.0;
    double width = 0.0;
    int nx = 0;
    int n_modes = 0;
    int ny_quad = 0;

    double h() const { return 2.0 * half_length / (nx - 1); }
    // centered form keeps the grid bitwise symmetric about x = 0
    double x(int i) const { return (i - (nx - 1) / 2) * h(); }
    int center() const { return (nx - 1) / 2; }
    int nh() const { return (nx - 1) / 2; }  // half-grid size (x > 0 nodes)

    StripDomain with_width(double d) const {
        StripDomain dom = *this;
        if (d <= 0.0) throw std::invalid_argument("width must be positive");
        dom.width = d;
        return dom;
    }

    bool same_grid(const StripDomain& o) const {
        return nx == o.nx && n_modes == o.n_modes &&
               half_length == o.half_length && ny_quad == o.ny_quad;
    }
};

StripDomain make_domain(double half_length, double width, int nx, int n_modes,
                        int ny_quad = 0);

/// Composite Simpson quadrature on the uniform x grid (nx odd).
double simpson(std::span<const double> f, double h);
double simpson_abs2(std::span<const complexd> f, double h);

}  // namespace gpstrip
