#include "gpstrip/field.hpp"

#include <cmath>

#include "gpstrip/analytic.hpp"
#include "gpstrip/kernels.hpp"

namespace gpstrip {

SectorField& SectorField::operator+=(const SectorField& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SectorField& SectorField::operator-=(const SectorField& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SectorField& SectorField::operator*=(double s) {
    for (auto& c : c_) c *= s;
    return *this;
}

double SectorField::max_abs() const {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, std::abs(c));
    return m;
}

SectorField soliton_field(const StripDomain& dom) {
    SectorField f(dom);
    auto s0 = f.sector(0);
    for (int i = 0; i < dom.nx; ++i) s0[i] = analytic::soliton(dom.x(i));
    return f;
}

SectorField chi_k_field(const StripDomain& dom, int k) {
    if (k < 1 || k > dom.n_modes)
        throw std::invalid_argument("chi_k_field: k out of range 1..n_modes");
    SectorField f(dom);
    auto sk = f.sector(k);
    for (int i = 0; i < dom.nx; ++i) sk[i] = complexd{0.0, analytic::chi0(dom.x(i))};
    return f;
}

SectorField enforce_symmetry(const SectorField& f) {
    SectorField g = f;
    const int nx = f.nx();
    for (int j = 0; j <= f.n_modes(); ++j) {
        auto s = g.sector(j);
        for (int i = 0, m = nx - 1; i <= m; ++i, --m) {
            const complexd a = s[i], b = s[m];
            s[i] = complexd{0.5 * (a.real() - b.real()), 0.5 * (a.imag() + b.imag())};
            s[m] = complexd{-s[i].real(), s[i].imag()};
        }
    }
    return g;
}

SectorField reflect_conjugate(const SectorField& f) {
    SectorField g = f;
    for (int j = 0; j <= f.n_modes(); ++j) {
        auto s = g.sector(j);
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        for (auto& c : s) c = sign * std::conj(c);
    }
    return g;
}

SectorField conjugate(const SectorField& f) {
    SectorField g = f;
    for (auto& c : g.coeffs()) c = std::conj(c);
    return g;
}

cvector to_physical(const SectorField& f, int y_points) {
    if (y_points < 2) throw std::invalid_argument("to_physical: y_points must be >= 2");
    cvector phys((size_t)f.nx() * y_points);
    kernels::to_physical(f.coeffs(), f.n_modes(), f.nx(), y_points, phys);
    return phys;
}

cvector to_quadrature_grid(const SectorField& f) {
    const auto& d = f.domain();
    rvector table = kernels::cosine_table(d.n_modes, d.ny_quad);
    cvector phys((size_t)d.nx * d.ny_quad);
    kernels::to_quadrature(f.coeffs(), d.n_modes, d.nx, table, d.ny_quad, phys);
    return phys;
}

SectorField from_physical(std::span<const complexd> grid, const StripDomain& dom) {
    SectorField f(dom);
    rvector table = kernels::cosine_table(dom.n_modes, dom.ny_quad);
    kernels::from_quadrature(grid, dom.n_modes, dom.nx, table, dom.ny_quad,
                             f.coeffs());
    return f;
}

double parseval_l2(const SectorField& f) {
    const auto& dom = f.domain();
    rvector dens(dom.nx, 0.0);
    for (int j = 0; j <= dom.n_modes; ++j) {
        const double w = (j == 0) ? 2.0 * dom.width : dom.width;
        auto s = f.sector(j);
        for (int i = 0; i < dom.nx; ++i) dens[i] += w * std::norm(s[i]);
    }
    return std::sqrt(simpson(dens, dom.h()));
}

double physical_l2(const SectorField& f) {
    const auto& dom = f.domain();
    cvector phys = to_quadrature_grid(f);
    rvector dens(dom.nx, 0.0);
    for (int i = 0; i < dom.nx; ++i) {
        double acc = 0.0;
        for (int q = 0; q < dom.ny_quad; ++q)
            acc += std::norm(phys[(size_t)i * dom.ny_quad + q]);
        dens[i] = 2.0 * dom.width * acc / dom.ny_quad;  // Omega_d doubles (0,d)
    }
    return std::sqrt(simpson(dens, dom.h()));
}

double amplitude(const SectorField& f, int k) {
    const auto& dom = f.domain();
    rvector num(dom.nx), den(dom.nx);
    auto sk = f.sector(k);
    for (int i = 0; i < dom.nx; ++i) {
        const double c = analytic::chi0(dom.x(i));
        num[i] = sk[i].imag() * c;
        den[i] = c * c;
    }
    return simpson(num, dom.h()) / simpson(den, dom.h());
}

}  // namespace gpstrip
