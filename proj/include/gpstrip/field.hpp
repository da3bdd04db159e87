#pragma once

#include "gpstrip/grid.hpp"

namespace gpstrip {

/// Complex field on the strip stored as cosine-sector coefficient functions
/// psi_j(x), j = 0..n_modes, row-major by sector. Value objects; all
/// operations return copies.
class SectorField {
  public:
    SectorField() = default;
    explicit SectorField(const StripDomain& dom)
        : dom_(dom), c_((size_t)(dom.n_modes + 1) * dom.nx, complexd{0.0, 0.0}) {}

    const StripDomain& domain() const { return dom_; }
    int n_modes() const { return dom_.n_modes; }
    int nx() const { return dom_.nx; }

    std::span<complexd> sector(int j) {
        return {c_.data() + (size_t)j * dom_.nx, (size_t)dom_.nx};
    }
    std::span<const complexd> sector(int j) const {
        return {c_.data() + (size_t)j * dom_.nx, (size_t)dom_.nx};
    }
    complexd& at(int j, int i) { return c_[(size_t)j * dom_.nx + i]; }
    complexd at(int j, int i) const { return c_[(size_t)j * dom_.nx + i]; }

    std::span<complexd> coeffs() { return c_; }
    std::span<const complexd> coeffs() const { return c_; }

    SectorField& operator+=(const SectorField& o);
    SectorField& operator-=(const SectorField& o);
    SectorField& operator*=(double s);
    friend SectorField operator-(SectorField a, const SectorField& b) { return a -= b; }
    friend SectorField operator+(SectorField a, const SectorField& b) { return a += b; }

    double max_abs() const;

  private:
    StripDomain dom_;
    cvector c_;
};

/// Field with sector 0 = tanh(x/sqrt(2)) sampled on the grid.
SectorField soliton_field(const StripDomain& dom);

/// chi_k field: sector k = i chi0(x), all other sectors zero.
SectorField chi_k_field(const StripDomain& dom, int k);

/// Projection onto the symmetry class: Re psi_j odd in x, Im psi_j even.
/// Idempotent.
SectorField enforce_symmetry(const SectorField& f);

/// Conjugate reflection across y = d/2: psi_j -> (-1)^j conj(psi_j).
SectorField reflect_conjugate(const SectorField& f);

SectorField conjugate(const SectorField& f);

/// Pointwise evaluation on an endpoint y grid over [0, d]; row-major
/// (nx rows of y_points).
cvector to_physical(const SectorField& f, int y_points);

/// Pointwise evaluation on the midpoint quadrature grid (nx rows of ny_quad).
cvector to_quadrature_grid(const SectorField& f);

/// Sector coefficients from samples on the quadrature grid.
SectorField from_physical(std::span<const complexd> grid, const StripDomain& dom);

/// L2(Omega_d) norm computed from sector coefficients via Parseval
/// (Omega_d is the doubled strip (-d, d)).
double parseval_l2(const SectorField& f);

/// L2(Omega_d) norm evaluated on the quadrature grid, for cross-checks.
double physical_l2(const SectorField& f);

/// chi_k component <f, chi_k> / ||chi_k||^2 (real L2(Omega_d) pairing).
double amplitude(const SectorField& f, int k);

}  // namespace gpstrip
