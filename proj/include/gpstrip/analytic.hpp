#pragma once

#include <span>

#include "gpstrip/grid.hpp"

namespace gpstrip::analytic {

/// Black soliton S0(x) = tanh(x/sqrt(2)).
double soliton(double x);
double soliton_deriv(double x);

/// chi0(x) = sech(x/sqrt(2)), lowest mode of the linearization about S0.
double chi0(double x);

/// Critical strip width d_k = sqrt(2) pi k of the k-th transverse mode.
double critical_width(int k);

/// U0(x) = -x / (2 sqrt(2) cosh^2(x/sqrt(2))), the second lambda-derivative
/// of the zero-sector branch at onset.
double u_star(double x);
double u_star_xx(double x);

/// Residual of the ODE satisfied by u_star, with analytic derivatives:
///   -U'' - U sech^2(x/s2) + 2 U tanh^2(x/s2) + tanh(x/s2) sech^2(x/s2)
double u_star_ode_residual(double x);

struct Coefficients {
    double omega = 0.0;         // cubic coefficient of the bifurcation function
    double lambda_coeff = 0.0;  // amplitude prefactor, sqrt(12 sqrt2 / omega)
    double energy_coeff = 0.0;  // quadratic energy-deficit coefficient
    double int_chi0_sq = 0.0;
    double int_chi0_4 = 0.0;
    double cross_term = 0.0;    // int S0 v chi0^2
    double soliton_energy_density = 0.0;
};

/// Solves -v'' + 4 v - 3 chi0^2 v = -S0 chi0^2 with Neumann ends.
rvector solve_v(int nx, double half_length);

/// Quadrature pipeline for omega, Lambda and the energy coefficient.
/// Throws if the computed values violate their structural bounds.
Coefficients compute_coefficients(int nx, double half_length);

/// Weighted Sobolev norm ||f||_H, with |f'|^2 + (1 - S0^2)|f|^2 integrated
/// by Simpson; the derivative is a fourth-order stencil.
double h_norm(const StripDomain& dom, std::span<const complexd> f);

/// Distance d(f, g)^2 = ||f - g||_H^2 + || |g|^2 - |f|^2 ||_L2^2.
double gl_distance(const StripDomain& dom, std::span<const complexd> f,
                   std::span<const complexd> g);

/// Fourth-order first derivative of a grid function (used by the norm and
/// energy diagnostics; the solvers themselves stay second order).
rvector deriv4(std::span<const double> f, double h);
cvector deriv4(std::span<const complexd> f, double h);

}  // namespace gpstrip::analytic
