#pragma once

#include <optional>

#include "gpstrip/analytic.hpp"
#include "gpstrip/field.hpp"
#include "gpstrip/vortices.hpp"

namespace gpstrip::continuation {

/// GP residual Delta Psi + Psi (1 - |Psi|^2) in sector form; second x
/// derivative by central differences, Neumann on the perturbation at the
/// x ends, cubic term through the dealiased quadrature grid.
SectorField gp_residual(const SectorField& f);

/// Area-normalized L2(Omega_d) norm of a residual field.
double residual_norm(const SectorField& r);

struct NewtonResult {
    SectorField field;
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> history;
    bool used_amplitude_constraint = false;
};

/// Newton iteration with the symmetry-reduced strip linearization as the
/// exact Jacobian of the discrete residual; symmetry re-enforced each step.
NewtonResult newton_solve(const SectorField& initial, double tol = 1e-10,
                          int max_iter = 25);

/// Newton with a prescribed chi_k amplitude and free width (bordered
/// system); used to step off the pitchfork when the plain iteration
/// collapses onto the soliton.
NewtonResult newton_solve_fixed_amplitude(const SectorField& initial, int k,
                                          double amplitude_target,
                                          double tol = 1e-10, int max_iter = 25);

/// S0 + Lambda sqrt((d - d_k)/d_k) chi_k.
SectorField asymptotic_guess(const StripDomain& dom, int k, double width,
                             const analytic::Coefficients& coeffs);

struct BranchPoint {
    double width = 0.0;
    SectorField field;
    double amplitude = 0.0;
    double energy = 0.0;
    double residual_norm = 0.0;
    vortices::VortexSet vortex_set;
    int n_negative = -1;  // optional diagnostic, -1 when not computed
};

struct Branch {
    int k = 0;
    std::vector<BranchPoint> points;
    bool truncated = false;       // branch lost before reaching the end
    double last_good_width = 0.0;
};

struct BranchOptions {
    double tol = 1e-10;
    bool vortices = true;
    bool morse = false;
};

/// March d from d_k + d_start_offset to d_k + d_end_offset; first point
/// seeded by the asymptotic guess, later points by a secant predictor.
Branch continue_branch(const StripDomain& dom, int k, double d_start_offset,
                       double d_end_offset, double step,
                       BranchOptions opts = {});

/// Ginzburg-Landau energy over the half strip R x (0, d); sector Parseval
/// for the gradient, quadrature for the quartic term, fourth-order x
/// derivative (diagnostic accuracy; the solver stays second order).
double energy(const SectorField& f);

struct EnergyFit {
    double fitted_coeff = 0.0;
    double fitted_exponent = 0.0;
    bool deficit_positive = true;
    int points_used = 0;
    double reference_coeff = 0.0;  // quadrature-pipeline energy coefficient
};

/// Least-squares fit of E(S0) - E(Psi) against (d - d_k)^2 / d_k over the
/// branch points nearest onset.
EnergyFit verify_energy_expansion(const Branch& branch,
                                  const analytic::Coefficients& coeffs,
                                  double d_k_discrete);

struct AmplitudeFit {
    double prefactor = 0.0;
    double exponent = 0.0;
    int points_used = 0;
};

/// Power-law fit amplitude = c ((d - d_k)/d_k)^p over branch points.
AmplitudeFit fit_amplitude_law(const Branch& branch, double d_k_discrete);

struct TilingReport {
    double r_symmetry_defect = 0.0;  // || R Psi - Psi ||_inf for the k=1 field
    double tiling_defect = 0.0;      // || Psi_k - tiled Psi_1 ||_inf
};

/// Compares Psi_{k,d} with the tiling of Psi_{1,d/k} built via the
/// conjugate reflection; fields are compared pointwise on a fine grid.
TilingReport verify_tiling(const SectorField& psi_k, int k,
                           const SectorField& psi_1);

}  // namespace gpstrip::continuation
