#pragma once

#include "gpstrip/field.hpp"
#include "gpstrip/grid.hpp"

namespace gpstrip::reduction {

/// Converged state of the projected system at (k, width, lambda):
/// psi0 is the zero Fourier sector, w the complement with w_0 = 0 and the
/// sector-k part orthogonal to i chi0.
struct ReducedState {
    cvector psi0;
    SectorField w;
    double lambda = 0.0;
    int k = 0;
    double width = 0.0;
    double fp_residual = 0.0;
    std::vector<double> history;  // successive-iterate distances
};

/// Transverse average of 2 <psi0, w> w + |w|^2 (psi0 + w).
cvector f0(const StripDomain& dom, std::span<const complexd> psi0,
           const SectorField& w_full);

/// g(psi0, w) = -2 <psi0, w> w - |w|^2 (psi0 + w) + f0(psi0, w); the zero
/// sector vanishes by construction and is cleared exactly.
SectorField g_nl(const StripDomain& dom, std::span<const complexd> psi0,
                 const SectorField& w_full);

/// Newton solve of -psi'' - psi (1 - |psi|^2) + f0 = 0 in the symmetry
/// class with psi(0) = 0 pinned; starts from `init` (default: sampled
/// soliton). Throws on non-convergence with the residual history attached.
cvector solve_zero_sector(const StripDomain& dom, std::span<const complexd> f0_rhs,
                          double tol, int max_iter = 25,
                          const cvector* init = nullptr);

/// Sector-by-sector solves T_j w_j = rhs_j (j != k); the j = k sector gets
/// a bordered system enforcing <w_k, i chi0> = 0. rhs must have zero sector
/// identically 0.
SectorField solve_projected_w(const StripDomain& dom, std::span<const complexd> psi0,
                              const SectorField& rhs, int k, double width);

/// Picard iteration of the reduction map from (S0, 0).
ReducedState fixed_point(const StripDomain& dom, int k, double width, double lambda,
                         double tol = 1e-12, int max_iter = 60);

/// Bifurcation function: the chi_k component of T(Z) - g on the converged
/// state, <., chi_k> over the doubled strip.
double bifurcation_J(const StripDomain& dom, int k, double width, double lambda,
                     double tol = 1e-12);
double bifurcation_J(const ReducedState& st);

/// Zero-sector solution with no forcing (discrete soliton profile).
rvector discrete_soliton(const StripDomain& dom);

/// Width at which the lowest eigenvalue of T_k about the discrete soliton
/// crosses zero (bisection to ~1e-12).
double critical_width_discrete(const StripDomain& dom, int k);

struct DerivativeProbe {
    double d_k = 0.0;              // discrete critical width used
    double j_at_zero = 0.0;        // J(d_k, 0)
    double d_d = 0.0, d_lambda = 0.0, d_dd = 0.0, d_ll = 0.0;   // vanishing set
    double d_dl = 0.0;             // expected -2 sqrt(2)
    double d_lll = 0.0;            // expected omega * d_k
    double d_lambda_err = 0.0;     // step-halving estimates
    double d_dl_err = 0.0;
    double d_lll_err = 0.0;
};

struct FdSteps {
    double lambda_small = 2.5e-4;  // first/second lambda derivatives
    double lambda_big = 0.05;      // third derivative (Richardson halved)
    double width_step = 0.04;
    double tol = 1e-11;
};

DerivativeProbe probe_J_derivatives(const StripDomain& dom, int k,
                                    FdSteps steps = {});

/// Positive root of J(width, .) for width > d_k (secant), or 0 if none.
double lambda_root(const StripDomain& dom, int k, double width, double tol = 1e-12);

/// psi0 + W + lambda chi_k as a strip field.
SectorField assemble_state_field(const ReducedState& st);

}  // namespace gpstrip::reduction
