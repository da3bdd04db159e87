#pragma once

#include "gpstrip/banded.hpp"
#include "gpstrip/field.hpp"
#include "gpstrip/grid.hpp"

namespace gpstrip {

enum class L0Sign { plus, minus };
enum class OpKind { L0_plus, L0_minus, Tk, custom };

/// Discretized 1-D Sturm-Liouville operator. Real decoupled operators are
/// nx by nx tridiagonal; complex-coupled sector operators act on interleaved
/// (Re, Im) pairs, 2 nx unknowns, bandwidth 3. Trapezoid half-weights at the
/// two x ends make the Neumann truncation symmetric.
struct LinearOperator1D {
    SymBanded matrix;
    OpKind kind = OpKind::custom;
    int sector = 0;
    double width = 0.0;
};

LinearOperator1D assemble_L0(L0Sign sign, const StripDomain& dom);

/// T_k about psi0: -psi'' + (pi k/d)^2 psi - psi (1 - |psi0|^2)
///                 + 2 <psi0, psi>_C psi0, in real (Re, Im) form.
LinearOperator1D assemble_Tk(std::span<const complexd> psi0, int k, double width,
                             const StripDomain& dom);

/// Pointwise applications on the full grid (Neumann ghosts), for residual
/// checks and right-hand sides.
cvector apply_L0(L0Sign sign, const StripDomain& dom, std::span<const complexd> f);
cvector apply_Tk(std::span<const complexd> psi0, int k, double width,
                 const StripDomain& dom, std::span<const complexd> f);

/// Linearization of the GP residual about a strip field,
///   L(w) = -Delta w - w (1 - |Psi|^2) + 2 <Psi, w>_C Psi,
/// assembled on stacked sector coefficients. reduce_symmetry = true projects
/// onto the class (Re odd / Im even in x) on the half grid, which removes
/// the translation and phase quasi-modes; this is the form the Newton solver
/// and the Morse counts use. The matrix is similarity-transformed with the
/// fold and sector weights so that it is symmetric.
struct StripOperator {
    SymBanded matrix;
    StripDomain dom;
    bool reduced = true;
    rvector sqrt_w;  // per-DOF similarity weights

    int slots() const { return 2 * (dom.n_modes + 1); }
    int nodes() const { return reduced ? dom.nh() + 1 : dom.nx; }
    // node m, sector j, component c (0 = Re, 1 = Im)
    int idx(int m, int j, int c) const { return m * slots() + 2 * j + c; }
};

StripOperator assemble_strip_linearization(const SectorField& f,
                                           bool reduce_symmetry = true);

SpectrumResult spectrum(const LinearOperator1D& op, int n_eigs,
                        double tol_zero = 1e-6, bool want_vectors = true);
SpectrumResult spectrum(const StripOperator& op, int n_eigs,
                        double tol_zero = 1e-6, bool want_vectors = true);

/// Morse index of the symmetry-class linearization about a y-independent
/// real profile (defaults to the sampled soliton): the sector blocks
/// decouple into tridiagonal halves, counted by Sturm sequences.
int morse_index_about_profile(const StripDomain& dom,
                              std::span<const double> profile,
                              double tol_zero = 1e-6);
int morse_index_about_soliton(const StripDomain& dom, double tol_zero = 1e-6);

/// Lowest eigenvalue of the Im-even half of T_k about a real profile
/// (the mode that crosses zero at the critical width).
double tk_lowest_eigenvalue(const StripDomain& dom, std::span<const double> profile,
                            int k);

}  // namespace gpstrip
