#pragma once

#include "gpstrip/grid.hpp"

namespace gpstrip::kernels {

/// Cosine tables for the midpoint quadrature nodes y_q = (q + 1/2) d / M:
/// table[j*M + q] = cos(pi j (q + 1/2) / M). Width-independent.
rvector cosine_table(int n_modes, int ny_quad);

/// Sector coefficients (n_modes+1 rows of nx) -> physical values on the
/// quadrature nodes, phys[i*M + q] = sum_j c[j*nx + i] table[j*M + q].
/// OpenMP over grid rows; every output slot is written by exactly one
/// iteration, so results are bitwise deterministic for any thread count.
void to_quadrature(std::span<const complexd> coeffs, int n_modes, int nx,
                   std::span<const double> table, int ny_quad,
                   std::span<complexd> phys);

/// Physical values on quadrature nodes -> sector coefficients. Exact for
/// fields band-limited to 2*M - n_modes - 1 cosine modes.
void from_quadrature(std::span<const complexd> phys, int n_modes, int nx,
                     std::span<const double> table, int ny_quad,
                     std::span<complexd> coeffs);

/// Sector coefficients of |Psi|^2 Psi, dealiased through the quadrature
/// grid (fused to_quadrature -> pointwise cubic -> from_quadrature).
void cubic_term(std::span<const complexd> coeffs, int n_modes, int nx,
                std::span<const double> table, int ny_quad,
                std::span<complexd> out);

/// Pointwise evaluation on an endpoint y grid y_r = r d / (ny - 1).
void to_physical(std::span<const complexd> coeffs, int n_modes, int nx,
                 int ny, std::span<complexd> phys);

/// Serial reference implementations (plain triple loops, no OpenMP). Kept
/// as the ground truth the parallel kernels are tested and benchmarked
/// against.
namespace ref {
void to_quadrature(std::span<const complexd> coeffs, int n_modes, int nx,
                   std::span<const double> table, int ny_quad,
                   std::span<complexd> phys);
void from_quadrature(std::span<const complexd> phys, int n_modes, int nx,
                     std::span<const double> table, int ny_quad,
                     std::span<complexd> coeffs);
void cubic_term(std::span<const complexd> coeffs, int n_modes, int nx,
                std::span<const double> table, int ny_quad,
                std::span<complexd> out);
void to_physical(std::span<const complexd> coeffs, int n_modes, int nx,
                 int ny, std::span<complexd> phys);
}  // namespace ref

}  // namespace gpstrip::kernels
