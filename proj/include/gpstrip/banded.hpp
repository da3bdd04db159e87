#pragma once

#include <string>
#include <vector>

#include "gpstrip/grid.hpp"

namespace gpstrip {

/// Real symmetric banded matrix, LAPACK lower 'L' column-major storage:
/// entry (i, j) with 0 <= i - j <= kd lives at ab[(kd+1)*j + (i-j)].
struct SymBanded {
    int n = 0;
    int kd = 0;
    rvector ab;

    SymBanded() = default;
    SymBanded(int n_, int kd_) : n(n_), kd(kd_), ab((kd_ + 1) * (size_t)n_, 0.0) {}

    double& at(int i, int j) {  // requires i >= j
        return ab[(size_t)(kd + 1) * j + (i - j)];
    }
    double get(int i, int j) const {
        if (i < j) std::swap(i, j);
        if (i - j > kd) return 0.0;
        return ab[(size_t)(kd + 1) * j + (i - j)];
    }
    void add(int i, int j, double v) {
        if (i < j) std::swap(i, j);
        ab[(size_t)(kd + 1) * j + (i - j)] += v;
    }
    rvector apply(std::span<const double> x) const;
};

struct SpectrumResult {
    rvector eigenvalues;                 // ascending
    std::vector<rvector> eigenvectors;   // matching order, may be empty
    int n_negative = 0;                  // eigenvalues < -tol_zero
    rvector residuals;                   // ||A v - lambda v||_2 per pair
};

/// Lowest n_eigs eigenpairs of a symmetric banded matrix (dsbevx).
/// Eigenvectors are 2-normalized with the first component of magnitude
/// > 1e-8 made positive. Throws on LAPACK failure, reporting residuals.
SpectrumResult spectrum_lowest(const SymBanded& a, int n_eigs,
                               double tol_zero = 1e-6,
                               bool want_vectors = true);

/// Number of eigenvalues strictly below `bound` (dsbevx, values only).
int count_below(const SymBanded& a, double bound);

/// Sturm-sequence count for a symmetric tridiagonal matrix; O(n), no
/// workspace. diag has n entries, off has n-1.
int tridiag_count_below(std::span<const double> diag,
                        std::span<const double> off, double bound);

/// General banded solver (dgbsv). kl/ku sub/superdiagonal counts; the matrix
/// is assembled via set/add and factorized in place on solve.
struct GeneralBanded {
    int n = 0, kl = 0, ku = 0;
    std::vector<double> ab;  // ldab = 2*kl + ku + 1, column-major

    GeneralBanded() = default;
    GeneralBanded(int n_, int kl_, int ku_)
        : n(n_), kl(kl_), ku(ku_), ab((size_t)(2 * kl_ + ku_ + 1) * n_, 0.0) {}
    void set(int i, int j, double v) {
        ab[(size_t)(2 * kl + ku + 1) * j + (kl + ku + i - j)] = v;
    }
    void add(int i, int j, double v) {
        ab[(size_t)(2 * kl + ku + 1) * j + (kl + ku + i - j)] += v;
    }
};

/// Solves A x = b, destroying the factorization copy. Throws on singular
/// pivot with the failing index in the message.
rvector solve(GeneralBanded a, rvector b);

/// Dense bordered solve for [A c; r^T 0] [x; mu] = [b; 0]. A is handed over
/// in banded form and expanded; used for the kernel sector where A is
/// near-singular and banded elimination of the bordered system would be
/// unstable. Returns x (size n) and mu.
std::pair<rvector, double> solve_bordered_dense(const GeneralBanded& a,
                                                std::span<const double> border_col,
                                                std::span<const double> border_row,
                                                std::span<const double> rhs,
                                                double border_rhs = 0.0);

/// Tridiagonal solve (dgtsv).
rvector solve_tridiag(rvector diag, rvector lower, rvector upper, rvector b);

}  // namespace gpstrip
