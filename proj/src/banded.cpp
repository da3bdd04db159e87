#include "gpstrip/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gpstrip {

rvector SymBanded::apply(std::span<const double> x) const {
    rvector y(n, 0.0);
    for (int j = 0; j < n; ++j) {
        y[j] += get(j, j) * x[j];
        for (int i = j + 1; i <= std::min(n - 1, j + kd); ++i) {
            const double v = ab[(size_t)(kd + 1) * j + (i - j)];
            y[i] += v * x[j];
            y[j] += v * x[i];
        }
    }
    return y;
}

SpectrumResult spectrum_lowest(const SymBanded& a, int n_eigs, double tol_zero,
                               bool want_vectors) {
    if (n_eigs < 1) throw std::invalid_argument("spectrum: n_eigs must be >= 1");
    n_eigs = std::min(n_eigs, a.n);
    rvector ab = a.ab;  // dsbevx destroys the band
    const int ldq = want_vectors ? a.n : 1;  // Q only needed for vectors
    rvector w(a.n), z((size_t)a.n * n_eigs), q((size_t)ldq * a.n);
    std::vector<lapack_int> ifail(a.n);
    lapack_int m = 0;
    lapack_int info = LAPACKE_dsbevx(
        LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'I', 'L', a.n, a.kd,
        ab.data(), a.kd + 1, q.data(), ldq, 0.0, 0.0, 1, n_eigs, 2.0 * LAPACKE_dlamch('S'),
        &m, w.data(), z.data(), a.n, ifail.data());
    if (info != 0) {
        std::ostringstream os;
        os << "dsbevx failed, info=" << info;
        if (info > 0) os << " (" << info << " eigenvectors failed to converge)";
        throw std::runtime_error(os.str());
    }

    SpectrumResult res;
    res.eigenvalues.assign(w.begin(), w.begin() + m);
    res.n_negative = 0;
    for (double ev : res.eigenvalues)
        if (ev < -tol_zero) ++res.n_negative;
    if (want_vectors) {
        res.eigenvectors.resize(m);
        res.residuals.resize(m);
        for (int v = 0; v < m; ++v) {
            rvector vec(z.begin() + (size_t)v * a.n, z.begin() + (size_t)(v + 1) * a.n);
            for (double c : vec) {
                if (std::abs(c) > 1e-8) {
                    if (c < 0)
                        for (double& e : vec) e = -e;
                    break;
                }
            }
            rvector av = a.apply(vec);
            double rs = 0.0;
            for (int i = 0; i < a.n; ++i) {
                const double r = av[i] - res.eigenvalues[v] * vec[i];
                rs += r * r;
            }
            res.residuals[v] = std::sqrt(rs);
            res.eigenvectors[v] = std::move(vec);
        }
    }
    return res;
}

int count_below(const SymBanded& a, double bound) {
    rvector ab = a.ab;
    rvector w(a.n), q(1), z(a.n);
    std::vector<lapack_int> ifail(a.n);
    lapack_int m = 0;
    lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'V', 'L', a.n, a.kd,
                                     ab.data(), a.kd + 1, q.data(), 1, -1e30, bound,
                                     0, 0, 2.0 * LAPACKE_dlamch('S'), &m, w.data(),
                                     z.data(), a.n, ifail.data());
    if (info != 0) throw std::runtime_error("dsbevx (count) failed");
    return (int)m;
}

int tridiag_count_below(std::span<const double> diag, std::span<const double> off,
                        double bound) {
    // Sturm sequence: the number of negative values of d_i in the LDL^T
    // recursion of (T - bound I) equals the eigenvalue count below bound.
    const int n = (int)diag.size();
    int count = 0;
    double d = diag[0] - bound;
    if (d < 0) ++count;
    const double tiny = 1e-300;
    for (int i = 1; i < n; ++i) {
        if (std::abs(d) < tiny) d = (d < 0 ? -tiny : tiny);
        d = (diag[i] - bound) - off[i - 1] * off[i - 1] / d;
        if (d < 0) ++count;
    }
    return count;
}

rvector solve(GeneralBanded a, rvector b) {
    std::vector<lapack_int> ipiv(a.n);
    lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, a.n, a.kl, a.ku, 1,
                                    a.ab.data(), 2 * a.kl + a.ku + 1, ipiv.data(),
                                    b.data(), a.n);
    if (info != 0) {
        std::ostringstream os;
        os << "dgbsv failed, info=" << info;
        if (info > 0) os << " (singular pivot at index " << info - 1 << ")";
        throw std::runtime_error(os.str());
    }
    return b;
}

rvector solve_tridiag(rvector diag, rvector lower, rvector upper, rvector b) {
    const lapack_int n = (lapack_int)diag.size();
    lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, lower.data(),
                                    diag.data(), upper.data(), b.data(), n);
    if (info != 0) throw std::runtime_error("dgtsv failed");
    return b;
}

std::pair<rvector, double> solve_bordered_dense(const GeneralBanded& ab,
                                                std::span<const double> border_col,
                                                std::span<const double> border_row,
                                                std::span<const double> rhs,
                                                double border_rhs) {
    const int n = ab.n;
    const int m = n + 1;
    rvector a((size_t)m * m, 0.0);  // column-major dense
    const int ld = 2 * ab.kl + ab.ku + 1;
    for (int j = 0; j < n; ++j)
        for (int i = std::max(0, j - ab.ku); i <= std::min(n - 1, j + ab.kl); ++i)
            a[(size_t)j * m + i] = ab.ab[(size_t)ld * j + (ab.kl + ab.ku + i - j)];
    for (int i = 0; i < n; ++i) {
        a[(size_t)n * m + i] = border_col[i];  // last column
        a[(size_t)i * m + n] = border_row[i];  // last row
    }
    rvector b(m, 0.0);
    std::copy(rhs.begin(), rhs.end(), b.begin());
    b[n] = border_rhs;
    std::vector<lapack_int> ipiv(m);
    lapack_int info =
        LAPACKE_dgesv(LAPACK_COL_MAJOR, m, 1, a.data(), m, ipiv.data(), b.data(), m);
    if (info != 0) throw std::runtime_error("dgesv (bordered) failed");
    rvector x(b.begin(), b.begin() + n);
    return {std::move(x), b[n]};
}

}  // namespace gpstrip
