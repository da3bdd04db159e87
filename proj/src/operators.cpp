#include "gpstrip/operators.hpp"

#include <cmath>
#include <numbers>

#include "gpstrip/analytic.hpp"
#include "gpstrip/kernels.hpp"

namespace gpstrip {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;

rvector l0_potential(L0Sign sign, const StripDomain& dom) {
    rvector q(dom.nx);
    for (int i = 0; i < dom.nx; ++i) {
        const double s = analytic::soliton(dom.x(i));
        q[i] = (sign == L0Sign::plus) ? -(1.0 - 3.0 * s * s) : -(1.0 - s * s);
    }
    return q;
}
}  // namespace

LinearOperator1D assemble_L0(L0Sign sign, const StripDomain& dom) {
    const double h = dom.h();
    const rvector q = l0_potential(sign, dom);
    LinearOperator1D op;
    op.kind = (sign == L0Sign::plus) ? OpKind::L0_plus : OpKind::L0_minus;
    op.matrix = SymBanded(dom.nx, 1);
    for (int i = 0; i < dom.nx; ++i) op.matrix.at(i, i) = 2.0 / (h * h) + q[i];
    for (int i = 0; i + 1 < dom.nx; ++i) op.matrix.at(i + 1, i) = -1.0 / (h * h);
    // Neumann ends, half-weight symmetrized
    op.matrix.at(1, 0) = -kSqrt2 / (h * h);
    op.matrix.at(dom.nx - 1, dom.nx - 2) = -kSqrt2 / (h * h);
    return op;
}

LinearOperator1D assemble_Tk(std::span<const complexd> psi0, int k, double width,
                             const StripDomain& dom) {
    const double h = dom.h();
    const double kx2 = std::pow(std::numbers::pi * k / width, 2);
    const int n = 2 * dom.nx;
    LinearOperator1D op;
    op.kind = OpKind::Tk;
    op.sector = k;
    op.width = width;
    op.matrix = SymBanded(n, 3);
    auto& m = op.matrix;
    for (int i = 0; i < dom.nx; ++i) {
        const double u = psi0[i].real(), v = psi0[i].imag();
        const double a = kx2 - (1.0 - (u * u + v * v));
        m.at(2 * i, 2 * i) = 2.0 / (h * h) + a + 2.0 * u * u;
        m.at(2 * i + 1, 2 * i + 1) = 2.0 / (h * h) + a + 2.0 * v * v;
        m.at(2 * i + 1, 2 * i) = 2.0 * u * v;
        if (i + 1 < dom.nx) {
            double val = -1.0 / (h * h);
            if (i == 0 || i + 1 == dom.nx - 1) val = -kSqrt2 / (h * h);
            m.at(2 * (i + 1), 2 * i) = val;
            m.at(2 * (i + 1) + 1, 2 * i + 1) = val;
        }
    }
    return op;
}

cvector apply_L0(L0Sign sign, const StripDomain& dom, std::span<const complexd> f) {
    const double h = dom.h();
    const rvector q = l0_potential(sign, dom);
    cvector out(dom.nx);
    for (int i = 0; i < dom.nx; ++i) {
        const complexd fm = (i == 0) ? f[1] : f[i - 1];
        const complexd fp = (i == dom.nx - 1) ? f[dom.nx - 2] : f[i + 1];
        out[i] = -(fm - 2.0 * f[i] + fp) / (h * h) + q[i] * f[i];
    }
    return out;
}

cvector apply_Tk(std::span<const complexd> psi0, int k, double width,
                 const StripDomain& dom, std::span<const complexd> f) {
    const double h = dom.h();
    const double kx2 = std::pow(std::numbers::pi * k / width, 2);
    cvector out(dom.nx);
    for (int i = 0; i < dom.nx; ++i) {
        const complexd fm = (i == 0) ? f[1] : f[i - 1];
        const complexd fp = (i == dom.nx - 1) ? f[dom.nx - 2] : f[i + 1];
        const double ip = psi0[i].real() * f[i].real() + psi0[i].imag() * f[i].imag();
        out[i] = -(fm - 2.0 * f[i] + fp) / (h * h) + kx2 * f[i] -
                 f[i] * (1.0 - std::norm(psi0[i])) + 2.0 * ip * psi0[i];
    }
    return out;
}

StripOperator assemble_strip_linearization(const SectorField& f,
                                           bool reduce_symmetry) {
    const StripDomain& dom = f.domain();
    const int K = dom.n_modes;
    const int M = dom.ny_quad;
    const int slots = 2 * (K + 1);
    const double h = dom.h();
    const int nh = dom.nh();
    const int nodes = reduce_symmetry ? nh + 1 : dom.nx;
    const int n = nodes * slots;

    StripOperator op;
    op.dom = dom;
    op.reduced = reduce_symmetry;
    op.matrix = SymBanded(n, slots);
    auto& mat = op.matrix;

    // per-DOF similarity weights: x fold/trapezoid times the sector weight
    op.sqrt_w.assign(n, 1.0);
    for (int m = 0; m < nodes; ++m) {
        double wx;
        if (reduce_symmetry)
            wx = (m == 0 || m == nh) ? 1.0 : 2.0;
        else
            wx = (m == 0 || m == dom.nx - 1) ? 0.5 : 1.0;
        for (int j = 0; j <= K; ++j) {
            const double wy = (j == 0) ? 2.0 : 1.0;
            const double sw = std::sqrt(wx * wy);
            op.sqrt_w[op.idx(m, j, 0)] = sw;
            op.sqrt_w[op.idx(m, j, 1)] = sw;
        }
    }

    // physical-grid potential blocks
    cvector phys = to_quadrature_grid(f);
    const rvector table = kernels::cosine_table(K, M);

    const int i0 = reduce_symmetry ? dom.center() : 0;  // node m -> grid index i0 + m
    for (int m = 0; m < nodes; ++m) {
        const int i = i0 + m;
        // S[j,j'] entries of the quadrature-projected 2x2 potential blocks
        for (int j = 0; j <= K; ++j) {
            for (int jp = j; jp <= K; ++jp) {
                double s11 = 0.0, s12 = 0.0, s22 = 0.0;
                for (int q = 0; q < M; ++q) {
                    const complexd P = phys[(size_t)i * M + q];
                    const double u = P.real(), v = P.imag();
                    const double cc =
                        table[(size_t)j * M + q] * table[(size_t)jp * M + q];
                    const double common = -(1.0 - (u * u + v * v));
                    s11 += cc * (common + 2.0 * u * u);
                    s12 += cc * (2.0 * u * v);
                    s22 += cc * (common + 2.0 * v * v);
                }
                // symmetrized sector factor sqrt(fac_j fac_jp)
                const double fj = (j == 0 ? 1.0 : 2.0);
                const double fjp = (jp == 0 ? 1.0 : 2.0);
                const double fac = std::sqrt(fj * fjp) / M;
                const int rj = op.idx(m, j, 0), ij = op.idx(m, j, 1);
                const int rp = op.idx(m, jp, 0), ip = op.idx(m, jp, 1);
                mat.add(rp, rj, fac * s11);
                mat.add(ip, ij, fac * s22);
                if (jp == j) {
                    mat.add(ij, rj, fac * s12);
                } else {
                    mat.add(ip, rj, fac * s12);
                    mat.add(rp, ij, fac * s12);
                }
            }
        }
        // -d^2/dx^2 + (pi j / d)^2, per sector and component
        for (int j = 0; j <= K; ++j) {
            const double kx2 = std::pow(std::numbers::pi * j / dom.width, 2);
            for (int c = 0; c < 2; ++c) {
                const int r = op.idx(m, j, c);
                mat.add(r, r, 2.0 / (h * h) + kx2);
            }
        }
    }
    // x couplings
    for (int m = 0; m + 1 < nodes; ++m) {
        double val = -1.0 / (h * h);
        if (reduce_symmetry) {
            if (m == 0) val = -kSqrt2 / (h * h);               // even fold at x=0
            if (m + 1 == nodes - 1) val = -kSqrt2 / (h * h);   // Neumann end
        } else {
            if (m == 0 || m + 1 == nodes - 1) val = -kSqrt2 / (h * h);
        }
        for (int j = 0; j <= K; ++j)
            for (int c = 0; c < 2; ++c)
                mat.add(op.idx(m + 1, j, c), op.idx(m, j, c), val);
    }

    if (reduce_symmetry) {
        // pin the odd components at x = 0: zero row/column, unit diagonal
        for (int j = 0; j <= K; ++j) {
            const int r = op.idx(0, j, 0);
            for (int c = std::max(0, r - slots); c <= r; ++c)
                if (r - c <= mat.kd) mat.at(r, c) = 0.0;
            for (int i2 = r; i2 <= std::min(n - 1, r + slots); ++i2)
                if (i2 - r <= mat.kd) mat.at(i2, r) = 0.0;
            mat.at(r, r) = 1.0;
        }
        // fold-at-zero cross fix: the even rows at node 0 coupling through
        // x=0 to odd DOFs does not occur (stencil is component-diagonal)
    }
    return op;
}

SpectrumResult spectrum(const LinearOperator1D& op, int n_eigs, double tol_zero,
                        bool want_vectors) {
    return spectrum_lowest(op.matrix, n_eigs, tol_zero, want_vectors);
}

SpectrumResult spectrum(const StripOperator& op, int n_eigs, double tol_zero,
                        bool want_vectors) {
    return spectrum_lowest(op.matrix, n_eigs, tol_zero, want_vectors);
}

namespace {
// tridiagonal halves of the sector blocks about a real y-independent profile
void sector_halves(const StripDomain& dom, std::span<const double> profile, int j,
                   rvector& diag_even, rvector& off_even, rvector& diag_odd,
                   rvector& off_odd) {
    const double h = dom.h();
    const int nh = dom.nh();
    const int ic = dom.center();
    const double kx2 = std::pow(std::numbers::pi * j / dom.width, 2);
    diag_even.resize(nh + 1);
    off_even.assign(nh, -1.0 / (h * h));
    diag_odd.resize(nh);
    off_odd.assign(nh - 1, -1.0 / (h * h));
    for (int m = 0; m <= nh; ++m) {
        const double s2 = profile[ic + m] * profile[ic + m];
        diag_even[m] = 2.0 / (h * h) + kx2 - (1.0 - s2);          // L0^- half
        if (m >= 1)
            diag_odd[m - 1] = 2.0 / (h * h) + kx2 - (1.0 - 3.0 * s2);  // L0^+ half
    }
    off_even[0] = -kSqrt2 / (h * h);
    off_even[nh - 1] = -kSqrt2 / (h * h);
    off_odd[nh - 2] = -kSqrt2 / (h * h);
}
}  // namespace

int morse_index_about_profile(const StripDomain& dom,
                              std::span<const double> profile, double tol_zero) {
    int count = 0;
    rvector de, oe, dd, od;
    for (int j = 0; j <= dom.n_modes; ++j) {
        sector_halves(dom, profile, j, de, oe, dd, od);
        count += tridiag_count_below(de, oe, -tol_zero);
        count += tridiag_count_below(dd, od, -tol_zero);
    }
    return count;
}

int morse_index_about_soliton(const StripDomain& dom, double tol_zero) {
    rvector s0(dom.nx);
    for (int i = 0; i < dom.nx; ++i) s0[i] = analytic::soliton(dom.x(i));
    return morse_index_about_profile(dom, s0, tol_zero);
}

double tk_lowest_eigenvalue(const StripDomain& dom, std::span<const double> profile,
                            int k) {
    rvector de, oe, dd, od;
    sector_halves(dom, profile, k, de, oe, dd, od);
    SymBanded t((int)de.size(), 1);
    for (int i = 0; i < (int)de.size(); ++i) t.at(i, i) = de[i];
    for (int i = 0; i + 1 < (int)de.size(); ++i) t.at(i + 1, i) = oe[i];
    return spectrum_lowest(t, 1, 1e-6, false).eigenvalues[0];
}

}  // namespace gpstrip
