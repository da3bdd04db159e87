#include "gpstrip/reduction.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gpstrip/analytic.hpp"
#include "gpstrip/banded.hpp"
#include "gpstrip/kernels.hpp"
#include "gpstrip/operators.hpp"

namespace gpstrip::reduction {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;

rvector chi0_grid(const StripDomain& dom) {
    rvector c(dom.nx);
    for (int i = 0; i < dom.nx; ++i) c[i] = analytic::chi0(dom.x(i));
    return c;
}

// 1-D sector system about psi0: interleaved (Re, Im) on the half grid,
// node m = 0..nh, DOFs 2 per node; Re at node 0 is pinned to zero. Used by
// both the zero-sector Newton and the w solves.
struct SectorSystem {
    GeneralBanded mat;
    int nh;

    SectorSystem(const StripDomain& dom, std::span<const complexd> psi0, double kx2,
                 bool pin_im0)
        : mat(2 * (dom.nh() + 1), 3, 3), nh(dom.nh()) {
        const double h = dom.h();
        const int ic = dom.center();
        const double ih2 = 1.0 / (h * h);
        for (int m = 0; m <= nh; ++m) {
            const int i = ic + m;
            const double u = psi0[i].real(), v = psi0[i].imag();
            const double base = 2.0 * ih2 + kx2 - (1.0 - (u * u + v * v));
            const int r = 2 * m, s = 2 * m + 1;
            mat.set(r, r, base + 2.0 * u * u);
            mat.set(s, s, base + 2.0 * v * v);
            mat.set(r, s, 2.0 * u * v);
            mat.set(s, r, 2.0 * u * v);
            if (m > 0) {
                mat.set(r, r - 2, -ih2);
                mat.set(s, s - 2, -ih2);
            }
            if (m < nh) {
                mat.set(r, r + 2, -ih2);
                mat.set(s, s + 2, -ih2);
            } else {  // Neumann ghost folds back
                mat.add(r, r - 2, -ih2);
                mat.add(s, s - 2, -ih2);
            }
        }
        // even fold at x = 0 for the Im component: ghost v_{-1} = v_{+1}
        mat.add(1, 3, -ih2);
        // pin Re(0) = 0
        mat.set(0, 0, 1.0);
        mat.set(0, 1, 0.0);
        mat.set(0, 2, 0.0);
        mat.set(0, 3, 0.0);
        mat.set(2, 0, 0.0);
        mat.set(1, 0, 0.0);
        mat.set(3, 0, 0.0);
        if (pin_im0) {
            mat.set(1, 1, 1.0);
            mat.set(1, 0, 0.0);
            mat.set(1, 2, 0.0);
            mat.set(1, 3, 0.0);
            mat.set(1, 4, 0.0);
            mat.set(0, 1, 0.0);
            mat.set(2, 1, 0.0);
            mat.set(3, 1, 0.0);
        }
    }
};

// unfold a packed half-grid (Re odd, Im even) vector into a full-grid field
void unfold(const StripDomain& dom, std::span<const double> packed, cvector& out) {
    const int ic = dom.center();
    const int nh = dom.nh();
    out.assign(dom.nx, complexd{0.0, 0.0});
    for (int m = 0; m <= nh; ++m) {
        const double re = packed[2 * m], im = packed[2 * m + 1];
        out[ic + m] = complexd{re, im};
        if (m > 0) out[ic - m] = complexd{-re, im};
    }
}
}  // namespace

cvector f0(const StripDomain& dom, std::span<const complexd> psi0,
           const SectorField& w_full) {
    const int M = dom.ny_quad;
    cvector phys = to_quadrature_grid(w_full);
    cvector out(dom.nx);
    for (int i = 0; i < dom.nx; ++i) {
        complexd acc{0.0, 0.0};
        const complexd p0 = psi0[i];
        for (int q = 0; q < M; ++q) {
            const complexd w = phys[(size_t)i * M + q];
            const double ip = p0.real() * w.real() + p0.imag() * w.imag();
            acc += 2.0 * ip * w + std::norm(w) * (p0 + w);
        }
        out[i] = acc / (double)M;
    }
    return out;
}

SectorField g_nl(const StripDomain& dom, std::span<const complexd> psi0,
                 const SectorField& w_full) {
    const int M = dom.ny_quad;
    cvector phys = to_quadrature_grid(w_full);
    for (int i = 0; i < dom.nx; ++i) {
        const complexd p0 = psi0[i];
        for (int q = 0; q < M; ++q) {
            complexd& w = phys[(size_t)i * M + q];
            const double ip = p0.real() * w.real() + p0.imag() * w.imag();
            w = -(2.0 * ip * w + std::norm(w) * (p0 + w));
        }
    }
    SectorField g = from_physical(phys, dom);
    // zero sector vanishes up to quadrature roundoff; clear it exactly
    auto s0 = g.sector(0);
    for (auto& c : s0) c = complexd{0.0, 0.0};
    return g;
}

cvector solve_zero_sector(const StripDomain& dom, std::span<const complexd> f0_rhs,
                          double tol, int max_iter, const cvector* init) {
    const double h = dom.h();
    const int ic = dom.center();
    const int nh = dom.nh();
    cvector psi(dom.nx);
    if (init) {
        psi = *init;
    } else {
        for (int i = 0; i < dom.nx; ++i) psi[i] = analytic::soliton(dom.x(i));
    }
    // Neumann-on-perturbation ghost at +L carries the soliton tail slope
    const double bc = analytic::soliton(dom.half_length + h) -
                      analytic::soliton(dom.half_length - h);

    rvector resid(2 * (nh + 1));
    std::vector<double> history;
    // the residual cannot drop below the cancellation noise of the second
    // difference, about eps * |psi| / h^2
    const double floor_est = 8.0 * 2.2e-16 / (h * h);
    for (int it = 0; it <= max_iter; ++it) {
        // residual of -psi'' - psi (1 - |psi|^2) + f0 on the half grid;
        // the two x = 0 rows are replaced by the oddness pin and the
        // psi(0) = 0 constraint and do not enter the convergence measure
        double rmax = 0.0;
        for (int m = 0; m <= nh; ++m) {
            const int i = ic + m;
            const complexd pm = psi[i - 1];
            const complexd pp = (m == nh) ? psi[i - 1] + bc : psi[i + 1];
            const complexd lap = (pm - 2.0 * psi[i] + pp) / (h * h);
            const complexd r = -lap - psi[i] * (1.0 - std::norm(psi[i])) + f0_rhs[i];
            resid[2 * m] = r.real();
            resid[2 * m + 1] = r.imag();
            if (m > 0) rmax = std::max({rmax, std::abs(r.real()), std::abs(r.imag())});
        }
        resid[0] = 0.0;                       // Re(0) pinned (odd)
        resid[1] = psi[ic].imag();            // Im(0) = 0 constraint row
        rmax = std::max(rmax, std::abs(resid[1]));
        history.push_back(rmax);
        if (rmax < tol) return psi;
        if (it >= 2 && rmax < std::max(floor_est, 1e-12) &&
            rmax > 0.25 * history[it - 1])
            return psi;  // stagnated at the evaluation floor
        if (it == max_iter) break;

        SectorSystem sys(dom, psi, 0.0, /*pin_im0=*/true);
        rvector rhs(resid);
        for (auto& r : rhs) r = -r;
        rhs[1] = -psi[ic].imag();
        rvector delta = solve(sys.mat, std::move(rhs));
        cvector dpsi;
        unfold(dom, delta, dpsi);
        for (int i = 0; i < dom.nx; ++i) psi[i] += dpsi[i];
    }
    std::ostringstream os;
    os << "solve_zero_sector: no convergence after " << max_iter
       << " iterations; residual history:";
    for (double r : history) os << " " << r;
    throw std::runtime_error(os.str());
}

SectorField solve_projected_w(const StripDomain& dom, std::span<const complexd> psi0,
                              const SectorField& rhs, int k, double width) {
    const int ic = dom.center();
    const int nh = dom.nh();
    const rvector chi = chi0_grid(dom);
    SectorField w(dom);

    for (int j = 1; j <= dom.n_modes; ++j) {
        const double kx2 = std::pow(std::numbers::pi * j / width, 2);
        auto rj = rhs.sector(j);
        rvector b(2 * (nh + 1));
        for (int m = 0; m <= nh; ++m) {
            b[2 * m] = rj[ic + m].real();
            b[2 * m + 1] = rj[ic + m].imag();
        }
        b[0] = 0.0;  // pinned odd Re at x=0
        SectorSystem sys(dom, psi0, kx2, /*pin_im0=*/false);
        rvector sol;
        if (j != k) {
            try {
                sol = solve(sys.mat, std::move(b));
            } catch (const std::runtime_error& e) {
                std::ostringstream os;
                os << "solve_projected_w: singular solve in sector " << j << " at width "
                   << width << " (" << e.what() << ")";
                throw std::runtime_error(os.str());
            }
        } else {
            // bordered system: T_k w + mu * i chi0 = rhs, <Im w, chi0> = 0.
            // border column hits Im slots; border row integrates Im slots
            // with the folded trapezoid weights.
            const double h = dom.h();
            rvector bcol(2 * (nh + 1), 0.0), brow(2 * (nh + 1), 0.0);
            for (int m = 0; m <= nh; ++m) {
                bcol[2 * m + 1] = chi[ic + m];
                const double wx = (m == 0 || m == nh) ? h : 2.0 * h;
                brow[2 * m + 1] = wx * chi[ic + m];
            }
            auto [x, mu] = solve_bordered_dense(sys.mat, bcol, brow, b);
            (void)mu;
            sol = std::move(x);
        }
        cvector wj;
        unfold(dom, sol, wj);
        auto out = w.sector(j);
        for (int i = 0; i < dom.nx; ++i) out[i] = wj[i];
    }
    return w;
}

rvector discrete_soliton(const StripDomain& dom) {
    cvector zero(dom.nx, complexd{0.0, 0.0});
    cvector s = solve_zero_sector(dom, zero, 1e-12, 25);
    rvector out(dom.nx);
    for (int i = 0; i < dom.nx; ++i) out[i] = s[i].real();
    return out;
}

double critical_width_discrete(const StripDomain& dom, int k) {
    const rvector s0h = discrete_soliton(dom);
    const double dk = analytic::critical_width(k);
    double lo = dk - 0.3, hi = dk + 0.3;
    auto mu = [&](double d) {
        return tk_lowest_eigenvalue(dom.with_width(d), s0h, k);
    };
    double flo = mu(lo);
    if (flo * mu(hi) > 0)
        throw std::runtime_error("critical_width_discrete: no sign change in bracket");
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mu(mid) * flo > 0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12) break;
    }
    return 0.5 * (lo + hi);
}

ReducedState fixed_point(const StripDomain& dom0, int k, double width, double lambda,
                         double tol, int max_iter) {
    if (k < 1 || k > dom0.n_modes)
        throw std::invalid_argument("fixed_point: k out of range");
    const StripDomain dom = dom0.with_width(width);
    const rvector chi = chi0_grid(dom);

    ReducedState st;
    st.k = k;
    st.width = width;
    st.lambda = lambda;
    st.psi0.assign(dom.nx, complexd{0.0, 0.0});
    for (int i = 0; i < dom.nx; ++i) st.psi0[i] = analytic::soliton(dom.x(i));
    st.w = SectorField(dom);

    double prev_delta = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        SectorField z = st.w;
        {
            auto zk = z.sector(k);
            for (int i = 0; i < dom.nx; ++i) zk[i] += complexd{0.0, lambda * chi[i]};
        }
        cvector f = f0(dom, st.psi0, z);
        cvector psi_new = solve_zero_sector(dom, f, std::min(tol, 1e-12), 25, &st.psi0);
        SectorField g = g_nl(dom, psi_new, z);
        // rhs = g - T(lambda chi_k): only sector k is affected
        cvector lam_chi(dom.nx);
        for (int i = 0; i < dom.nx; ++i) lam_chi[i] = complexd{0.0, lambda * chi[i]};
        cvector tk = apply_Tk(psi_new, k, width, dom, lam_chi);
        SectorField rhs = g;
        {
            auto rk = rhs.sector(k);
            for (int i = 0; i < dom.nx; ++i) rk[i] -= tk[i];
        }
        SectorField w_new = solve_projected_w(dom, psi_new, rhs, k, width);

        double delta = 0.0;
        for (int i = 0; i < dom.nx; ++i)
            delta = std::max(delta, std::abs(psi_new[i] - st.psi0[i]));
        SectorField dw = w_new - st.w;
        delta += dw.max_abs();
        st.history.push_back(delta);
        st.psi0 = std::move(psi_new);
        st.w = std::move(w_new);
        st.fp_residual = delta;
        if (delta < tol) return st;
        if (prev_delta > 0.0 && delta > 4.0 * prev_delta && delta > 1e-3) {
            std::ostringstream os;
            os << "fixed_point: iterates diverging at (k=" << k << ", d=" << width
               << ", lambda=" << lambda << "); successive distances:";
            for (double v : st.history) os << " " << v;
            throw std::runtime_error(os.str());
        }
        prev_delta = delta;
    }
    std::ostringstream os;
    os << "fixed_point: no contraction to " << tol << " within " << max_iter
       << " iterations at (k=" << k << ", d=" << width << ", lambda=" << lambda << ")";
    throw std::runtime_error(os.str());
}

double bifurcation_J(const ReducedState& st) {
    const StripDomain dom = st.w.domain();
    const rvector chi = chi0_grid(dom);
    SectorField z = st.w;
    {
        auto zk = z.sector(st.k);
        for (int i = 0; i < dom.nx; ++i) zk[i] += complexd{0.0, st.lambda * chi[i]};
    }
    SectorField g = g_nl(dom, st.psi0, z);
    cvector tz = apply_Tk(st.psi0, st.k, st.width, dom, z.sector(st.k));
    auto gk = g.sector(st.k);
    rvector integrand(dom.nx);
    for (int i = 0; i < dom.nx; ++i)
        integrand[i] = (tz[i].imag() - gk[i].imag()) * chi[i];
    return st.width * simpson(integrand, dom.h());
}

double bifurcation_J(const StripDomain& dom, int k, double width, double lambda,
                     double tol) {
    if (lambda == 0.0) return 0.0;
    ReducedState st = fixed_point(dom, k, width, lambda, tol);
    return bifurcation_J(st);
}

DerivativeProbe probe_J_derivatives(const StripDomain& dom, int k, FdSteps steps) {
    DerivativeProbe p;
    p.d_k = critical_width_discrete(dom, k);
    const double dk = p.d_k;
    auto J = [&](double d, double l) { return bifurcation_J(dom, k, d, l, steps.tol); };

    p.j_at_zero = J(dk, 0.0);
    // J(d, 0) = 0 identically: the d-derivatives at lambda = 0 vanish exactly
    p.d_d = (J(dk + steps.width_step, 0.0) - J(dk - steps.width_step, 0.0)) /
            (2.0 * steps.width_step);
    p.d_dd = (J(dk + steps.width_step, 0.0) - 2.0 * p.j_at_zero +
              J(dk - steps.width_step, 0.0)) /
             (steps.width_step * steps.width_step);

    const double hs = steps.lambda_small;
    const double j1 = J(dk, hs), j1m = J(dk, -hs);
    p.d_lambda = (j1 - j1m) / (2.0 * hs);
    {
        const double j2 = J(dk, hs / 2), j2m = J(dk, -hs / 2);
        p.d_lambda_err = std::abs((j2 - j2m) / hs - p.d_lambda);
    }
    p.d_ll = (j1 - 2.0 * p.j_at_zero + j1m) / (hs * hs);

    const double hb = steps.lambda_big;
    auto d3 = [&](double hl) { return (J(dk, 2 * hl) - 2.0 * J(dk, hl)) / (hl * hl * hl); };
    const double a = d3(hb), b = d3(hb / 2);
    p.d_lll = (4.0 * b - a) / 3.0;
    p.d_lll_err = std::abs(b - a) / 3.0;

    const double hd = steps.width_step, hl2 = steps.width_step;
    auto mixed = [&](double hd_, double hl_) {
        return (J(dk + hd_, hl_) - J(dk - hd_, hl_)) / (2.0 * hd_ * hl_);
    };
    p.d_dl = mixed(hd, hl2);
    p.d_dl_err = std::abs(mixed(hd / 2, hl2 / 2) - p.d_dl);
    return p;
}

double lambda_root(const StripDomain& dom, int k, double width, double tol) {
    // J(width, .) ~ a lambda + c lambda^3 with a < 0 < c above onset;
    // bracket the positive root then bisect/secant.
    const double dk = critical_width_discrete(dom, k);
    if (width <= dk) return 0.0;
    double lo = 1e-4;
    double flo = bifurcation_J(dom, k, width, lo, tol);
    if (flo > 0) return 0.0;
    double hi = 0.05, fhi = bifurcation_J(dom, k, width, hi, tol);
    int guard = 0;
    while (fhi < 0 && ++guard < 20) {
        hi *= 1.5;
        fhi = bifurcation_J(dom, k, width, hi, tol);
    }
    if (fhi < 0) throw std::runtime_error("lambda_root: no sign change found");
    // Illinois regula falsi on the bracket
    int side = 0;
    double x = hi;
    for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
        x = hi - fhi * (hi - lo) / (fhi - flo);
        const double fx = bifurcation_J(dom, k, width, x, tol);
        if (std::abs(fx) < 1e-14) return x;
        if (fx < 0) {
            lo = x;
            flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
    }
    return x;
}

SectorField assemble_state_field(const ReducedState& st) {
    const StripDomain dom = st.w.domain();
    SectorField f = st.w;
    auto s0 = f.sector(0);
    for (int i = 0; i < dom.nx; ++i) s0[i] += st.psi0[i];
    auto sk = f.sector(st.k);
    for (int i = 0; i < dom.nx; ++i)
        sk[i] += complexd{0.0, st.lambda * analytic::chi0(dom.x(i))};
    return f;
}

}  // namespace gpstrip::reduction
