#include "gpstrip/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gpstrip/banded.hpp"
#include "gpstrip/kernels.hpp"
#include "gpstrip/operators.hpp"
#include "gpstrip/reduction.hpp"

namespace gpstrip::continuation {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;

// residual/solution packing between full-grid sector fields and the reduced
// DOF vector of StripOperator (node-major, Re odd / Im even halves)
rvector pack_reduced(const StripOperator& op, const SectorField& f) {
    const StripDomain& dom = op.dom;
    const int ic = dom.center();
    rvector u(op.matrix.n, 0.0);
    for (int m = 0; m <= dom.nh(); ++m)
        for (int j = 0; j <= dom.n_modes; ++j) {
            const complexd v = f.at(j, ic + m);
            u[op.idx(m, j, 0)] = v.real();
            u[op.idx(m, j, 1)] = v.imag();
        }
    for (int j = 0; j <= dom.n_modes; ++j) u[op.idx(0, j, 0)] = 0.0;
    return u;
}

void unpack_reduced(const StripOperator& op, std::span<const double> u,
                    SectorField& f) {
    const StripDomain& dom = op.dom;
    const int ic = dom.center();
    for (int m = 0; m <= dom.nh(); ++m)
        for (int j = 0; j <= dom.n_modes; ++j) {
            double re = u[op.idx(m, j, 0)];
            const double im = u[op.idx(m, j, 1)];
            if (m == 0) re = 0.0;
            f.at(j, ic + m) = complexd{re, im};
            if (m > 0) f.at(j, ic - m) = complexd{-re, im};
        }
}

// banded LU solve of the symmetrized reduced system: L delta = r
rvector solve_reduced(const StripOperator& op, rvector rhs) {
    const SymBanded& a = op.matrix;
    GeneralBanded gb(a.n, a.kd, a.kd);
    for (int j = 0; j < a.n; ++j) {
        gb.set(j, j, a.get(j, j));
        for (int i = j + 1; i <= std::min(a.n - 1, j + a.kd); ++i) {
            const double v = a.get(i, j);
            if (v != 0.0) {
                gb.set(i, j, v);
                gb.set(j, i, v);
            }
        }
    }
    return solve(std::move(gb), std::move(rhs));
}
}  // namespace

SectorField gp_residual(const SectorField& f) {
    const StripDomain& dom = f.domain();
    const double h = dom.h();
    const int nx = dom.nx;
    SectorField cubic(dom);
    {
        const rvector table = kernels::cosine_table(dom.n_modes, dom.ny_quad);
        kernels::cubic_term(f.coeffs(), dom.n_modes, nx, table, dom.ny_quad,
                            cubic.coeffs());
    }
    SectorField r(dom);
    const double bc = analytic::soliton(dom.half_length + h) -
                      analytic::soliton(dom.half_length - h);
    for (int j = 0; j <= dom.n_modes; ++j) {
        const double kx2 = std::pow(std::numbers::pi * j / dom.width, 2);
        auto fj = f.sector(j);
        auto rj = r.sector(j);
        auto cj = cubic.sector(j);
        for (int i = 0; i < nx; ++i) {
            complexd fm = (i == 0) ? fj[1] : fj[i - 1];
            complexd fp = (i == nx - 1) ? fj[nx - 2] : fj[i + 1];
            if (j == 0) {  // Neumann on the perturbation: soliton tail slope
                if (i == 0) fm -= bc;
                if (i == nx - 1) fp += bc;
            }
            const complexd lap = (fm - 2.0 * fj[i] + fp) / (h * h);
            rj[i] = lap - kx2 * fj[i] + fj[i] - cj[i];
        }
    }
    return r;
}

double residual_norm(const SectorField& r) {
    const StripDomain& dom = r.domain();
    const double area = 2.0 * dom.width * 2.0 * dom.half_length;
    return parseval_l2(r) / std::sqrt(area);
}

NewtonResult newton_solve(const SectorField& initial, double tol, int max_iter) {
    NewtonResult res;
    res.field = enforce_symmetry(initial);
    for (int it = 0; it <= max_iter; ++it) {
        SectorField r = gp_residual(res.field);
        res.residual = residual_norm(r);
        res.history.push_back(res.residual);
        res.iterations = it;
        if (res.residual < tol) return res;
        if (it == max_iter) break;
        StripOperator op = assemble_strip_linearization(res.field, true);
        rvector rhs = pack_reduced(op, r);
        for (int i = 0; i < op.matrix.n; ++i) rhs[i] *= op.sqrt_w[i];
        rvector delta;
        try {
            delta = solve_reduced(op, std::move(rhs));
        } catch (const std::runtime_error& e) {
            std::ostringstream os;
            os << "newton_solve: singular Jacobian at width " << res.field.domain().width
               << " (" << e.what() << "); an amplitude constraint or arclength step is needed";
            throw std::runtime_error(os.str());
        }
        for (int i = 0; i < op.matrix.n; ++i) delta[i] /= op.sqrt_w[i];
        SectorField df(res.field.domain());
        unpack_reduced(op, delta, df);
        res.field += df;
        res.field = enforce_symmetry(res.field);
    }
    std::ostringstream os;
    os << "newton_solve: no convergence to " << tol << " in " << max_iter
       << " iterations; residual history:";
    for (double v : res.history) os << " " << v;
    throw std::runtime_error(os.str());
}

NewtonResult newton_solve_fixed_amplitude(const SectorField& initial, int k,
                                          double amplitude_target, double tol,
                                          int max_iter) {
    NewtonResult res;
    res.field = enforce_symmetry(initial);
    res.used_amplitude_constraint = true;
    StripDomain dom = res.field.domain();
    double width = dom.width;

    for (int it = 0; it <= max_iter; ++it) {
        SectorField r = gp_residual(res.field);
        const double amp_defect = amplitude(res.field, k) - amplitude_target;
        res.residual = residual_norm(r) + std::abs(amp_defect);
        res.history.push_back(res.residual);
        res.iterations = it;
        if (res.residual < tol) return res;
        if (it == max_iter) break;

        // bordered Newton: [L  -dR/dd; a^T 0][delta; delta_d] = [r; -defect]
        // with dR/dd = 2 pi^2 j^2 / d^3 psi_j and a = amplitude gradient.
        StripOperator op = assemble_strip_linearization(res.field, true);
        const int n = op.matrix.n;
        rvector rhs(n), bcol(n, 0.0), brow(n, 0.0);
        {
            rvector rr = pack_reduced(op, r);
            for (int i = 0; i < n; ++i) rhs[i] = rr[i] * op.sqrt_w[i];
        }
        const int ic = dom.center();
        for (int m = 0; m <= dom.nh(); ++m)
            for (int j = 1; j <= dom.n_modes; ++j) {
                const double dd =
                    -2.0 * std::pow(std::numbers::pi * j, 2) / std::pow(width, 3);
                const complexd v = res.field.at(j, ic + m);
                bcol[op.idx(m, j, 0)] = dd * v.real() * op.sqrt_w[op.idx(m, j, 0)];
                bcol[op.idx(m, j, 1)] = dd * v.imag() * op.sqrt_w[op.idx(m, j, 1)];
            }
        {
            rvector den(dom.nx);
            for (int i = 0; i < dom.nx; ++i) {
                const double c = analytic::chi0(dom.x(i));
                den[i] = c * c;
            }
            const double norm = simpson(den, dom.h());
            for (int m = 0; m <= dom.nh(); ++m) {
                const double wsimp = (m == dom.nh()) ? 1.0 : (m % 2 == 1 ? 4.0 : 2.0);
                const double wfold = (m == 0) ? 0.5 : 1.0;
                const double c = analytic::chi0(dom.x(ic + m));
                brow[op.idx(m, k, 1)] = 2.0 * wfold * wsimp * dom.h() / 3.0 * c / norm /
                                        op.sqrt_w[op.idx(m, k, 1)];
            }
        }
        // Keller bordering: two banded solves instead of one dense one
        rvector z1 = solve_reduced(op, rhs);
        rvector z2 = solve_reduced(op, bcol);
        double b_z1 = 0.0, b_z2 = 0.0;
        for (int i = 0; i < n; ++i) {
            b_z1 += brow[i] * z1[i];
            b_z2 += brow[i] * z2[i];
        }
        const double delta_d = (b_z1 + amp_defect) / b_z2;
        rvector delta(n);
        for (int i = 0; i < n; ++i)
            delta[i] = (z1[i] - delta_d * z2[i]) / op.sqrt_w[i];
        SectorField df(dom);
        unpack_reduced(op, delta, df);
        res.field += df;
        width += delta_d;
        dom = dom.with_width(width);
        SectorField moved(dom);
        for (size_t i = 0; i < moved.coeffs().size(); ++i)
            moved.coeffs()[i] = res.field.coeffs()[i];
        res.field = enforce_symmetry(moved);
    }
    throw std::runtime_error("newton_solve_fixed_amplitude: no convergence");
}

SectorField asymptotic_guess(const StripDomain& dom0, int k, double width,
                             const analytic::Coefficients& coeffs) {
    const double dk = analytic::critical_width(k);
    if (width <= dk)
        throw std::invalid_argument("asymptotic_guess: width must exceed d_k");
    const StripDomain dom = dom0.with_width(width);
    SectorField f = soliton_field(dom);
    const double amp = coeffs.lambda_coeff * std::sqrt((width - dk) / dk);
    auto sk = f.sector(k);
    for (int i = 0; i < dom.nx; ++i)
        sk[i] = complexd{0.0, amp * analytic::chi0(dom.x(i))};
    return f;
}

Branch continue_branch(const StripDomain& dom, int k, double d_start_offset,
                       double d_end_offset, double step, BranchOptions opts) {
    if (!(0.0 < d_start_offset && d_start_offset < d_end_offset))
        throw std::invalid_argument("continue_branch: need 0 < start < end offsets");
    const double dk = analytic::critical_width(k);
    const analytic::Coefficients coeffs =
        analytic::compute_coefficients(dom.nx, dom.half_length);

    Branch br;
    br.k = k;
    auto add_point = [&](const NewtonResult& nr) {
        BranchPoint p;
        p.width = nr.field.domain().width;
        p.field = nr.field;
        p.amplitude = amplitude(nr.field, k);
        if (p.amplitude < 0.0) {  // conjugate branch: flip to the convention
            p.field = conjugate(nr.field);
            p.amplitude = -p.amplitude;
        }
        p.energy = energy(p.field);
        p.residual_norm = nr.residual;
        if (opts.vortices) p.vortex_set = vortices::detect_vortices(p.field);
        if (opts.morse) {
            StripOperator op = assemble_strip_linearization(p.field, true);
            p.n_negative = count_below(op.matrix, -1e-6);
        }
        br.points.push_back(std::move(p));
    };

    for (double off = d_start_offset; off <= d_end_offset + 1e-12; off += step) {
        const double d = dk + off;
        SectorField guess(dom.with_width(d));
        if (br.points.size() >= 2) {
            const auto& a = br.points[br.points.size() - 2];
            const auto& b = br.points.back();
            const double t = (d - b.width) / (b.width - a.width);
            SectorField extrap = b.field;
            SectorField diff = b.field - a.field;
            diff *= t;
            extrap += diff;
            guess = SectorField(dom.with_width(d));
            for (size_t i = 0; i < guess.coeffs().size(); ++i)
                guess.coeffs()[i] = extrap.coeffs()[i];
        } else {
            guess = asymptotic_guess(dom, k, d, coeffs);
        }
        try {
            NewtonResult nr = newton_solve(guess, opts.tol);
            const double amp = std::abs(amplitude(nr.field, k));
            const double predicted = coeffs.lambda_coeff * std::sqrt(off / dk);
            if (amp < 0.25 * predicted) {
                // collapsed onto the soliton: re-seed with the amplitude pinned
                NewtonResult fixed = newton_solve_fixed_amplitude(
                    asymptotic_guess(dom, k, d, coeffs), k, predicted, opts.tol);
                add_point(fixed);
            } else {
                add_point(nr);
            }
        } catch (const std::runtime_error&) {
            br.truncated = true;
            br.last_good_width = br.points.empty() ? 0.0 : br.points.back().width;
            break;
        }
    }
    if (!br.truncated && !br.points.empty())
        br.last_good_width = br.points.back().width;
    return br;
}

double energy(const SectorField& f) {
    const StripDomain& dom = f.domain();
    const double h = dom.h();
    const double d = dom.width;
    rvector dens(dom.nx, 0.0);
    // gradient_x via 4th-order stencils, sector Parseval on (0, d)
    for (int j = 0; j <= dom.n_modes; ++j) {
        cvector df = analytic::deriv4(f.sector(j), h);
        const double wy = (j == 0) ? d : d / 2.0;
        const double kx2 = std::pow(std::numbers::pi * j / d, 2);
        auto fj = f.sector(j);
        for (int i = 0; i < dom.nx; ++i)
            dens[i] += 0.5 * wy * (std::norm(df[i]) + kx2 * std::norm(fj[i]));
    }
    // quartic term on the quadrature grid
    cvector phys = to_quadrature_grid(f);
    for (int i = 0; i < dom.nx; ++i) {
        double acc = 0.0;
        for (int q = 0; q < dom.ny_quad; ++q) {
            const double n2 = 1.0 - std::norm(phys[(size_t)i * dom.ny_quad + q]);
            acc += n2 * n2;
        }
        dens[i] += 0.25 * d * acc / dom.ny_quad;
    }
    return simpson(dens, h);
}

EnergyFit verify_energy_expansion(const Branch& branch,
                                  const analytic::Coefficients& coeffs,
                                  double d_k_discrete) {
    EnergyFit fit;
    fit.reference_coeff = coeffs.energy_coeff;
    if (branch.points.size() < 6)
        throw std::invalid_argument("verify_energy_expansion: need >= 6 points");
    // deficit against the soliton energy on the same grid and width
    std::vector<double> s, deficit;
    for (const auto& p : branch.points) {
        const double es = energy(soliton_field(p.field.domain()));
        const double def = es - p.energy;
        if (def <= 0.0) fit.deficit_positive = false;
        s.push_back(p.width - d_k_discrete);
        deficit.push_back(def);
    }
    // single-coefficient fit over the six points nearest onset
    const int n = std::min<size_t>(6, s.size());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double basis = s[i] * s[i] / d_k_discrete;
        num += basis * deficit[i];
        den += basis * basis;
    }
    fit.fitted_coeff = num / den;
    fit.points_used = n;
    // log-log slope over the same points for the exponent
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        if (deficit[i] <= 0.0) continue;
        const double lx = std::log(s[i]), ly = std::log(deficit[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

AmplitudeFit fit_amplitude_law(const Branch& branch, double d_k_discrete) {
    AmplitudeFit fit;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const auto& p : branch.points) {
        const double s = (p.width - d_k_discrete) / d_k_discrete;
        if (s <= 0.0 || p.amplitude <= 0.0) continue;
        const double lx = std::log(s), ly = std::log(p.amplitude);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_amplitude_law: need >= 2 points");
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
    fit.points_used = n;
    return fit;
}

TilingReport verify_tiling(const SectorField& psi_k, int k, const SectorField& psi_1) {
    TilingReport rep;
    const StripDomain& dk = psi_k.domain();
    const StripDomain& d1 = psi_1.domain();
    if (std::abs(d1.width * k - dk.width) > 1e-9)
        throw std::invalid_argument("verify_tiling: widths must satisfy d = k d'");

    // R-symmetry of the narrow-strip field
    SectorField rpsi = reflect_conjugate(psi_1);
    rep.r_symmetry_defect = (rpsi - psi_1).max_abs();

    // pointwise comparison on a fine endpoint grid of the wide strip; the
    // continuation across copies is conjugate-and-translate, which glues
    // smoothly because R-invariance matches values and the Neumann condition
    // matches normal derivatives at each seam
    const int ny = 32 * k + 1;
    cvector wide = to_physical(psi_k, ny);
    double defect = 0.0;
    for (int i = 0; i < dk.nx; ++i)
        for (int r = 0; r < ny; ++r) {
            const double y = r * dk.width / (ny - 1);
            int copy = (int)std::floor(y / d1.width);
            double yl = y - copy * d1.width;
            if (copy >= k) { copy = k - 1; yl = d1.width; }
            complexd val{0.0, 0.0};
            for (int j = 0; j <= d1.n_modes; ++j)
                val += psi_1.at(j, i) * std::cos(std::numbers::pi * j * yl / d1.width);
            if (copy % 2 == 1) val = std::conj(val);
            defect = std::max(defect, std::abs(wide[(size_t)i * ny + r] - val));
        }
    rep.tiling_defect = defect;
    return rep;
}

}  // namespace gpstrip::continuation
