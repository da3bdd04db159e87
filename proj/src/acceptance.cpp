#include "gpstrip/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gpstrip/analytic.hpp"
#include "gpstrip/continuation.hpp"
#include "gpstrip/operators.hpp"
#include "gpstrip/reduction.hpp"
#include "gpstrip/vortices.hpp"

namespace gpstrip::acceptance {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;

Check abs_check(const std::string& name, double measured, double target,
                double tol, const std::string& note = "") {
    Check c;
    c.name = name;
    c.pass = std::abs(measured - target) <= tol;
    c.measured = measured;
    c.target = target;
    c.tolerance = tol;
    c.note = note;
    return c;
}

Check rel_check(const std::string& name, double measured, double target,
                double rel_tol, const std::string& note = "") {
    Check c;
    c.name = name;
    c.pass = std::abs(measured - target) <= rel_tol * std::abs(target);
    c.measured = measured;
    c.target = target;
    c.tolerance = rel_tol;
    c.note = note.empty() ? "relative tolerance" : note;
    return c;
}

Check bound_check(const std::string& name, double value, double bound,
                  bool lower, double slack) {
    Check c;
    c.name = name;
    c.measured = value;
    c.target = bound;
    c.tolerance = slack;
    c.pass = lower ? value >= bound - slack : value <= bound + slack;
    c.note = lower ? "lower bound" : "upper bound";
    return c;
}

StripDomain base_domain(const Options& o, double width) {
    return make_domain(o.half_length, width, o.nx, o.n_modes);
}

rvector sampled_soliton(const StripDomain& dom) {
    rvector s(dom.nx);
    for (int i = 0; i < dom.nx; ++i) s[i] = analytic::soliton(dom.x(i));
    return s;
}

// errors of the three grid quantities of criterion 3, for criterion 12
struct C3Errors {
    double chi2, hnorm, cross;
};

C3Errors c3_errors(const Options& o, int nx) {
    StripDomain dom = make_domain(o.half_length, 1.0, nx, o.n_modes);
    const double h = dom.h();
    rvector c2(nx), su(nx), c4(nx);
    cvector s0(nx);
    for (int i = 0; i < nx; ++i) {
        const double x = dom.x(i);
        const double c = analytic::chi0(x);
        c2[i] = c * c;
        c4[i] = c * c * c * c;
        su[i] = analytic::soliton(x) * analytic::u_star(x) * c * c;
        s0[i] = analytic::soliton(x);
    }
    C3Errors e;
    e.chi2 = simpson(c2, h) - 2.0 * kSqrt2;
    const double hn = analytic::h_norm(dom, s0);
    e.hnorm = hn * hn - 4.0 * kSqrt2 / 3.0;
    e.cross = simpson(su, h) - (-(1.0 / 8.0) * simpson(c4, h));
    return e;
}

// near-onset branch for criteria 6, 7, 12: d in d1 (1 + [0.005, 0.05])
continuation::Branch onset_branch(const Options& o, int nx, double tol) {
    const double d1 = analytic::critical_width(1);
    StripDomain dom = make_domain(o.half_length, d1, nx, o.n_modes);
    const double start = 0.005 * d1, end = 0.05 * d1;
    const double step = (end - start) / 9.0;
    continuation::BranchOptions bo;
    bo.tol = tol;
    bo.vortices = false;
    return continuation::continue_branch(dom, 1, start, end + 0.5 * step, step, bo);
}

CriterionResult c1(const Options& o) {
    CriterionResult r;
    r.id = 1;
    r.name = "critical widths from the sector operator";
    for (int k = 1; k <= 2; ++k) {
        const double dk = analytic::critical_width(k);
        StripDomain dom = base_domain(o, dk);
        rvector s0 = sampled_soliton(dom);
        const double step = 0.01;
        double prev_d = dk - 0.1;
        double prev = tk_lowest_eigenvalue(dom.with_width(prev_d), s0, k);
        double crossing = 0.0;
        for (double d = prev_d + step; d <= dk + 0.1 + 1e-12; d += step) {
            const double mu = tk_lowest_eigenvalue(dom.with_width(d), s0, k);
            if (prev > 0.0 && mu <= 0.0) {
                crossing = d - 0.5 * step;
                break;
            }
            prev = mu;
            prev_d = d;
        }
        std::ostringstream nm;
        nm << "zero crossing of lowest T_" << k << " eigenvalue";
        r.checks.push_back(abs_check(nm.str(), crossing, dk, step));
    }
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c2(const Options& o) {
    CriterionResult r;
    r.id = 2;
    r.name = "soliton spectrum";
    StripDomain dom = base_domain(o, analytic::critical_width(1));
    const double h = dom.h();
    for (auto sign : {L0Sign::minus, L0Sign::plus}) {
        LinearOperator1D op = assemble_L0(sign, dom);
        SpectrumResult sp = spectrum(op, 1);
        const bool minus = sign == L0Sign::minus;
        r.checks.push_back(abs_check(
            minus ? "lowest eigenvalue of L0-" : "lowest eigenvalue of L0+",
            sp.eigenvalues[0], minus ? -0.5 : 0.0, 5e-4));
        // unweight end nodes, normalize, compare against the reference mode
        rvector v = sp.eigenvectors[0];
        v[0] *= kSqrt2;
        v[dom.nx - 1] *= kSqrt2;
        rvector ref(dom.nx), v2(dom.nx);
        for (int i = 0; i < dom.nx; ++i)
            ref[i] = minus ? analytic::chi0(dom.x(i))
                           : analytic::soliton_deriv(dom.x(i));
        double nv = 0.0, nr = 0.0;
        {
            rvector tmp(dom.nx);
            for (int i = 0; i < dom.nx; ++i) tmp[i] = v[i] * v[i];
            nv = std::sqrt(simpson(tmp, h));
            for (int i = 0; i < dom.nx; ++i) tmp[i] = ref[i] * ref[i];
            nr = std::sqrt(simpson(tmp, h));
        }
        double flip = 1.0;
        if (v[dom.center()] * ref[dom.center()] < 0.0) flip = -1.0;
        for (int i = 0; i < dom.nx; ++i)
            v2[i] = std::pow(flip * v[i] / nv - ref[i] / nr, 2);
        r.checks.push_back(abs_check(
            minus ? "L0- ground mode vs chi0 (L2)" : "L0+ ground mode vs S0' (L2)",
            std::sqrt(simpson(v2, h)), 0.0, 1e-3));
    }
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c3(const Options& o) {
    CriterionResult r;
    r.id = 3;
    r.name = "closed-form integrals on the grid";
    C3Errors e = c3_errors(o, o.nx);
    r.checks.push_back(abs_check("int chi0^2 - 2 sqrt2", e.chi2, 0.0, 1e-6));
    r.checks.push_back(abs_check("||S0||_H^2 - 4 sqrt2/3", e.hnorm, 0.0, 1e-6));
    r.checks.push_back(
        abs_check("int S0 U0 chi0^2 + (1/8) int chi0^4", e.cross, 0.0, 1e-6));
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c4(const Options& o) {
    CriterionResult r;
    r.id = 4;
    r.name = "coefficient bounds";
    const auto co = analytic::compute_coefficients(o.nx, o.half_length);
    const double slack = 1e-8;
    r.checks.push_back(bound_check("omega >= (21/4) int chi0^4", co.omega,
                                   21.0 / 4.0 * co.int_chi0_4, true, slack));
    r.checks.push_back(
        bound_check("-int S0 v chi0^2 >= 0", -co.cross_term, 0.0, true, slack));
    r.checks.push_back(bound_check("-int S0 v chi0^2 <= int chi0^4", -co.cross_term,
                                   co.int_chi0_4, false, slack));
    r.checks.push_back(bound_check(
        "energy coefficient >= 9 Lambda^2 / (14 sqrt2)", co.energy_coeff,
        9.0 * co.lambda_coeff * co.lambda_coeff / (14.0 * kSqrt2), true, slack));
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c5(const Options& o) {
    CriterionResult r;
    r.id = 5;
    r.name = "bifurcation function and its derivatives";
    const double d1 = analytic::critical_width(1);
    StripDomain dom = base_domain(o, d1);
    const auto co = analytic::compute_coefficients(o.nx, o.half_length);

    const double j0 = reduction::bifurcation_J(dom, 1, d1 + 0.07, 0.0, 1e-11);
    r.checks.push_back(abs_check("J(d, 0)", j0, 0.0, 1e-10));
    const double jp = reduction::bifurcation_J(dom, 1, d1 + 0.1, 0.12, 1e-12);
    const double jm = reduction::bifurcation_J(dom, 1, d1 + 0.1, -0.12, 1e-12);
    r.checks.push_back(abs_check("J(d, -lambda) + J(d, lambda)", jp + jm, 0.0, 1e-10));

    reduction::FdSteps steps;
    steps.tol = 1e-11;
    const auto probe = reduction::probe_J_derivatives(dom, 1, steps);
    r.checks.push_back(
        abs_check("d_{d,lambda} J at onset", probe.d_dl, -2.0 * kSqrt2, 1e-2));
    r.checks.push_back(rel_check("d^3_lambda J / d_k vs pipeline omega",
                                 probe.d_lll / probe.d_k, co.omega, 0.02));
    r.checks.push_back(abs_check("J at (d_k, 0)", probe.j_at_zero, 0.0, 1e-6));
    r.checks.push_back(abs_check("d_d J", probe.d_d, 0.0, 1e-6));
    r.checks.push_back(abs_check("d_lambda J", probe.d_lambda, 0.0, 1e-6));
    r.checks.push_back(abs_check("d_{dd} J", probe.d_dd, 0.0, 1e-6));
    r.checks.push_back(abs_check("d_{lambda,lambda} J", probe.d_ll, 0.0, 1e-6));
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c6(const Options& o) {
    CriterionResult r;
    r.id = 6;
    r.name = "amplitude law near onset";
    const auto co = analytic::compute_coefficients(o.nx, o.half_length);
    continuation::Branch br = onset_branch(o, o.nx, o.tol);
    StripDomain dom = base_domain(o, analytic::critical_width(1));
    const double dk = reduction::critical_width_discrete(dom, 1);
    const auto fit = continuation::fit_amplitude_law(br, dk);
    r.checks.push_back(abs_check("amplitude exponent", fit.exponent, 0.5, 0.05));
    r.checks.push_back(
        rel_check("amplitude prefactor vs pipeline Lambda", fit.prefactor,
                  co.lambda_coeff, 0.05));
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c7(const Options& o) {
    CriterionResult r;
    r.id = 7;
    r.name = "energy expansion near onset";
    const auto co = analytic::compute_coefficients(o.nx, o.half_length);
    continuation::Branch br = onset_branch(o, o.nx, o.tol);
    StripDomain dom = base_domain(o, analytic::critical_width(1));
    const double dk = reduction::critical_width_discrete(dom, 1);
    const auto fit = continuation::verify_energy_expansion(br, co, dk);
    Check pos;
    pos.name = "energy deficit positive at every point";
    pos.pass = fit.deficit_positive;
    pos.measured = fit.deficit_positive ? 1.0 : 0.0;
    pos.target = 1.0;
    r.checks.push_back(pos);
    r.checks.push_back(rel_check("fitted deficit coefficient vs pipeline value",
                                 fit.fitted_coeff, co.energy_coeff, 0.05));
    r.checks.push_back(abs_check("deficit exponent", fit.fitted_exponent, 2.0, 0.1));
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c8(const Options& o) {
    CriterionResult r;
    r.id = 8;
    r.name = "vortex census";
    const auto co = analytic::compute_coefficients(o.nx, o.half_length);
    // k = 1
    {
        const double d = analytic::critical_width(1) + 0.2;
        StripDomain dom = base_domain(o, d);
        auto nr = continuation::newton_solve(
            continuation::asymptotic_guess(dom, 1, d, co), o.tol);
        auto vs = vortices::detect_vortices(nr.field);
        Check count;
        count.name = "k=1: exactly one isolated zero";
        count.measured = (double)vs.entries.size();
        count.target = 1.0;
        count.pass = vs.entries.size() == 1;
        r.checks.push_back(count);
        if (vs.entries.size() == 1) {
            const auto& v = vs.entries[0];
            const double h2 = 2.0 * dom.h();
            r.checks.push_back(abs_check("k=1: zero at x = 0", v.x, 0.0, h2));
            r.checks.push_back(abs_check("k=1: zero at y = d/2", v.y, d / 2.0, h2));
            r.checks.push_back(abs_check("k=1: |degree| = 1", std::abs(v.degree), 1.0,
                                         0.0, "signed degree reported separately"));
        }
    }
    // k = 2
    {
        const double d = analytic::critical_width(2) + 0.2;
        StripDomain dom = base_domain(o, d);
        auto nr = continuation::newton_solve(
            continuation::asymptotic_guess(dom, 2, d, co), o.tol);
        auto vs = vortices::detect_vortices(nr.field);
        Check count;
        count.name = "k=2: exactly two isolated zeros";
        count.measured = (double)vs.entries.size();
        count.target = 2.0;
        count.pass = vs.entries.size() == 2;
        r.checks.push_back(count);
        if (vs.entries.size() == 2) {
            const double h2 = 2.0 * dom.h();
            r.checks.push_back(
                abs_check("k=2: first ordinate d/4", vs.entries[0].y, d / 4.0, h2));
            r.checks.push_back(abs_check("k=2: second ordinate 3d/4", vs.entries[1].y,
                                         3.0 * d / 4.0, h2));
            Check alt;
            alt.name = "k=2: degrees alternate";
            alt.measured = (double)(vs.entries[0].degree * vs.entries[1].degree);
            alt.target = -1.0;
            alt.pass = vs.entries[0].degree * vs.entries[1].degree == -1;
            r.checks.push_back(alt);
        }
    }
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c9(const Options& o) {
    CriterionResult r;
    r.id = 9;
    r.name = "reflection symmetry and tiling";
    const auto co = analytic::compute_coefficients(o.nx, o.half_length);
    const double d2 = analytic::critical_width(2);
    const double d = d2 + 0.2;
    // narrow field at width d/2 with half the modes; its tiling then lives
    // exactly inside the wide sector space
    StripDomain dom_half =
        make_domain(o.half_length, d / 2.0, o.nx, o.n_modes / 2);
    auto psi1 = continuation::newton_solve(
        continuation::asymptotic_guess(dom_half, 1, d / 2.0, co), o.tol);
    StripDomain dom = base_domain(o, d);
    auto psi2 = continuation::newton_solve(
        continuation::asymptotic_guess(dom, 2, d, co), o.tol);
    auto rep = continuation::verify_tiling(psi2.field, 2, psi1.field);
    r.checks.push_back(
        abs_check("|| R Psi_1 - Psi_1 ||_inf", rep.r_symmetry_defect, 0.0, 1e-8));
    r.checks.push_back(
        abs_check("|| Psi_2 - tiled Psi_1 ||_inf", rep.tiling_defect, 0.0, 1e-6));
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c10(const Options& o) {
    CriterionResult r;
    r.id = 10;
    r.name = "negative-eigenvalue staircase";
    StripDomain dom0 = base_domain(o, 2.2);
    rvector s0 = sampled_soliton(dom0);
    auto count = [&](double d) {
        return morse_index_about_profile(dom0.with_width(d), s0);
    };
    // staircase values between the jumps
    struct Probe {
        double d;
        int expected;
    };
    const double d1 = analytic::critical_width(1), d2 = analytic::critical_width(2);
    for (const auto& p : {Probe{2.2, 1}, Probe{0.5 * (d1 + d2), 2}, Probe{11.9, 3}}) {
        Check c;
        std::ostringstream nm;
        nm << "n_negative at d = " << p.d;
        c.name = nm.str();
        c.measured = count(p.d);
        c.target = p.expected;
        c.pass = (int)c.measured == p.expected;
        r.checks.push_back(c);
    }
    // locate the jumps by bisection
    for (int k = 1; k <= 2; ++k) {
        const double dk = analytic::critical_width(k);
        double lo = dk - 0.3, hi = dk + 0.3;
        const int below = count(lo);
        for (int it = 0; it < 50 && hi - lo > 1e-5; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (count(mid) == below)
                lo = mid;
            else
                hi = mid;
        }
        std::ostringstream nm;
        nm << "jump location near d_" << k;
        r.checks.push_back(abs_check(nm.str(), 0.5 * (lo + hi), dk, 0.02));
    }
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}

CriterionResult c11(const Options& o) {
    CriterionResult r;
    r.id = 11;
    r.name = "reduction vs continuation cross-check";
    const double d = analytic::critical_width(1) + 0.1;
    StripDomain dom = base_domain(o, d);
    const auto co = analytic::compute_coefficients(o.nx, o.half_length);

    const double lam = reduction::lambda_root(dom, 1, d, 1e-12);
    auto st = reduction::fixed_point(dom, 1, d, lam, 1e-12);
    SectorField from_reduction = reduction::assemble_state_field(st);

    auto nr = continuation::newton_solve(
        continuation::asymptotic_guess(dom, 1, d, co), 1e-11);
    const double diff = (from_reduction - nr.field).max_abs();
    r.checks.push_back(
        abs_check("max |reduction field - Newton field|", diff, 0.0, 1e-6));
    r.pass = r.checks[0].pass;
    return r;
}

CriterionResult c12(const Options& o) {
    CriterionResult r;
    r.id = 12;
    r.name = "second-order convergence of criteria 3 and 7";
    const double floor = 1e-10;  // machine-precision floor for error ratios
    C3Errors coarse = c3_errors(o, o.nx);
    C3Errors fine = c3_errors(o, 2 * o.nx - 1);
    auto conv = [&](const std::string& name, double ec, double ef) {
        Check c;
        c.name = name;
        c.measured = std::abs(ef);
        c.target = std::abs(ec);
        c.tolerance = 3.5;
        if (std::abs(ec) < floor && std::abs(ef) < floor) {
            c.pass = true;
            c.note = "both errors below the 1e-10 machine floor";
        } else {
            c.pass = std::abs(ef) <= std::abs(ec) / 3.5;
            c.note = "requires error(fine) <= error(coarse)/3.5";
        }
        return c;
    };
    r.checks.push_back(conv("int chi0^2 error ratio", coarse.chi2, fine.chi2));
    r.checks.push_back(conv("||S0||_H^2 error ratio", coarse.hnorm, fine.hnorm));
    r.checks.push_back(conv("cross integral error ratio", coarse.cross, fine.cross));

    // criterion-7 quantities re-run on the doubled grid
    {
        const auto co_c = analytic::compute_coefficients(o.nx, o.half_length);
        const auto co_f =
            analytic::compute_coefficients(2 * o.nx - 1, o.half_length);
        continuation::Branch brc = onset_branch(o, o.nx, o.tol);
        continuation::Branch brf = onset_branch(o, 2 * o.nx - 1, o.tol);
        StripDomain dc = make_domain(o.half_length, 1.0, o.nx, o.n_modes);
        StripDomain df = make_domain(o.half_length, 1.0, 2 * o.nx - 1, o.n_modes);
        const double dkc = reduction::critical_width_discrete(dc, 1);
        const double dkf = reduction::critical_width_discrete(df, 1);
        const auto fc = continuation::verify_energy_expansion(brc, co_c, dkc);
        const auto ff = continuation::verify_energy_expansion(brf, co_f, dkf);
        r.checks.push_back(conv("energy-fit coefficient error ratio",
                                fc.fitted_coeff - co_c.energy_coeff,
                                ff.fitted_coeff - co_f.energy_coeff));
        r.checks.push_back(conv("energy-fit exponent error ratio",
                                fc.fitted_exponent - 2.0, ff.fitted_exponent - 2.0));
    }
    r.pass = true;
    for (const auto& c : r.checks) r.pass &= c.pass;
    return r;
}
}  // namespace

CriterionResult run_criterion(int id, const Options& opts) {
    if (opts.nx < 401) {
        const bool sensitive = id != 4;
        if (sensitive) {
            CriterionResult r;
            r.id = id;
            r.name = "criterion " + std::to_string(id);
            r.skipped = true;
            r.pass = true;
            r.skip_reason =
                "grid too coarse for the stated tolerances (needs nx >= 401)";
            return r;
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    switch (id) {
        case 1: r = c1(opts); break;
        case 2: r = c2(opts); break;
        case 3: r = c3(opts); break;
        case 4: r = c4(opts); break;
        case 5: r = c5(opts); break;
        case 6: r = c6(opts); break;
        case 7: r = c7(opts); break;
        case 8: r = c8(opts); break;
        case 9: r = c9(opts); break;
        case 10: r = c10(opts); break;
        case 11: r = c11(opts); break;
        case 12: r = c12(opts); break;
        default: throw std::invalid_argument("criterion id out of range");
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    return r;
}

std::vector<CriterionResult> run_all(const Options& opts) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 12; ++id) out.push_back(run_criterion(id, opts));
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os.precision(10);
    if (r.skipped) {
        os << "[SKIP] C" << r.id << " " << r.name << ": " << r.skip_reason << "\n";
        return os.str();
    }
    os << (r.pass ? "[PASS]" : "[FAIL]") << " C" << r.id << " " << r.name << " ("
       << r.seconds << " s)\n";
    for (const auto& c : r.checks) {
        os << "    " << (c.pass ? "ok  " : "FAIL") << "  " << c.name
           << ": measured=" << c.measured << " target=" << c.target
           << " tol=" << c.tolerance;
        if (!c.note.empty()) os << "  [" << c.note << "]";
        os << "\n";
    }
    return os.str();
}

}  // namespace gpstrip::acceptance
