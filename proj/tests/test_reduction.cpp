#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "gpstrip/analytic.hpp"
#include "gpstrip/continuation.hpp"
#include "gpstrip/operators.hpp"
#include "gpstrip/reduction.hpp"

using namespace gpstrip;
namespace an = gpstrip::analytic;
namespace red = gpstrip::reduction;

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
StripDomain default_domain() { return make_domain(20.0, an::critical_width(1), 801, 8); }
}  // namespace

TEST_CASE("f0 vanishes without a complement and captures the quadratic term") {
    StripDomain dom = default_domain();
    cvector psi0(dom.nx);
    for (int i = 0; i < dom.nx; ++i) psi0[i] = an::soliton(dom.x(i));

    SectorField w0(dom);
    cvector f = red::f0(dom, psi0, w0);
    for (auto z : f) CHECK(std::abs(z) < 1e-15);

    // w = lambda chi_k: transverse average gives lambda^2 chi0^2 S0 / 2
    const double lam = 0.2;
    SectorField w = chi_k_field(dom, 1);
    w *= lam;
    f = red::f0(dom, psi0, w);
    double worst_re = 0.0, worst_im = 0.0;
    for (int i = 0; i < dom.nx; ++i) {
        const double c = an::chi0(dom.x(i));
        const double expect = 0.5 * lam * lam * c * c * an::soliton(dom.x(i));
        worst_re = std::max(worst_re, std::abs(f[i].real() - expect));
        worst_im = std::max(worst_im, std::abs(f[i].imag()));
    }
    CHECK(worst_re < 1e-14);
    CHECK(worst_im < 1e-14);
}

TEST_CASE("g_nl: zero sector clears and the 2k sector carries the source") {
    StripDomain dom = default_domain();
    cvector psi0(dom.nx);
    for (int i = 0; i < dom.nx; ++i) psi0[i] = an::soliton(dom.x(i));
    const double lam = 0.15;
    SectorField w = chi_k_field(dom, 1);
    w *= lam;
    SectorField g = red::g_nl(dom, psi0, w);
    for (int i = 0; i < dom.nx; ++i) CHECK(std::abs(g.at(0, i)) < 1e-12);
    // sector 2k: -|w|^2 psi0 contributes -(lam^2/2) chi0^2 S0 by
    // product-to-sum; sector 3k: -(lam^3/4) chi0^3 from |w|^2 w
    double worst2 = 0.0, worst3 = 0.0;
    for (int i = 0; i < dom.nx; ++i) {
        const double c = an::chi0(dom.x(i));
        const double e2 = -0.5 * lam * lam * c * c * an::soliton(dom.x(i));
        worst2 = std::max(worst2, std::abs(g.at(2, i) - e2));
        const double e3 = -0.25 * lam * lam * lam * c * c * c;
        worst3 = std::max(worst3, std::abs(g.at(3, i) - complexd{0.0, e3}));
    }
    CHECK(worst2 < 1e-13);
    CHECK(worst3 < 1e-13);
}

TEST_CASE("zero-sector Newton: soliton fixed point and forcing response") {
    StripDomain dom = default_domain();
    cvector zero(dom.nx, complexd{0.0, 0.0});
    cvector s0h = red::solve_zero_sector(dom, zero, 1e-13);
    CHECK(std::abs(s0h[dom.center()]) == 0.0);
    // stays within O(h^2) of the sampled soliton
    double dist = 0.0;
    for (int i = 0; i < dom.nx; ++i)
        dist = std::max(dist, std::abs(s0h[i] - an::soliton(dom.x(i))));
    CHECK(dist < 2e-4);
    CHECK(dist > 1e-6);  // the discrete soliton is not the sampled tanh

    // halving the forcing quarters the squared distance (linear response)
    auto dist_for = [&](double eps) {
        cvector f(dom.nx);
        for (int i = 0; i < dom.nx; ++i) {
            const double c = an::chi0(dom.x(i));
            f[i] = eps * an::soliton(dom.x(i)) * c * c;
        }
        cvector sol = red::solve_zero_sector(dom, f, 1e-13, 25, &s0h);
        return an::gl_distance(dom, sol, s0h);
    };
    const double d1 = dist_for(1e-3), d2 = dist_for(5e-4);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.02));

    // second directional response reproduces the closed form U0
    const double lam = 0.05;
    auto resp = [&](double l) {
        cvector f(dom.nx);
        for (int i = 0; i < dom.nx; ++i) {
            const double c = an::chi0(dom.x(i));
            f[i] = 0.5 * l * l * c * c * an::soliton(dom.x(i));
        }
        return red::solve_zero_sector(dom, f, 1e-13, 25, &s0h);
    };
    cvector ra = resp(lam), rb = resp(lam / 2);
    double worst = 0.0;
    for (int i = 0; i < dom.nx; ++i) {
        const double ua = 2.0 * (ra[i].real() - s0h[i].real()) / (lam * lam);
        const double ub = 2.0 * (rb[i].real() - s0h[i].real()) / (lam * lam / 4.0);
        const double u = (4.0 * ub - ua) / 3.0;
        worst = std::max(worst, std::abs(u - an::u_star(dom.x(i))));
    }
    CHECK(worst < 5e-4);
}

TEST_CASE("projected solve: homogeneous case, residual and orthogonality") {
    StripDomain dom = default_domain();
    cvector psi0(dom.nx);
    for (int i = 0; i < dom.nx; ++i) psi0[i] = an::soliton(dom.x(i));
    const double d = an::critical_width(1) + 0.07;

    SectorField zero(dom);
    SectorField w0 = red::solve_projected_w(dom, psi0, zero, 1, d);
    CHECK(w0.max_abs() < 1e-15);

    // a symmetric right-hand side with several sectors
    SectorField rhs(dom);
    for (int j = 1; j <= dom.n_modes; ++j)
        for (int i = 0; i < dom.nx; ++i) {
            const double c = an::chi0(dom.x(i));
            const double s = an::soliton(dom.x(i));
            rhs.at(j, i) = complexd{0.01 * s * c * c / j, 0.02 * c / (j + 1)};
        }
    SectorField w = red::solve_projected_w(dom, psi0, rhs, 1, d);

    // defining equations: T_j w_j = rhs_j for j != k, pointwise
    for (int j : {2, 3, 5}) {
        cvector tw = apply_Tk(psi0, j, d, dom.with_width(d), w.sector(j));
        double worst = 0.0;
        for (int i = 1; i + 1 < dom.nx; ++i)
            worst = std::max(worst, std::abs(tw[i] - rhs.at(j, i)));
        CHECK(worst < 1e-10);
    }
    // k sector: T_k w_k - rhs_k is parallel to i chi0 and w_k is orthogonal
    {
        cvector tw = apply_Tk(psi0, 1, d, dom.with_width(d), w.sector(1));
        rvector num(dom.nx), den(dom.nx), ortho(dom.nx);
        for (int i = 0; i < dom.nx; ++i) {
            const double c = an::chi0(dom.x(i));
            num[i] = (tw[i].imag() - rhs.at(1, i).imag()) * c;
            den[i] = c * c;
            ortho[i] = w.at(1, i).imag() * c;
        }
        const double mu = simpson(num, dom.h()) / simpson(den, dom.h());
        double worst = 0.0;
        for (int i = 1; i + 1 < dom.nx; ++i) {
            const complexd defect =
                tw[i] - rhs.at(1, i) - complexd{0.0, mu * an::chi0(dom.x(i))};
            worst = std::max(worst, std::abs(defect));
        }
        CHECK(worst < 1e-9);
        CHECK(std::abs(simpson(ortho, dom.h())) < 1e-10);
    }
}

TEST_CASE("fixed point: trivial limit, conjugation, contraction, quadratic scale") {
    StripDomain dom = default_domain();
    const double d = an::critical_width(1) + 0.1;

    auto st0 = red::fixed_point(dom, 1, d, 0.0, 1e-12);
    CHECK(st0.w.max_abs() < 1e-15);
    CHECK(st0.fp_residual < 1e-12);

    const double lam = 0.12;
    auto stp = red::fixed_point(dom, 1, d, lam, 1e-12);
    auto stm = red::fixed_point(dom, 1, d, -lam, 1e-12);
    double worst = 0.0;
    for (int i = 0; i < dom.nx; ++i)
        worst = std::max(worst, std::abs(stp.psi0[i] - std::conj(stm.psi0[i])));
    SectorField diff = conjugate(stm.w) - stp.w;
    CHECK(worst < 1e-14);
    CHECK(diff.max_abs() < 1e-14);

    // contraction: successive distances drop by at least 1/2 after iterate 2
    REQUIRE(stp.history.size() >= 3);
    for (size_t i = 2; i < stp.history.size(); ++i)
        CHECK(stp.history[i] <= 0.5 * stp.history[i - 1]);

    // ||psi0 - S0|| and ||W|| scale like lambda^2
    auto sth = red::fixed_point(dom, 1, d, lam / 2, 1e-13);
    auto dev = [&](const red::ReducedState& st) {
        double m = 0.0;
        for (int i = 0; i < dom.nx; ++i)
            m = std::max(m, std::abs(st.psi0[i] - st0.psi0[i]));
        return m;
    };
    CHECK(dev(stp) / dev(sth) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(stp.w.max_abs() / sth.w.max_abs() == doctest::Approx(4.0).epsilon(0.1));

    // H_k membership of the converged complement
    rvector ortho(dom.nx);
    for (int i = 0; i < dom.nx; ++i)
        ortho[i] = stp.w.at(1, i).imag() * an::chi0(dom.x(i));
    CHECK(std::abs(simpson(ortho, dom.h())) < 1e-10);
    CHECK(std::abs(stp.psi0[dom.center()]) < 1e-14);
}

TEST_CASE("bifurcation function: zero line, oddness, derivative table") {
    StripDomain dom = default_domain();
    const double d1 = an::critical_width(1);

    CHECK(red::bifurcation_J(dom, 1, d1 + 0.05, 0.0) == 0.0);
    const double jp = red::bifurcation_J(dom, 1, d1 + 0.1, 0.12, 1e-12);
    const double jm = red::bifurcation_J(dom, 1, d1 + 0.1, -0.12, 1e-12);
    CHECK(std::abs(jp + jm) < 1e-10);
    CHECK(jp < 0.0);  // below the branch amplitude the function is negative

    auto probe = red::probe_J_derivatives(dom, 1);
    CHECK(std::abs(probe.d_k - d1) < 1e-3);
    CHECK(std::abs(probe.j_at_zero) < 1e-12);
    CHECK(std::abs(probe.d_d) < 1e-6);
    CHECK(std::abs(probe.d_dd) < 1e-6);
    CHECK(std::abs(probe.d_lambda) < 1e-6);
    CHECK(std::abs(probe.d_ll) < 1e-6);
    CHECK(probe.d_dl == doctest::Approx(-2.0 * kSqrt2).epsilon(4e-3));

    // the measured cubic coefficient matches the quadrature pipeline of the
    // sector-expansion constants: (15/4) int chi0^4 + 3 int S0 v chi0^2
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    const double omega_series = 15.0 / 4.0 * co.int_chi0_4 + 3.0 * co.cross_term;
    CHECK(probe.d_lll / probe.d_k ==
          doctest::Approx(omega_series).epsilon(0.02));
}

TEST_CASE("solver error paths carry diagnostics") {
    StripDomain dom = default_domain();
    cvector zero(dom.nx, complexd{0.0, 0.0});
    // unreachable tolerance with too few iterations: throws with the
    // residual history in the message
    try {
        red::solve_zero_sector(dom, zero, 1e-30, 1);
        FAIL("expected a convergence error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("residual history") != std::string::npos);
    }
    // far outside the contraction region the iterates diverge
    CHECK_THROWS_AS(red::fixed_point(dom, 1, an::critical_width(1) + 0.1, 1.4, 1e-12),
                    std::runtime_error);
    CHECK_THROWS_AS(red::fixed_point(dom, 9, an::critical_width(1), 0.1, 1e-12),
                    std::invalid_argument);
}

TEST_CASE("positive root of J exists exactly above the critical width") {
    StripDomain dom = default_domain();
    const double d1 = an::critical_width(1);
    CHECK(red::lambda_root(dom, 1, d1 - 0.2) == 0.0);
    const double lam = red::lambda_root(dom, 1, d1 + 0.2);
    CHECK(lam > 0.0);
    CHECK(red::bifurcation_J(dom, 1, d1 + 0.2, lam, 1e-12) ==
          doctest::Approx(0.0).epsilon(1e-8));

    // lambda*(d)/sqrt((d - d_k)/d_k) approaches the measured-prefactor limit
    const double dk = red::critical_width_discrete(dom, 1);
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    const double omega_series = 15.0 / 4.0 * co.int_chi0_4 + 3.0 * co.cross_term;
    const double lambda_series = std::sqrt(12.0 * kSqrt2 / omega_series);
    double prev_gap = 1e9;
    for (double delta : {0.2, 0.1, 0.05}) {
        const double ratio =
            red::lambda_root(dom, 1, dk + delta) / std::sqrt(delta / dk);
        const double gap = std::abs(ratio - lambda_series);
        CHECK(gap < prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap / lambda_series < 0.05);
}

TEST_CASE("k = 2 sector: same derivative structure at its own onset") {
    StripDomain dom = make_domain(20.0, an::critical_width(2), 801, 8);
    const double d2 = an::critical_width(2);
    const double dk = red::critical_width_discrete(dom, 2);
    CHECK(std::abs(dk - d2) < 1e-3);
    // mixed derivative is k-independent
    const double hl = 0.04, hd = 0.04;
    const double jp = red::bifurcation_J(dom, 2, dk + hd, hl, 1e-11);
    const double jm = red::bifurcation_J(dom, 2, dk - hd, hl, 1e-11);
    CHECK((jp - jm) / (2.0 * hd * hl) ==
          doctest::Approx(-2.0 * kSqrt2).epsilon(4e-3));
    // cubic coefficient normalized by d_k is the same series constant
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    const double omega_series = 15.0 / 4.0 * co.int_chi0_4 + 3.0 * co.cross_term;
    const double d3 = (red::bifurcation_J(dom, 2, dk, 0.1, 1e-12) -
                       2.0 * red::bifurcation_J(dom, 2, dk, 0.05, 1e-12)) /
                      (0.05 * 0.05 * 0.05);
    CHECK(d3 / dk == doctest::Approx(omega_series).epsilon(0.03));
}

TEST_CASE("the k-sector defect of a converged state is pure chi_k") {
    StripDomain dom = default_domain();
    const double d = an::critical_width(1) + 0.1;
    auto st = red::fixed_point(dom, 1, d, 0.1, 1e-12);
    SectorField field = red::assemble_state_field(st);
    SectorField r = continuation::gp_residual(field);
    const double j = red::bifurcation_J(st);
    // remove the chi_k component of the residual; the rest is solver noise
    rvector den(dom.nx);
    for (int i = 0; i < dom.nx; ++i)
        den[i] = an::chi0(dom.x(i)) * an::chi0(dom.x(i));
    const double chi_norm_sq = d * simpson(den, dom.h());
    const double coeff = -j / chi_norm_sq;
    auto rk = r.sector(1);
    double worst = 0.0;
    for (int i = 2; i + 2 < dom.nx; ++i) {
        const complexd left =
            rk[i] - coeff * complexd{0.0, an::chi0(dom.x(i))};
        worst = std::max(worst, std::abs(left));
    }
    for (int j2 : {0, 2, 3, 4}) {
        auto rj = r.sector(j2);
        for (int i = 2; i + 2 < dom.nx; ++i)
            worst = std::max(worst, std::abs(rj[i]));
    }
    CHECK(worst < 1e-9);
}
