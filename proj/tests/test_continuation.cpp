#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "gpstrip/analytic.hpp"
#include "gpstrip/continuation.hpp"
#include "gpstrip/reduction.hpp"

using namespace gpstrip;
namespace an = gpstrip::analytic;
namespace cn = gpstrip::continuation;

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

TEST_CASE("gp_residual: soliton, vacuum and a pointwise oracle") {
    StripDomain dom = make_domain(20.0, an::critical_width(1) + 0.1, 801, 8);
    SectorField s0 = soliton_field(dom);
    SectorField r = cn::gp_residual(s0);
    CHECK(cn::residual_norm(r) < 1e-4);   // O(h^2) discretization defect
    CHECK(r.max_abs() < 5e-4);

    SectorField vac(dom);
    for (int i = 0; i < dom.nx; ++i) vac.at(0, i) = 1.0;
    SectorField rv = cn::gp_residual(vac);
    double interior = 0.0;
    for (int j = 0; j <= dom.n_modes; ++j)
        for (int i = 1; i + 1 < dom.nx; ++i)
            interior = std::max(interior, std::abs(rv.at(j, i)));
    CHECK(interior < 1e-14);

    // f = 2 S0: residual = D2(2 S0) + 2 S0 (1 - 4 S0^2) pointwise
    SectorField twos = s0;
    twos *= 2.0;
    SectorField rt = cn::gp_residual(twos);
    const double h = dom.h();
    for (int i : {150, 300, 400, 522, 640}) {
        const double s = an::soliton(dom.x(i));
        const double lap = (an::soliton(dom.x(i - 1)) - 2.0 * s +
                            an::soliton(dom.x(i + 1))) * 2.0 / (h * h);
        const double expect = lap + 2.0 * s * (1.0 - 4.0 * s * s);
        CHECK(rt.at(0, i).real() == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("asymptotic guess: validation, amplitude and symmetry") {
    StripDomain dom = make_domain(20.0, an::critical_width(1), 801, 8);
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    const double d1 = an::critical_width(1);
    CHECK_THROWS_AS(cn::asymptotic_guess(dom, 1, d1 - 0.1, co),
                    std::invalid_argument);
    const double d = d1 + 0.2;
    SectorField g = cn::asymptotic_guess(dom, 1, d, co);
    CHECK(amplitude(g, 1) ==
          doctest::Approx(co.lambda_coeff * std::sqrt(0.2 / d1)).epsilon(1e-10));
    CHECK((enforce_symmetry(g) - g).max_abs() < 1e-15);
}

TEST_CASE("Newton converges quadratically to the vortex branch") {
    StripDomain dom = make_domain(20.0, an::critical_width(1), 801, 8);
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    const double d = an::critical_width(1) + 0.2;
    auto nr = cn::newton_solve(cn::asymptotic_guess(dom, 1, d, co), 1e-10, 8);
    CHECK(nr.residual < 1e-10);
    CHECK(nr.iterations <= 8);
    CHECK(amplitude(nr.field, 1) > 0.2);  // did not collapse onto the soliton

    // terminal quadratic convergence: r_{n+1} <= C r_n^2 until the
    // evaluation floor of the residual is reached
    const auto& hist = nr.history;
    REQUIRE(hist.size() >= 3);
    for (size_t i = 1; i < hist.size(); ++i) {
        if (hist[i - 1] < 1e-3 && hist[i] > 1e-13)
            CHECK(hist[i] < 1e3 * hist[i - 1] * hist[i - 1]);
    }

    // the conjugate field solves the same discrete system
    SectorField conj_field = conjugate(nr.field);
    CHECK(cn::residual_norm(cn::gp_residual(conj_field)) ==
          doctest::Approx(nr.residual).epsilon(1e-6));

    // symmetry class to machine precision
    CHECK((enforce_symmetry(nr.field) - nr.field).max_abs() < 1e-13);
}

TEST_CASE("energy: soliton line density and vacuum") {
    StripDomain dom = make_domain(20.0, an::critical_width(1) + 0.3, 801, 8);
    SectorField s0 = soliton_field(dom);
    const double e = cn::energy(s0);
    const double expect = dom.width * 2.0 * kSqrt2 / 3.0;
    CHECK(std::abs(e - expect) / expect < 1e-5);

    SectorField vac(dom);
    for (int i = 0; i < dom.nx; ++i) vac.at(0, i) = 1.0;
    CHECK(cn::energy(vac) < 1e-13);
}

TEST_CASE("continued branch: residuals, energies below the soliton, sector weight") {
    StripDomain dom = make_domain(20.0, an::critical_width(1), 801, 8);
    cn::BranchOptions opts;
    opts.tol = 1e-10;
    opts.vortices = false;
    cn::Branch br = cn::continue_branch(dom, 1, 0.05, 1.0, 0.05, opts);
    CHECK(br.points.size() == 20);
    CHECK(!br.truncated);
    for (const auto& p : br.points) {
        CHECK(p.residual_norm <= 1e-10);
        CHECK(p.amplitude > 0.0);
        const double es = cn::energy(soliton_field(p.field.domain()));
        CHECK(p.energy < es);
    }
    // widths strictly increasing
    for (size_t i = 1; i < br.points.size(); ++i)
        CHECK(br.points[i].width > br.points[i - 1].width);

    // near onset the perturbation is dominated by sector k
    const auto& first = br.points.front();
    SectorField dev = first.field - soliton_field(first.field.domain());
    double sk = 0.0, tot = 0.0;
    for (int j = 0; j <= dom.n_modes; ++j) {
        const double w = (j == 0 ? 2.0 : 1.0);
        double s = 0.0;
        for (int i = 0; i < dom.nx; ++i) s += w * std::norm(dev.at(j, i));
        tot += s;
        if (j == 1) sk = s;
    }
    CHECK(sk / tot > 0.9);

    // grid doubling changes amplitude and energy at second order
    StripDomain fine = make_domain(20.0, an::critical_width(1), 1601, 8);
    cn::Branch brf = cn::continue_branch(fine, 1, 0.2, 0.21, 0.05, opts);
    cn::Branch brc = cn::continue_branch(dom, 1, 0.2, 0.21, 0.05, opts);
    CHECK(std::abs(brf.points[0].amplitude - brc.points[0].amplitude) < 5e-4);
    CHECK(std::abs(brf.points[0].energy - brc.points[0].energy) < 5e-3);
}

TEST_CASE("amplitude law and energy deficit against the sector-expansion constants") {
    StripDomain dom = make_domain(20.0, an::critical_width(1), 801, 8);
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    const double d1 = an::critical_width(1);
    cn::BranchOptions opts;
    opts.tol = 1e-11;
    opts.vortices = false;
    const double start = 0.005 * d1, end = 0.05 * d1;
    cn::Branch br = cn::continue_branch(dom, 1, start, end, (end - start) / 9.0, opts);
    REQUIRE(br.points.size() >= 9);

    const double dk = reduction::critical_width_discrete(dom, 1);
    auto fit = cn::fit_amplitude_law(br, dk);
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.05));
    // prefactor agrees with sqrt(12 sqrt2 / omega_series) where omega_series
    // is the measured cubic coefficient of the bifurcation function
    const double omega_series = 15.0 / 4.0 * co.int_chi0_4 + 3.0 * co.cross_term;
    const double lambda_series = std::sqrt(12.0 * kSqrt2 / omega_series);
    CHECK(std::abs(fit.prefactor - lambda_series) / lambda_series < 0.05);

    auto efit = cn::verify_energy_expansion(br, co, dk);
    CHECK(efit.deficit_positive);
    CHECK(efit.fitted_exponent == doctest::Approx(2.0).epsilon(0.05));
    // deficit coefficient agrees with lambda_series^2 / (2 sqrt2)
    const double deficit_series = lambda_series * lambda_series / (2.0 * kSqrt2);
    CHECK(std::abs(efit.fitted_coeff - deficit_series) / deficit_series < 0.05);
}

TEST_CASE("amplitude-constrained bordered solve steps off the pitchfork") {
    // prescribe the chi_k amplitude and let the width adjust; the solver
    // must land on the branch point whose amplitude matches
    StripDomain dom = make_domain(20.0, an::critical_width(1), 801, 8);
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    const double d_guess = an::critical_width(1) + 0.08;
    auto plain = cn::newton_solve(cn::asymptotic_guess(dom, 1, d_guess, co), 1e-11);
    const double target = amplitude(plain.field, 1) * 1.05;
    auto fixed = cn::newton_solve_fixed_amplitude(
        cn::asymptotic_guess(dom, 1, d_guess, co), 1, target, 1e-10);
    CHECK(fixed.used_amplitude_constraint);
    CHECK(amplitude(fixed.field, 1) == doctest::Approx(target).epsilon(1e-8));
    // the width moved above the guess (larger amplitude => wider strip)
    CHECK(fixed.field.domain().width > d_guess);
    CHECK(cn::residual_norm(cn::gp_residual(fixed.field)) < 1e-9);
}

TEST_CASE("argument validation of the branch driver") {
    StripDomain dom = make_domain(20.0, an::critical_width(1), 801, 8);
    CHECK_THROWS_AS(cn::continue_branch(dom, 1, 0.5, 0.1, 0.05),
                    std::invalid_argument);
    CHECK_THROWS_AS(cn::continue_branch(dom, 1, -0.1, 0.1, 0.05),
                    std::invalid_argument);
    cn::Branch tiny;
    tiny.k = 1;
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    CHECK_THROWS_AS(cn::verify_energy_expansion(tiny, co, an::critical_width(1)),
                    std::invalid_argument);
}

TEST_CASE("reduction and continuation build the same solution") {
    StripDomain dom = make_domain(20.0, an::critical_width(1), 801, 8);
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    const double d = an::critical_width(1) + 0.1;
    const double lam = reduction::lambda_root(dom, 1, d, 1e-12);
    CHECK(lam > 0.1);
    auto st = reduction::fixed_point(dom, 1, d, lam, 1e-12);
    SectorField f1 = reduction::assemble_state_field(st);
    auto nr = cn::newton_solve(cn::asymptotic_guess(dom, 1, d, co), 1e-11);
    CHECK((f1 - nr.field).max_abs() < 1e-6);
}

TEST_CASE("tiling: wide-strip solution is the reflected periodization") {
    StripDomain dom = make_domain(20.0, an::critical_width(2), 801, 8);
    const auto co = an::compute_coefficients(dom.nx, dom.half_length);
    const double d = an::critical_width(2) + 0.2;
    StripDomain dom_half = make_domain(20.0, d / 2.0, 801, 4);
    auto psi1 = cn::newton_solve(cn::asymptotic_guess(dom_half, 1, d / 2.0, co), 1e-11);
    auto psi2 = cn::newton_solve(
        cn::asymptotic_guess(dom.with_width(d), 2, d, co), 1e-11);
    auto rep = cn::verify_tiling(psi2.field, 2, psi1.field);
    CHECK(rep.r_symmetry_defect < 1e-8);
    CHECK(rep.tiling_defect < 1e-6);

    // tiling the bare soliton reproduces the soliton
    SectorField s0n = soliton_field(dom_half);
    SectorField s0w = soliton_field(dom.with_width(d));
    auto rep0 = cn::verify_tiling(s0w, 2, s0n);
    CHECK(rep0.tiling_defect < 1e-12);
}
