#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gpstrip/analytic.hpp"
#include "gpstrip/field.hpp"

using namespace gpstrip;

namespace {
SectorField random_symmetric_field(const StripDomain& dom, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SectorField f(dom);
    for (int j = 0; j <= dom.n_modes; ++j) {
        auto s = f.sector(j);
        for (int i = 0; i < dom.nx; ++i) {
            const double decay = std::exp(-0.3 * std::abs(dom.x(i)));
            s[i] = complexd{u(rng) * decay, u(rng) * decay};
        }
    }
    return enforce_symmetry(f);
}
}  // namespace

TEST_CASE("make_domain validates its arguments") {
    const double d1 = analytic::critical_width(1);
    CHECK_NOTHROW(make_domain(20.0, d1, 801, 8));
    CHECK_THROWS_AS(make_domain(20.0, d1, 800, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(5.0, d1, 801, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(20.0, d1, 801, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(20.0, d1, 801, 8, 31), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(20.0, -1.0, 801, 8), std::invalid_argument);

    StripDomain dom = make_domain(20.0, d1, 801, 8);
    CHECK(dom.ny_quad == 32);
    CHECK(dom.x(dom.center()) == doctest::Approx(0.0));
    CHECK(dom.x(0) == doctest::Approx(-20.0));
    CHECK(dom.x(dom.nx - 1) == doctest::Approx(20.0));
}

TEST_CASE("to_physical of pure sectors") {
    StripDomain dom = make_domain(20.0, analytic::critical_width(1), 801, 8);
    SectorField s0 = soliton_field(dom);
    cvector grid = to_physical(s0, 17);
    // sector 0 is y-independent: every row constant in y
    for (int i = 100; i < 700; i += 97)
        for (int r = 0; r < 17; ++r)
            CHECK(std::abs(grid[(size_t)i * 17 + r] - s0.at(0, i)) < 1e-14);

    SectorField c1 = chi_k_field(dom, 1);
    cvector g1 = to_physical(c1, 17);
    // value at y = d/2 is zero (cosine zero), at y = 0 it is i chi0
    const int ic = dom.center();
    CHECK(std::abs(g1[(size_t)ic * 17 + 8]) < 1e-14);
    CHECK(g1[(size_t)ic * 17 + 0] == complexd{0.0, 1.0});
}

TEST_CASE("from_physical picks out orthogonal sectors") {
    StripDomain dom = make_domain(20.0, analytic::critical_width(1), 801, 8);
    SectorField s0 = soliton_field(dom);
    SectorField back = from_physical(to_quadrature_grid(s0), dom);
    for (int j = 1; j <= 8; ++j)
        for (int i = 0; i < dom.nx; ++i) CHECK(std::abs(back.at(j, i)) < 1e-14);

    SectorField c1 = chi_k_field(dom, 1);
    SectorField b1 = from_physical(to_quadrature_grid(c1), dom);
    for (int i = 0; i < dom.nx; ++i) {
        CHECK(std::abs(b1.at(1, i) - c1.at(1, i)) < 1e-14);
        CHECK(std::abs(b1.at(0, i)) < 1e-14);
        CHECK(std::abs(b1.at(2, i)) < 1e-14);
    }
}

TEST_CASE("round trip through the quadrature grid is exact for band-limited fields") {
    StripDomain dom = make_domain(20.0, analytic::critical_width(1), 401, 6);
    SectorField f = random_symmetric_field(dom, 7);
    SectorField back = from_physical(to_quadrature_grid(f), dom);
    double err = 0.0;
    for (size_t i = 0; i < f.coeffs().size(); ++i)
        err = std::max(err, std::abs(f.coeffs()[i] - back.coeffs()[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("enforce_symmetry projects and is idempotent") {
    StripDomain dom = make_domain(20.0, analytic::critical_width(1), 801, 4);
    // soliton field is already in the class
    SectorField s0 = soliton_field(dom);
    SectorField p = enforce_symmetry(s0);
    CHECK((p - s0).max_abs() < 5e-15);  // libm tanh is odd only to the last ulp

    // an even real profile is annihilated
    SectorField even(dom);
    for (int i = 0; i < dom.nx; ++i)
        even.at(0, i) = complexd{analytic::chi0(dom.x(i)), 0.0};
    SectorField q = enforce_symmetry(even);
    CHECK(q.max_abs() < 1e-15);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SectorField f(dom);
    for (auto& c : f.coeffs()) c = complexd{u(rng), u(rng)};
    SectorField once = enforce_symmetry(f);
    SectorField twice = enforce_symmetry(once);
    CHECK((twice - once).max_abs() < 1e-15);
}

TEST_CASE("reflect_conjugate is an involution fixing the expected fields") {
    StripDomain dom = make_domain(20.0, analytic::critical_width(1), 801, 4);
    SectorField s0 = soliton_field(dom);
    CHECK((reflect_conjugate(s0) - s0).max_abs() < 1e-15);

    // lambda chi_k with odd k is R-invariant
    SectorField c1 = chi_k_field(dom, 1);
    c1 *= 0.3;
    CHECK((reflect_conjugate(c1) - c1).max_abs() < 1e-15);

    SectorField f = random_symmetric_field(dom, 11);
    CHECK((reflect_conjugate(reflect_conjugate(f)) - f).max_abs() < 1e-15);
}

TEST_CASE("Parseval norm matches the physical-grid norm") {
    StripDomain dom = make_domain(20.0, analytic::critical_width(1), 401, 6);
    SectorField f = random_symmetric_field(dom, 23);
    CHECK(parseval_l2(f) == doctest::Approx(physical_l2(f)).epsilon(1e-10));
}

TEST_CASE("chi_k_field validation and pointwise values") {
    StripDomain dom = make_domain(20.0, analytic::critical_width(1), 801, 8);
    CHECK_THROWS_AS(chi_k_field(dom, 9), std::invalid_argument);
    CHECK_THROWS_AS(chi_k_field(dom, 0), std::invalid_argument);
    SectorField c2 = chi_k_field(dom, 2);
    CHECK(c2.at(2, dom.center()) == complexd{0.0, 1.0});
    // symmetry class membership
    CHECK((enforce_symmetry(c2) - c2).max_abs() < 1e-15);
}
