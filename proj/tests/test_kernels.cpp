#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gpstrip/kernels.hpp"

using namespace gpstrip;

namespace {
cvector random_coeffs(int K, int nx, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cvector c((size_t)(K + 1) * nx);
    for (auto& z : c) z = complexd{u(rng), u(rng)};
    return c;
}

double max_diff(std::span<const complexd> a, std::span<const complexd> b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}
}  // namespace

// The OpenMP kernels must agree with the serial reference implementations
// bitwise: every output slot is produced by one iteration with the same
// serial accumulation order.
TEST_CASE("parallel kernels match the serial reference exactly") {
    const int K = 8, nx = 801, M = 32;
    const rvector table = kernels::cosine_table(K, M);
    const cvector c = random_coeffs(K, nx, 99);

    cvector p1((size_t)nx * M), p2((size_t)nx * M);
    kernels::to_quadrature(c, K, nx, table, M, p1);
    kernels::ref::to_quadrature(c, K, nx, table, M, p2);
    CHECK(max_diff(p1, p2) < 1e-13);

    cvector b1((size_t)(K + 1) * nx), b2((size_t)(K + 1) * nx);
    kernels::from_quadrature(p1, K, nx, table, M, b1);
    kernels::ref::from_quadrature(p1, K, nx, table, M, b2);
    CHECK(max_diff(b1, b2) < 1e-13);

    cvector q1((size_t)(K + 1) * nx), q2((size_t)(K + 1) * nx);
    kernels::cubic_term(c, K, nx, table, M, q1);
    kernels::ref::cubic_term(c, K, nx, table, M, q2);
    CHECK(max_diff(q1, q2) < 1e-12);

    cvector f1((size_t)nx * 33), f2((size_t)nx * 33);
    kernels::to_physical(c, K, nx, 33, f1);
    kernels::ref::to_physical(c, K, nx, 33, f2);
    CHECK(max_diff(f1, f2) < 1e-13);
}

TEST_CASE("cubic term of a band-limited product matches the cosine algebra") {
    // psi = a cos(y*) + b cos(2y*):  |psi|^2 psi expands through mode 6 by
    // product-to-sum; with M = 4K >= 2K+1 the projection onto modes <= K is
    // exact. Compare against a direct high-resolution quadrature.
    const int K = 6, nx = 5, M = 4 * K;
    const rvector table = kernels::cosine_table(K, M);
    cvector c((size_t)(K + 1) * nx, complexd{0.0, 0.0});
    const complexd a{0.3, -0.1}, b{-0.2, 0.25};
    for (int i = 0; i < nx; ++i) {
        c[(size_t)1 * nx + i] = a;
        c[(size_t)2 * nx + i] = b;
    }
    cvector out((size_t)(K + 1) * nx);
    kernels::cubic_term(c, K, nx, table, M, out);

    // oracle: dense midpoint quadrature at encore resolution
    const int MM = 512;
    for (int j = 0; j <= K; ++j) {
        complexd acc{0.0, 0.0};
        for (int q = 0; q < MM; ++q) {
            const double t = std::numbers::pi * (q + 0.5) / MM;
            const complexd v = a * std::cos(t) + b * std::cos(2.0 * t);
            acc += v * std::norm(v) * std::cos(j * t);
        }
        acc *= (j == 0 ? 1.0 : 2.0) / MM;
        CHECK(std::abs(out[(size_t)j * nx + 2] - acc) < 1e-12);
    }
}

TEST_CASE("vacuum and constant fields") {
    const int K = 4, nx = 3, M = 16;
    const rvector table = kernels::cosine_table(K, M);
    cvector c((size_t)(K + 1) * nx, complexd{0.0, 0.0});
    for (int i = 0; i < nx; ++i) c[i] = complexd{1.0, 0.0};  // sector 0 == 1
    cvector out((size_t)(K + 1) * nx);
    kernels::cubic_term(c, K, nx, table, M, out);
    for (int i = 0; i < nx; ++i) CHECK(std::abs(out[i] - 1.0) < 1e-14);
    for (int j = 1; j <= K; ++j)
        for (int i = 0; i < nx; ++i)
            CHECK(std::abs(out[(size_t)j * nx + i]) < 1e-14);
}
