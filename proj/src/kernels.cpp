#include "gpstrip/kernels.hpp"

#include <cmath>
#include <numbers>

namespace gpstrip::kernels {

rvector cosine_table(int n_modes, int ny_quad) {
    rvector t((size_t)(n_modes + 1) * ny_quad);
    for (int j = 0; j <= n_modes; ++j)
        for (int q = 0; q < ny_quad; ++q)
            t[(size_t)j * ny_quad + q] =
                std::cos(std::numbers::pi * j * (q + 0.5) / ny_quad);
    return t;
}

void to_quadrature(std::span<const complexd> coeffs, int n_modes, int nx,
                   std::span<const double> table, int ny_quad,
                   std::span<complexd> phys) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nx; ++i) {
        complexd* row = phys.data() + (size_t)i * ny_quad;
        for (int q = 0; q < ny_quad; ++q) row[q] = complexd{0.0, 0.0};
        for (int j = 0; j <= n_modes; ++j) {
            const complexd c = coeffs[(size_t)j * nx + i];
            if (c == complexd{0.0, 0.0}) continue;
            const double* tj = table.data() + (size_t)j * ny_quad;
            for (int q = 0; q < ny_quad; ++q) row[q] += c * tj[q];
        }
    }
}

void from_quadrature(std::span<const complexd> phys, int n_modes, int nx,
                     std::span<const double> table, int ny_quad,
                     std::span<complexd> coeffs) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nx; ++i) {
        const complexd* row = phys.data() + (size_t)i * ny_quad;
        for (int j = 0; j <= n_modes; ++j) {
            const double* tj = table.data() + (size_t)j * ny_quad;
            complexd acc{0.0, 0.0};
            for (int q = 0; q < ny_quad; ++q) acc += row[q] * tj[q];
            const double fac = (j == 0 ? 1.0 : 2.0) / ny_quad;
            coeffs[(size_t)j * nx + i] = acc * fac;
        }
    }
}

void cubic_term(std::span<const complexd> coeffs, int n_modes, int nx,
                std::span<const double> table, int ny_quad,
                std::span<complexd> out) {
#pragma omp parallel
    {
        cvector row(ny_quad);
#pragma omp for schedule(static)
        for (int i = 0; i < nx; ++i) {
            for (int q = 0; q < ny_quad; ++q) row[q] = complexd{0.0, 0.0};
            for (int j = 0; j <= n_modes; ++j) {
                const complexd c = coeffs[(size_t)j * nx + i];
                if (c == complexd{0.0, 0.0}) continue;
                const double* tj = table.data() + (size_t)j * ny_quad;
                for (int q = 0; q < ny_quad; ++q) row[q] += c * tj[q];
            }
            for (int q = 0; q < ny_quad; ++q) row[q] *= std::norm(row[q]);
            for (int j = 0; j <= n_modes; ++j) {
                const double* tj = table.data() + (size_t)j * ny_quad;
                complexd acc{0.0, 0.0};
                for (int q = 0; q < ny_quad; ++q) acc += row[q] * tj[q];
                const double fac = (j == 0 ? 1.0 : 2.0) / ny_quad;
                out[(size_t)j * nx + i] = acc * fac;
            }
        }
    }
}

void to_physical(std::span<const complexd> coeffs, int n_modes, int nx, int ny,
                 std::span<complexd> phys) {
    rvector table((size_t)(n_modes + 1) * ny);
    for (int j = 0; j <= n_modes; ++j)
        for (int r = 0; r < ny; ++r)
            table[(size_t)j * ny + r] = std::cos(std::numbers::pi * j * r / (ny - 1));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nx; ++i) {
        complexd* row = phys.data() + (size_t)i * ny;
        for (int r = 0; r < ny; ++r) row[r] = complexd{0.0, 0.0};
        for (int j = 0; j <= n_modes; ++j) {
            const complexd c = coeffs[(size_t)j * nx + i];
            const double* tj = table.data() + (size_t)j * ny;
            for (int r = 0; r < ny; ++r) row[r] += c * tj[r];
        }
    }
}

namespace ref {

void to_quadrature(std::span<const complexd> coeffs, int n_modes, int nx,
                   std::span<const double> table, int ny_quad,
                   std::span<complexd> phys) {
    for (int i = 0; i < nx; ++i)
        for (int q = 0; q < ny_quad; ++q) {
            complexd acc{0.0, 0.0};
            for (int j = 0; j <= n_modes; ++j)
                acc += coeffs[(size_t)j * nx + i] * table[(size_t)j * ny_quad + q];
            phys[(size_t)i * ny_quad + q] = acc;
        }
}

void from_quadrature(std::span<const complexd> phys, int n_modes, int nx,
                     std::span<const double> table, int ny_quad,
                     std::span<complexd> coeffs) {
    for (int j = 0; j <= n_modes; ++j)
        for (int i = 0; i < nx; ++i) {
            complexd acc{0.0, 0.0};
            for (int q = 0; q < ny_quad; ++q)
                acc += phys[(size_t)i * ny_quad + q] * table[(size_t)j * ny_quad + q];
            coeffs[(size_t)j * nx + i] = acc * ((j == 0 ? 1.0 : 2.0) / ny_quad);
        }
}

void cubic_term(std::span<const complexd> coeffs, int n_modes, int nx,
                std::span<const double> table, int ny_quad,
                std::span<complexd> out) {
    cvector phys((size_t)nx * ny_quad);
    to_quadrature(coeffs, n_modes, nx, table, ny_quad, phys);
    for (auto& p : phys) p *= std::norm(p);
    from_quadrature(phys, n_modes, nx, table, ny_quad, out);
}

void to_physical(std::span<const complexd> coeffs, int n_modes, int nx, int ny,
                 std::span<complexd> phys) {
    for (int i = 0; i < nx; ++i)
        for (int r = 0; r < ny; ++r) {
            complexd acc{0.0, 0.0};
            for (int j = 0; j <= n_modes; ++j)
                acc += coeffs[(size_t)j * nx + i] *
                       std::cos(std::numbers::pi * j * r / (ny - 1));
            phys[(size_t)i * ny + r] = acc;
        }
}

}  // namespace ref

}  // namespace gpstrip::kernels
