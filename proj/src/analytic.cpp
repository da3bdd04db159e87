#include "gpstrip/analytic.hpp"

#include <cmath>
#include <numbers>

#include "gpstrip/banded.hpp"

namespace gpstrip::analytic {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

double soliton(double x) { return std::tanh(x / kSqrt2); }

double soliton_deriv(double x) {
    const double c = 1.0 / std::cosh(x / kSqrt2);
    return c * c / kSqrt2;
}

double chi0(double x) { return 1.0 / std::cosh(x / kSqrt2); }

double critical_width(int k) {
    if (k < 1) throw std::invalid_argument("critical_width: k must be >= 1");
    return kSqrt2 * std::numbers::pi * k;
}

double u_star(double x) {
    const double c = 1.0 / std::cosh(x / kSqrt2);
    return -x * c * c / (2.0 * kSqrt2);
}

double u_star_xx(double x) {
    // Closed-form second derivative of -x c^2 / (2 sqrt2), c = sech(x/sqrt2):
    // U'' = -(1/(2 sqrt2)) (-2 sqrt2 c^2 s + 2 x c^2 s^2 - x c^4)
    const double c = 1.0 / std::cosh(x / kSqrt2);
    const double s = std::tanh(x / kSqrt2);
    return -(-2.0 * kSqrt2 * c * c * s + 2.0 * x * c * c * s * s - x * c * c * c * c) /
           (2.0 * kSqrt2);
}

double u_star_ode_residual(double x) {
    const double c = 1.0 / std::cosh(x / kSqrt2);
    const double s = std::tanh(x / kSqrt2);
    const double u = u_star(x);
    return -u_star_xx(x) - u * c * c + 2.0 * u * s * s + s * c * c;
}

rvector deriv4(std::span<const double> f, double h) {
    const int n = (int)f.size();
    rvector d(n);
    for (int i = 2; i < n - 2; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    auto onesided = [&](int i, int dir) {
        return dir * (-25.0 * f[i] + 48.0 * f[i + dir] - 36.0 * f[i + 2 * dir] +
                      16.0 * f[i + 3 * dir] - 3.0 * f[i + 4 * dir]) / (12.0 * h);
    };
    d[0] = onesided(0, 1);
    d[1] = onesided(1, 1);
    d[n - 1] = onesided(n - 1, -1);
    d[n - 2] = onesided(n - 2, -1);
    return d;
}

cvector deriv4(std::span<const complexd> f, double h) {
    const int n = (int)f.size();
    rvector re(n), im(n);
    for (int i = 0; i < n; ++i) { re[i] = f[i].real(); im[i] = f[i].imag(); }
    rvector dre = deriv4(re, h), dim = deriv4(im, h);
    cvector d(n);
    for (int i = 0; i < n; ++i) d[i] = {dre[i], dim[i]};
    return d;
}

rvector solve_v(int nx, double half_length) {
    const double h = 2.0 * half_length / (nx - 1);
    rvector diag(nx), lower(nx - 1, -1.0 / (h * h)), upper(nx - 1, -1.0 / (h * h));
    rvector rhs(nx);
    for (int i = 0; i < nx; ++i) {
        const double x = -half_length + i * h;
        const double c = chi0(x);
        diag[i] = 2.0 / (h * h) + 4.0 - 3.0 * c * c;
        rhs[i] = -soliton(x) * c * c;
    }
    upper[0] = -2.0 / (h * h);        // Neumann fold at -L
    lower[nx - 2] = -2.0 / (h * h);   // Neumann fold at +L
    return solve_tridiag(std::move(diag), std::move(lower), std::move(upper),
                         std::move(rhs));
}

Coefficients compute_coefficients(int nx, double half_length) {
    if (nx < 3 || nx % 2 == 0) throw std::invalid_argument("nx must be odd and >= 3");
    const double h = 2.0 * half_length / (nx - 1);
    const rvector v = solve_v(nx, half_length);

    rvector c2(nx), c4(nx), svc2(nx), edens(nx);
    for (int i = 0; i < nx; ++i) {
        const double x = -half_length + i * h;
        const double c = chi0(x), s = soliton(x);
        c2[i] = c * c;
        c4[i] = c * c * c * c;
        svc2[i] = s * v[i] * c * c;
        const double sp = soliton_deriv(x);
        edens[i] = 0.5 * sp * sp + 0.25 * (1.0 - s * s) * (1.0 - s * s);
    }

    Coefficients out;
    out.int_chi0_sq = simpson(c2, h);
    out.int_chi0_4 = simpson(c4, h);
    out.cross_term = simpson(svc2, h);
    out.soliton_energy_density = simpson(edens, h);
    out.omega = 33.0 / 4.0 * out.int_chi0_4 + 3.0 * out.cross_term;
    out.lambda_coeff = std::sqrt(12.0 * kSqrt2 / out.omega);

    rvector num(nx), den(nx);
    for (int i = 0; i < nx; ++i) {
        num[i] = 5.0 * c4[i] + 12.0 * svc2[i];
        den[i] = 11.0 * c4[i] + 4.0 * svc2[i];
    }
    out.energy_coeff = out.lambda_coeff * out.lambda_coeff / kSqrt2 *
                       (1.0 - simpson(num, h) / (2.0 * simpson(den, h)));

    const double slack = 1e-8;
    if (out.omega < 21.0 / 4.0 * out.int_chi0_4 - slack)
        throw std::runtime_error("coefficients: omega bound violated");
    if (-out.cross_term < -slack || -out.cross_term > out.int_chi0_4 + slack)
        throw std::runtime_error("coefficients: cross-term bound violated");
    if (out.energy_coeff <
        9.0 * out.lambda_coeff * out.lambda_coeff / (14.0 * kSqrt2) - slack)
        throw std::runtime_error("coefficients: energy coefficient bound violated");
    return out;
}

double h_norm(const StripDomain& dom, std::span<const complexd> f) {
    const double h = dom.h();
    cvector df = deriv4(f, h);
    rvector integrand(dom.nx);
    for (int i = 0; i < dom.nx; ++i) {
        const double s = soliton(dom.x(i));
        integrand[i] = std::norm(df[i]) + (1.0 - s * s) * std::norm(f[i]);
    }
    return std::sqrt(simpson(integrand, h));
}

double gl_distance(const StripDomain& dom, std::span<const complexd> f,
                   std::span<const complexd> g) {
    const double h = dom.h();
    cvector diff(dom.nx);
    rvector eta2(dom.nx);
    for (int i = 0; i < dom.nx; ++i) {
        diff[i] = f[i] - g[i];
        const double e = std::norm(g[i]) - std::norm(f[i]);
        eta2[i] = e * e;
    }
    const double hn = h_norm(dom, diff);
    return std::sqrt(hn * hn + simpson(eta2, h));
}

}  // namespace gpstrip::analytic
