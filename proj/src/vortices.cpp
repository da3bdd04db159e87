#include "gpstrip/vortices.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gpstrip::vortices {

namespace {
// cubic Lagrange interpolation of one sector coefficient and its derivative
void interp_sector(std::span<const complexd> c, const StripDomain& dom, double x,
                   complexd& val, complexd& deriv) {
    const double h = dom.h();
    int i1 = (int)std::floor((x + dom.half_length) / h);
    i1 = std::clamp(i1, 1, dom.nx - 3);
    const double t = (x - dom.x(i1)) / h;  // in [0,1] within the central cell
    const complexd f0 = c[i1 - 1], f1 = c[i1], f2 = c[i1 + 1], f3 = c[i1 + 2];
    // Lagrange basis on nodes -1, 0, 1, 2
    const double l0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double l1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double l2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double l3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    val = f0 * l0 + f1 * l1 + f2 * l2 + f3 * l3;
    const double d0 = -(3.0 * t * t - 6.0 * t + 2.0) / 6.0;
    const double d1 = (3.0 * t * t - 4.0 * t - 1.0) / 2.0;
    const double d2 = -(3.0 * t * t - 2.0 * t - 2.0) / 2.0;
    const double d3 = (3.0 * t * t - 1.0) / 6.0;
    deriv = (f0 * d0 + f1 * d1 + f2 * d2 + f3 * d3) / h;
}
}  // namespace

complexd eval_field(const SectorField& f, double x, double y) {
    complexd v, dx, dy;
    eval_field_jacobian(f, x, y, v, dx, dy);
    return v;
}

void eval_field_jacobian(const SectorField& f, double x, double y, complexd& value,
                         complexd& dx, complexd& dy) {
    const StripDomain& dom = f.domain();
    value = dx = dy = complexd{0.0, 0.0};
    for (int j = 0; j <= dom.n_modes; ++j) {
        complexd cj, dcj;
        interp_sector(f.sector(j), dom, x, cj, dcj);
        const double arg = std::numbers::pi * j * y / dom.width;
        const double cy = std::cos(arg);
        const double sy = std::sin(arg);
        value += cj * cy;
        dx += dcj * cy;
        dy -= cj * (std::numbers::pi * j / dom.width) * sy;
    }
}

VortexSet find_zeros(const SectorField& f, double refine_tol, double floor) {
    const StripDomain& dom = f.domain();
    VortexSet out;
    const int ny = std::max(65, 8 * dom.n_modes + 1);
    cvector grid = to_physical(f, ny);
    const double dy = dom.width / (ny - 1);
    const double h = dom.h();

    auto corner = [&](int i, int r) { return grid[(size_t)i * ny + r]; };

    std::vector<std::pair<double, double>> candidates;
    for (int i = 0; i + 1 < dom.nx; ++i)
        for (int r = 0; r + 1 < ny; ++r) {
            const complexd c00 = corner(i, r), c10 = corner(i + 1, r),
                           c01 = corner(i, r + 1), c11 = corner(i + 1, r + 1);
            auto changes = [](double a, double b, double c, double d) {
                const double lo = std::min({a, b, c, d});
                const double hi = std::max({a, b, c, d});
                return lo <= 0.0 && hi >= 0.0;
            };
            if (!changes(c00.real(), c10.real(), c01.real(), c11.real())) continue;
            if (!changes(c00.imag(), c10.imag(), c01.imag(), c11.imag())) continue;
            candidates.emplace_back(dom.x(i) + 0.5 * h, (r + 0.5) * dy);
        }

    for (auto [x0, y0] : candidates) {
        double x = x0, y = y0;
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            complexd v, vx, vy;
            eval_field_jacobian(f, x, y, v, vx, vy);
            if (std::abs(v) < refine_tol) {
                ok = true;
                break;
            }
            const double det = vx.real() * vy.imag() - vy.real() * vx.imag();
            if (std::abs(det) < 1e-14) break;
            const double dxs = (v.real() * vy.imag() - vy.real() * v.imag()) / det;
            const double dys = (vx.real() * v.imag() - v.real() * vx.imag()) / det;
            x -= dxs;
            y -= dys;
            if (std::abs(x - x0) > 2.0 * h || std::abs(y - y0) > 2.0 * dy) break;
        }
        if (!ok) {
            x = x0;
            y = y0;
        }
        // isolation pre-check distinguishes point vortices from the
        // soliton's nodal line: |Psi| must clear a floor on a ring. The ring
        // is sampled densely enough that a nodal-line crossing cannot slip
        // between samples (spacing ~ 2 pi r / N times |grad Psi| ~ 1e-3).
        double ring_min = 1e9;
        const double rad = 4.0 * h;
        const int nring = 1024;
        for (int p = 0; p < nring; ++p) {
            const double th = 2.0 * std::numbers::pi * p / nring;
            double yy = y + rad * std::sin(th);
            yy = std::clamp(yy, 0.0, dom.width);
            ring_min = std::min(ring_min,
                                std::abs(eval_field(f, x + rad * std::cos(th), yy)));
        }
        if (ring_min < floor) {
            out.degenerate_line = true;
            continue;
        }
        bool dup = false;
        for (const auto& v : out.entries)
            if (std::abs(v.x - x) < 2.0 * h && std::abs(v.y - y) < 2.0 * dy) dup = true;
        if (dup) continue;
        out.entries.push_back({x, y, 0, ok});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const Vortex& a, const Vortex& b) { return a.y < b.y; });
    return out;
}

int winding_number(const SectorField& f, double cx, double cy, double radius,
                   int n_points) {
    if (n_points < 64) n_points = 64;
    double total = 0.0;
    complexd prev = eval_field(f, cx + radius, cy);
    double min_mag = std::abs(prev);
    for (int p = 1; p <= n_points; ++p) {
        const double th = 2.0 * std::numbers::pi * p / n_points;
        const complexd cur =
            eval_field(f, cx + radius * std::cos(th), cy + radius * std::sin(th));
        min_mag = std::min(min_mag, std::abs(cur));
        total += std::arg(cur / prev);
        prev = cur;
    }
    if (min_mag < 1e-12) {
        std::ostringstream os;
        os << "winding_number: |Psi| = " << min_mag
           << " on the contour (zero on or near the contour)";
        throw std::runtime_error(os.str());
    }
    const double w = total / (2.0 * std::numbers::pi);
    const double nearest = std::round(w);
    if (!std::isfinite(w) || std::abs(w - nearest) > 0.2) {
        std::ostringstream os;
        os << "winding_number: phase increment " << w
           << " is not close to an integer (zero on or near the contour?)";
        throw std::runtime_error(os.str());
    }
    return (int)nearest;
}

VortexSet detect_vortices(const SectorField& f, double radius) {
    VortexSet set = find_zeros(f);
    const double d = f.domain().width;
    for (auto& v : set.entries) {
        if (!v.refined) continue;
        double r = radius;
        // keep the contour inside the strip and away from other zeros
        r = std::min({r, v.y > 0 ? v.y : radius, d - v.y > 0 ? d - v.y : radius});
        for (const auto& o : set.entries)
            if (&o != &v) {
                const double dist = std::hypot(o.x - v.x, o.y - v.y);
                if (dist > 1e-12) r = std::min(r, 0.45 * dist);
            }
        if (r < 1e-3) r = 1e-3;
        v.degree = winding_number(f, v.x, v.y, r);
    }
    return set;
}

}  // namespace gpstrip::vortices
