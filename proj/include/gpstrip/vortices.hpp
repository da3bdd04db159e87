#pragma once

#include "gpstrip/field.hpp"

namespace gpstrip::vortices {

struct Vortex {
    double x = 0.0;
    double y = 0.0;
    int degree = 0;
    bool refined = true;  // false when the 2-D Newton refinement stalled
};

struct VortexSet {
    std::vector<Vortex> entries;
    bool degenerate_line = false;  // |Psi| vanishes along x = 0 (soliton)
};

/// Pointwise field value and Jacobian at arbitrary (x, y): cubic Lagrange
/// interpolation of the sector coefficients in x, analytic cosine sums in y.
complexd eval_field(const SectorField& f, double x, double y);
void eval_field_jacobian(const SectorField& f, double x, double y, complexd& value,
                         complexd& dx, complexd& dy);

/// Scans the physical grid for simultaneous sign changes of Re and Im,
/// refines candidates by a 2-D Newton, deduplicates, and applies an
/// isolation check (|Psi| above `floor` on a surrounding circle) to filter
/// the soliton's degenerate nodal line.
VortexSet find_zeros(const SectorField& f, double refine_tol = 1e-10,
                     double floor = 1e-3);

/// Phase winding of Psi along a circle (counterclockwise in (x, y)),
/// rounded to the nearest integer. Throws if the total increment is farther
/// than 0.2 * 2 pi from an integer.
int winding_number(const SectorField& f, double cx, double cy, double radius,
                   int n_points = 128);

/// find_zeros + winding_number per isolated zero.
VortexSet detect_vortices(const SectorField& f, double radius = 0.3);

}  // namespace gpstrip::vortices
