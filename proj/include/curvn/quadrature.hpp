#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "curvn/curve.hpp"

namespace curvn {

class singular_kernel_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int grid_size = 0;
    bool converged = false;
    std::vector<std::pair<int, double>> trace;  // (grid N, value) per refinement
    // Open curves only:
    double window = 0.0;         // final truncation half-width L
    double tail_estimate = 0.0;  // estimated remainder beyond the window
};

struct TruncationPolicy {
    double initial_window = 8.0;
    double max_window = 128.0;
};

// Transverse-tangent kernel of the curve number:
//   K(s,u) = -2 [ v(s).v(u) - (v(s).D^)(v(u).D^) ] / |D|^2,  D = x(s) - x(u).
// Near the diagonal (|s-u| < 1e-4 of the period scale) the direct formula
// cancels catastrophically and the analytic limit is returned instead.
// Throws singular_kernel_error when well-separated parameters land on nearly
// coincident points (self-intersecting curve).
double kernel(const Curve& curve, double s, double u);

// Direct off-diagonal formula with no diagonal switch or proximity guard.
double kernel_direct(const Curve& curve, double s, double u);

// Exact diagonal limit K(s,s) = |v(s)|^2 kappa(s)^2 / 2.
double kernel_diagonal(const Curve& curve, double s);

// Curve number of a closed curve by the product periodic trapezoidal rule.
// The grid is doubled from 64 until successive values agree to tol (relative,
// with an absolute floor at 1 since n is dimensionless and order one).
QuadratureResult curve_number_closed(const Curve& curve, double tol = 1e-8,
                                     int max_grid = 4096);

// Curve number of an identified open curve: trapezoid on [-L, L]^2 with the
// window grown geometrically until the estimated tail drops below tol.
QuadratureResult curve_number_open(const Curve& curve, double tol = 1e-6,
                                   TruncationPolicy policy = {}, int max_grid = 4096);

// Single fixed-grid evaluation (no validation, no refinement). Used where a
// smooth objective is needed, e.g. finite-difference gradients.
double curve_number_closed_fixed(const Curve& curve, int grid);

struct KernelPoint {
    double s = 0.0;
    double u = 0.0;
    double value = 0.0;  // K(s,u); symmetric, finite on simple curves
};

// Kernel sampled on a grid x grid parameter lattice (closed: one period;
// open: [-8, 8]).
std::vector<KernelPoint> kernel_grid(const Curve& curve, int grid);

// Same grid as CSV with header "s,u,K", LF line endings.
void dump_kernel_grid_csv(const Curve& curve, int grid, std::ostream& out);

} // namespace curvn
