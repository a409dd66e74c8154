#pragma once

#include <string>
#include <vector>

#include "curvn/curve.hpp"

namespace curvn {

struct OptimizeOptions {
    int max_iterations = 400;
    double gradient_tol = 1e-4;
    double fd_step = 1e-4;         // finite-difference step per coefficient
    double quadrature_tol = 1e-6;  // objective tolerance away from convergence
    double penalty = 1e6;          // objective value for invalid loops
};

struct OptimizeIterate {
    FourierLoop loop;
    double n = 0.0;
    double gradient_norm = 0.0;
};

struct OptimizationTrace {
    std::vector<OptimizeIterate> iterates;
    std::string termination;
    bool conjecture_violation = false;  // final n < 2 pi^2 - 1e-3
};

struct OptimizeResult {
    FourierLoop loop;
    double n = 0.0;
    OptimizationTrace trace;
};

// Curve number of the loop at the given quadrature tolerance. Loops that
// fail validation (self-intersection during a search step) get the penalty
// value; *penalized reports which happened.
double objective(const FourierLoop& loop, double quadrature_tol = 1e-6,
                 bool* penalized = nullptr, double penalty = 1e6);

// Central finite differences of the objective per coefficient component
// (layout: a_1.x, a_1.y, b_1.x, b_1.y, a_2.x, ...), evaluated on one fixed
// quadrature grid so the differences stay smooth.
std::vector<double> gradient(const FourierLoop& loop, double fd_step = 1e-4,
                             int grid = 256, double penalty = 1e6);

// Gradient descent with backtracking line search. Scale is fixed after each
// step by renormalizing |a_1|^2 + |b_1|^2 to its circle value 2; the centroid
// is structurally pinned at the origin (no constant Fourier term).
OptimizeResult minimize(const FourierLoop& initial, const OptimizeOptions& options = {});

} // namespace curvn
