#include "curvn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "curvn/reduce.hpp"

namespace curvn {

namespace {

// Sampled curve data laid out for the hot loop.
struct GridSamples {
    std::vector<Vec> pos;
    std::vector<Vec> vel;
    std::vector<double> diag;  // kernel diagonal value per sample
};

double diagonal_value(const CurveSample& c) {
    const double v2 = norm2(c.velocity);
    const double av = dot(c.acceleration, c.velocity);
    const double aperp2 = norm2(c.acceleration) - av * av / v2;
    return aperp2 / (2.0 * v2);  // == |v|^2 kappa^2 / 2
}

double kernel_value(const Vec& xs, const Vec& vs, const Vec& xu, const Vec& vu) {
    const Vec d = xs - xu;
    const double d2 = norm2(d);
    const double a = dot(vs, d);
    const double b = dot(vu, d);
    return (2.0 * a * b / d2 - 2.0 * dot(vs, vu)) / d2;
}

GridSamples sample_closed(const Curve& curve, int n) {
    GridSamples g;
    g.pos.resize(n);
    g.vel.resize(n);
    g.diag.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const CurveSample c = curve.at(kTwoPi * static_cast<double>(i) / n);
        g.pos[i] = c.position;
        g.vel[i] = c.velocity;
        g.diag[i] = diagonal_value(c);
    });
    return g;
}

GridSamples sample_open(const Curve& curve, double window, int n) {
    GridSamples g;
    g.pos.resize(n);
    g.vel.resize(n);
    g.diag.resize(n);
    const double h = 2.0 * window / (n - 1);
    parallel_for(n, [&](std::size_t i) {
        const CurveSample c = curve.at(-window + h * static_cast<double>(i));
        g.pos[i] = c.position;
        g.vel[i] = c.velocity;
        g.diag[i] = diagonal_value(c);
    });
    return g;
}

// Sums the kernel over the product grid with the given 1-D weights. Rows are
// evaluated in parallel; the reduction order (pairwise within each row, then
// pairwise over row sums) is fixed, so the result does not depend on the
// worker count.
double weighted_grid_sum(const GridSamples& g, const std::vector<double>& w) {
    const int n = static_cast<int>(g.pos.size());
    std::vector<double> row_sums(n);
    parallel_for(n, [&](std::size_t i) {
        static thread_local std::vector<double> row;
        row.resize(n);
        const Vec xi = g.pos[i];
        const Vec vi = g.vel[i];
        for (int j = 0; j < n; ++j)
            row[j] = (static_cast<int>(i) == j)
                         ? g.diag[i] * w[j]
                         : kernel_value(xi, vi, g.pos[j], g.vel[j]) * w[j];
        row_sums[i] = w[i] * pairwise_sum(row);
    });
    return pairwise_sum(row_sums);
}

double closed_grid_value(const Curve& curve, int n) {
    const GridSamples g = sample_closed(curve, n);
    const std::vector<double> w(n, kTwoPi / n);
    return weighted_grid_sum(g, w);
}

double open_grid_value(const Curve& curve, double window, int n) {
    const GridSamples g = sample_open(curve, window, n);
    const double h = 2.0 * window / (n - 1);
    std::vector<double> w(n, h);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return weighted_grid_sum(g, w);
}

bool close_enough(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
}

void require_valid(const Curve& curve) {
    const ValidationReport report = validate(curve);
    if (!report.passed())
        throw validation_error("curve validation failed: " + report.summary());
}

} // namespace

double kernel_direct(const Curve& curve, double s, double u) {
    const CurveSample a = curve.at(s);
    const CurveSample b = curve.at(u);
    return kernel_value(a.position, a.velocity, b.position, b.velocity);
}

double kernel_diagonal(const Curve& curve, double s) {
    return diagonal_value(curve.at(s));
}

double kernel(const Curve& curve, double s, double u) {
    double sep = std::abs(s - u);
    double scale = kTwoPi;
    if (curve.closed()) {
        sep = std::fmod(sep, kTwoPi);
        sep = std::min(sep, kTwoPi - sep);
    }
    if (sep < 1e-4 * scale) return kernel_diagonal(curve, 0.5 * (s + u));

    const CurveSample a = curve.at(s);
    const CurveSample b = curve.at(u);
    const double min_sep = curve.closed() ? kTwoPi / 20.0 : 0.5;
    if (sep > min_sep) {
        const double floor = 1e-3 * curve_diameter(curve);
        if (norm(a.position - b.position) < floor)
            throw singular_kernel_error("kernel singular: curve nearly self-intersects");
    }
    return kernel_value(a.position, a.velocity, b.position, b.velocity);
}

QuadratureResult curve_number_closed(const Curve& curve, double tol, int max_grid) {
    if (!curve.closed())
        throw std::invalid_argument("curve_number_closed: curve is not closed");
    require_valid(curve);
    max_grid = std::max(max_grid, 64);

    QuadratureResult result;
    double prev = 0.0;
    for (int n = 64; n <= max_grid; n *= 2) {
        const double value = closed_grid_value(curve, n);
        result.trace.emplace_back(n, value);
        result.grid_size = n;
        if (n > 64) {
            result.error_estimate = std::abs(value - prev);
            if (close_enough(value, prev, tol)) {
                result.value = value;
                result.converged = true;
                return result;
            }
        }
        prev = value;
        result.value = value;
    }
    result.converged = false;
    return result;
}

QuadratureResult curve_number_open(const Curve& curve, double tol,
                                   TruncationPolicy policy, int max_grid) {
    if (curve.closed())
        throw std::invalid_argument("curve_number_open: curve is closed");
    require_valid(curve);
    max_grid = std::max(max_grid, 128);

    QuadratureResult result;
    // Inner grid refinement at a fixed window; the recorded trace carries one
    // entry per window so its deltas track the truncation tail.
    auto value_at_window = [&](double window) {
        double prev = 0.0;
        double value = 0.0;
        for (int n = 129; n <= max_grid + 1; n = 2 * (n - 1) + 1) {
            value = open_grid_value(curve, window, n);
            result.grid_size = n;
            if (n > 129) {
                result.error_estimate = std::abs(value - prev);
                if (close_enough(value, prev, 0.25 * tol)) return value;
            }
            prev = value;
        }
        return value;  // grid ceiling reached; window loop still judges the tail
    };

    double prev_increment = -1.0;
    double prev_value = 0.0;
    bool have_prev = false;
    for (double window = policy.initial_window; window <= policy.max_window; window *= 2) {
        const double value = value_at_window(window);
        result.trace.emplace_back(result.grid_size, value);
        result.window = window;
        result.value = value;
        if (have_prev) {
            const double increment = std::abs(value - prev_value);
            // Estimate the remaining tail from the measured decay ratio of
            // the window increments (geometric once the asymptote is reached).
            double tail = increment;
            if (prev_increment > 0.0 && increment > 0.0) {
                const double ratio = prev_increment / increment;
                if (ratio > 1.5) tail = increment / (ratio - 1.0);
            }
            result.tail_estimate = tail;
            const double floor = std::max(std::abs(value), 1.0);
            if (tail <= tol * floor) {
                result.converged = true;
                return result;
            }
            if (increment > prev_increment && prev_increment >= 0.0 &&
                increment > tol * floor) {
                // tail not decreasing: flag and stop rather than chase it
                result.converged = false;
                return result;
            }
            prev_increment = increment;
        } else {
            have_prev = true;
            prev_increment = -1.0;
        }
        prev_value = value;
    }
    result.converged = false;
    return result;
}

double curve_number_closed_fixed(const Curve& curve, int grid) {
    return closed_grid_value(curve, grid);
}

std::vector<KernelPoint> kernel_grid(const Curve& curve, int grid) {
    const bool closed = curve.closed();
    const double lo = closed ? 0.0 : -8.0;
    const double span = closed ? kTwoPi : 16.0;
    std::vector<KernelPoint> points;
    points.reserve(static_cast<std::size_t>(grid) * grid);
    for (int i = 0; i < grid; ++i) {
        const double s = lo + span * (closed ? i / double(grid) : i / double(grid - 1));
        for (int j = 0; j < grid; ++j) {
            const double u = lo + span * (closed ? j / double(grid) : j / double(grid - 1));
            points.push_back({s, u, kernel(curve, s, u)});
        }
    }
    return points;
}

void dump_kernel_grid_csv(const Curve& curve, int grid, std::ostream& out) {
    out << "s,u,K\n";
    char line[128];
    for (const KernelPoint& p : kernel_grid(curve, grid)) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p.s, p.u, p.value);
        out << line;
    }
}

} // namespace curvn
