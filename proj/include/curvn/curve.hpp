#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvn/vec.hpp"

namespace curvn {

// All closed curves are parameterized with period 2*pi; open curves take any
// real parameter (straight asymptotes extend analytically defined pieces).
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class Topology { Closed, Open };

struct CurveSample {
    Vec position;
    Vec velocity;      // dx/ds
    Vec acceleration;  // d2x/ds2
};

class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Truncated Fourier parameterization of a closed plane curve:
//   x(s) = sum_k a_k cos(k s) + b_k sin(k s),  k = 1..M.
// No constant term, so the centroid sits at the origin.
struct FourierLoop {
    std::vector<Vec> cos_coeffs;  // a_k
    std::vector<Vec> sin_coeffs;  // b_k

    int harmonics() const { return static_cast<int>(cos_coeffs.size()); }
    static FourierLoop circle(double radius = 1.0, int harmonics = 1);
};

struct CircleParams { Vec center; double radius = 1.0; };
struct EllipseParams { double semi_major = 1.0; double eccentricity = 0.0; Vec center; };
struct LineParams { Vec point; Vec direction{1, 0, 0}; };
struct BumpParams { double amplitude = 1.0; double width = 1.0; };
struct SplineData { std::vector<Vec> points; bool closed = false; };

class CurveNode {
public:
    virtual ~CurveNode() = default;
    virtual CurveSample eval(double s) const = 0;  // s already folded for closed curves
    virtual Topology topology() const = 0;
    virtual int dimension() const = 0;
    virtual std::string kind() const = 0;
};

// Value-semantic handle to an immutable curve. Evaluation is pure and
// thread-safe; combinators share the underlying nodes.
class Curve {
public:
    explicit Curve(std::shared_ptr<const CurveNode> node) : node_(std::move(node)) {}

    // Folds the parameter by the period for closed curves, then evaluates
    // position, velocity and acceleration. Throws on non-finite parameters.
    CurveSample at(double s) const;

    Topology topology() const { return node_->topology(); }
    bool closed() const { return topology() == Topology::Closed; }
    int dimension() const { return node_->dimension(); }
    std::string kind() const { return node_->kind(); }
    const CurveNode& node() const { return *node_; }
    std::shared_ptr<const CurveNode> node_ptr() const { return node_; }

    // Built-in families.
    static Curve circle(Vec center, double radius);
    static Curve ellipse(double semi_major, double eccentricity, Vec center = {});
    static Curve line(Vec point, Vec direction);
    static Curve open_bump(double amplitude, double width);
    static Curve fourier(FourierLoop loop);

    // Rigid motions, scaling and parameter changes. They evaluate lazily by
    // composing with the source curve.
    Curve translated(Vec offset) const;
    Curve rotated(double angle) const;            // about the z axis
    Curve rotated(Vec axis, double angle) const;  // general 3-D rotation
    Curve scaled(double factor) const;
    Curve reversed() const;                       // s -> -s
    // s -> s + amplitude*sin(harmonic*s); closed curves only,
    // requires |amplitude*harmonic| < 1 so the map stays monotone.
    Curve reparameterized(double amplitude = 0.3, int harmonic = 1) const;

    // Parameter descriptions of the serializable kinds (empty otherwise).
    std::optional<CircleParams> as_circle() const;
    std::optional<EllipseParams> as_ellipse() const;
    std::optional<LineParams> as_line() const;
    std::optional<BumpParams> as_bump() const;
    std::optional<FourierLoop> as_fourier() const;
    std::optional<SplineData> as_spline() const;

private:
    std::shared_ptr<const CurveNode> node_;
};

// kappa(s) = |a_perp| / |v|^2. Throws on vanishing velocity.
double curvature(const Curve& curve, double s);

// C2 cubic spline through the given points: periodic when closed, natural
// ends (with straight extensions beyond the end knots) when open. Requires
// at least 4 distinct points; consecutive duplicates are rejected.
Curve fit_spline(std::span<const Vec> points, bool closed);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool passed() const;
    std::string summary() const;  // single line, failed checks first
};

struct ValidationOptions {
    int samples = 2048;            // sample count for regularity/simpleness scans
    double open_window = 16.0;     // open curves are scanned on [-w, w]
    double direction_tol = 1e-6;   // radians; asymptote identification
};

// Checks, in order: regularity, seam smoothness (closed), asymptote
// direction agreement (open), simpleness. Failures are reported, not thrown.
ValidationReport validate(const Curve& curve, const ValidationOptions& options = {});

// Sampled diameter estimate (max extent over a coarse scan). Used for the
// self-intersection proximity floor.
double curve_diameter(const Curve& curve);

} // namespace curvn
