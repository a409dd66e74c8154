#include "curvn/conformal.hpp"

#include <cmath>

namespace curvn {

namespace {

// Inversion of a sample with chain-rule velocity and acceleration in the
// source parameter. rho = |w|^2 with w = x - c.
CurveSample invert_sample(const CurveSample& src, const Vec& c, double r2) {
    const Vec w = src.position - c;
    const Vec& v = src.velocity;
    const Vec& a = src.acceleration;
    const double rho = norm2(w);
    const double rho_p = 2.0 * dot(w, v);
    const double rho_pp = 2.0 * (norm2(v) + dot(w, a));
    const Vec pos = c + w * (r2 / rho);
    const Vec vel = (v / rho - w * (rho_p / (rho * rho))) * r2;
    const Vec acc = (a / rho - v * (2.0 * rho_p / (rho * rho)) +
                     w * (2.0 * rho_p * rho_p / (rho * rho * rho) -
                          rho_pp / (rho * rho))) *
                    r2;
    return {pos, vel, acc};
}

class InvertedClosedNode final : public CurveNode {
public:
    InvertedClosedNode(std::shared_ptr<const CurveNode> src, InversionMap map)
        : src_(std::move(src)), map_(map) {}
    CurveSample eval(double s) const override {
        return invert_sample(src_->eval(s), map_.center, map_.radius * map_.radius);
    }
    Topology topology() const override { return Topology::Closed; }
    int dimension() const override {
        return std::max(src_->dimension(), map_.center.z != 0.0 ? 3 : 2);
    }
    std::string kind() const override { return "inverted"; }

private:
    std::shared_ptr<const CurveNode> src_;
    InversionMap map_;
};

// Open image of a closed curve inverted about one of its own points. The
// seam parameter s* maps to infinity; the image parameter u covers the rest
// of the period through theta = 2 atan(u), s = s* + pi + theta.
class ExceptionalOpenNode final : public CurveNode {
public:
    ExceptionalOpenNode(std::shared_ptr<const CurveNode> src, InversionMap map,
                        double s_star)
        : src_(std::move(src)), map_(map), s_star_(s_star) {}
    CurveSample eval(double u) const override {
        const double theta = 2.0 * std::atan(u);
        const double dtheta = 2.0 / (1.0 + u * u);
        const double d2theta = -4.0 * u / ((1.0 + u * u) * (1.0 + u * u));
        double s = s_star_ + 3.14159265358979323846 + theta;
        s -= kTwoPi * std::floor(s / kTwoPi);
        const CurveSample img =
            invert_sample(src_->eval(s), map_.center, map_.radius * map_.radius);
        return {img.position, img.velocity * dtheta,
                img.acceleration * (dtheta * dtheta) + img.velocity * d2theta};
    }
    Topology topology() const override { return Topology::Open; }
    int dimension() const override {
        return std::max(src_->dimension(), map_.center.z != 0.0 ? 3 : 2);
    }
    std::string kind() const override { return "inverted-open"; }

private:
    std::shared_ptr<const CurveNode> src_;
    InversionMap map_;
    double s_star_;
};

// Closed image of an identified open curve: the source's point at infinity
// maps to the inversion center and closes the seam. Parameter t in [0, 2 pi),
// s = -cot(t/2); beyond |s| > s_switch the source is replaced by its
// asymptote line, whose inversion stays finite in sigma = 1/s.
class ClosedImageNode final : public CurveNode {
public:
    ClosedImageNode(std::shared_ptr<const CurveNode> src, InversionMap map)
        : src_(std::move(src)), map_(map) {
        const double s_far = 1e4;
        const CurveSample far = src_->eval(s_far);
        line_dir_ = far.velocity;
        line_point_ = far.position - far.velocity * s_far;
    }
    CurveSample eval(double t) const override {
        const double half = 0.5 * t;
        const double sin_h = std::sin(half);
        const double cos_h = std::cos(half);
        const double s = (sin_h != 0.0) ? -cos_h / sin_h : -1e300;
        if (std::abs(s) <= s_switch_) {
            const double ds = 0.5 / (sin_h * sin_h);
            const double d2s = -0.5 * cos_h / (sin_h * sin_h * sin_h);
            const CurveSample img =
                invert_sample(src_->eval(s), map_.center, map_.radius * map_.radius);
            return {img.position, img.velocity * ds,
                    img.acceleration * (ds * ds) + img.velocity * d2s};
        }
        // sigma = 1/s = -tan(t/2); P(sigma) = c + r^2 sigma (v + w0 sigma) /
        // (|v|^2 + 2 v.w0 sigma + |w0|^2 sigma^2), smooth through sigma = 0.
        const double sigma = -sin_h / cos_h;
        const double dsigma = -0.5 / (cos_h * cos_h);
        const double d2sigma = -0.5 * sin_h / (cos_h * cos_h * cos_h);
        const double r2 = map_.radius * map_.radius;
        const Vec w0 = line_point_ - map_.center;
        const Vec& v = line_dir_;
        const double a0 = norm2(v);
        const double b0 = 2.0 * dot(v, w0);
        const double c0 = norm2(w0);
        const double den = a0 + b0 * sigma + c0 * sigma * sigma;
        const Vec num = (v + w0 * sigma) * sigma;
        const Vec p = map_.center + num * (r2 / den);
        const Vec dnum = v + w0 * (2.0 * sigma);
        const double dden = b0 + 2.0 * c0 * sigma;
        const Vec dp = (dnum * den - num * dden) * (r2 / (den * den));
        const Vec d2p = (w0 * (2.0 * den) - dnum * (2.0 * dden) -
                         num * (2.0 * c0) + num * (2.0 * dden * dden / den)) *
                        (r2 / (den * den));
        return {p, dp * dsigma, d2p * (dsigma * dsigma) + dp * d2sigma};
    }
    Topology topology() const override { return Topology::Closed; }
    int dimension() const override {
        return std::max(src_->dimension(), map_.center.z != 0.0 ? 3 : 2);
    }
    std::string kind() const override { return "inverted-closed"; }

private:
    std::shared_ptr<const CurveNode> src_;
    InversionMap map_;
    Vec line_point_;
    Vec line_dir_;
    static constexpr double s_switch_ = 1e4;
};

} // namespace

Vec invert_point(const InversionMap& map, const Vec& x) {
    const Vec w = x - map.center;
    const double rho = norm2(w);
    if (rho == 0.0) throw std::domain_error("invert_point: x equals the inversion center");
    return map.center + w * (map.radius * map.radius / rho);
}

std::optional<double> center_parameter(const Curve& curve, const InversionMap& map) {
    const int n = 4096;
    const bool closed = curve.closed();
    const double lo = closed ? 0.0 : -16.0;
    const double hi = closed ? kTwoPi : 16.0;
    double best_s = lo;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double s = closed ? lo + (hi - lo) * i / n : lo + (hi - lo) * i / (n - 1);
        const double d2 = norm2(curve.at(s).position - map.center);
        if (d2 < best_d2) {
            best_d2 = d2;
            best_s = s;
        }
    }
    // Newton refinement of f(s) = |x(s) - c|^2 around the best sample.
    double s = best_s;
    for (int it = 0; it < 60; ++it) {
        const CurveSample c = curve.at(s);
        const Vec w = c.position - map.center;
        const double f1 = 2.0 * dot(c.velocity, w);
        const double f2 = 2.0 * (norm2(c.velocity) + dot(c.acceleration, w));
        if (!(f2 > 0.0)) break;
        const double step = f1 / f2;
        s -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(s))) break;
    }
    const double floor = 1e-9 * curve_diameter(curve);
    if (norm(curve.at(s).position - map.center) < floor) return s;
    return std::nullopt;
}

InversionMap classify(const Curve& curve, const InversionMap& map) {
    InversionMap out = map;
    out.exceptional = center_parameter(curve, map).has_value();
    return out;
}

Curve invert_curve(const Curve& curve, const InversionMap& map) {
    if (!(map.radius > 0.0))
        throw std::invalid_argument("invert_curve: radius must be > 0");
    const std::optional<double> s_star = center_parameter(curve, map);
    if (curve.closed()) {
        if (s_star)
            return Curve(std::make_shared<ExceptionalOpenNode>(curve.node_ptr(), map, *s_star));
        return Curve(std::make_shared<InvertedClosedNode>(curve.node_ptr(), map));
    }
    if (s_star)
        throw std::invalid_argument(
            "invert_curve: inversion of an open curve about one of its own points "
            "is not supported");
    return Curve(std::make_shared<ClosedImageNode>(curve.node_ptr(), map));
}

InversionInvarianceReport check_inversion_invariance(const Curve& curve,
                                                     const InversionMap& map,
                                                     double tol) {
    if (!curve.closed())
        throw exceptional_inversion(
            "open curves close through the inversion center and shift n by 2 pi^2; "
            "use anomaly_check");
    if (center_parameter(curve, map))
        throw exceptional_inversion(
            "inversion center lies on the curve; use anomaly_check");

    InversionInvarianceReport report;
    const Curve image = invert_curve(curve, map);
    report.source_quadrature = curve_number_closed(curve, 1e-8);
    report.image_quadrature = curve_number_closed(image, 1e-8);
    report.n_source = report.source_quadrature.value;
    report.n_image = report.image_quadrature.value;
    report.relative_difference =
        std::abs(report.n_image - report.n_source) / std::max(std::abs(report.n_source), 1.0);
    report.passed = report.relative_difference < tol &&
                    report.source_quadrature.converged && report.image_quadrature.converged;
    return report;
}

AnomalyReport anomaly_check(const Curve& curve, const InversionMap& map, double tol) {
    AnomalyReport report;
    const Curve image = invert_curve(curve, map);  // also checks the configuration
    if (curve.closed()) {
        if (!center_parameter(curve, map))
            throw std::invalid_argument(
                "anomaly_check: the center must lie on a closed source curve");
        report.closed_quadrature = curve_number_closed(curve, 1e-8);
        report.open_quadrature = curve_number_open(image, 1e-6);
    } else {
        report.closed_quadrature = curve_number_closed(image, 1e-8);
        report.open_quadrature = curve_number_open(curve, 1e-6);
    }
    report.n_closed = report.closed_quadrature.value;
    report.n_open = report.open_quadrature.value;
    report.difference = report.n_closed - report.n_open;
    report.deviation = report.difference - kTwoPiSquared;
    report.passed = std::abs(report.deviation) < tol;
    return report;
}

} // namespace curvn
