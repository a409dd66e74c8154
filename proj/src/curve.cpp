#include "curvn/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace curvn {

namespace {

double fold_period(double s) {
    double f = s - kTwoPi * std::floor(s / kTwoPi);
    if (f >= kTwoPi) f -= kTwoPi;  // guard against floor rounding at the seam
    return f;
}

int dim_of(const Vec& v) { return v.z != 0.0 ? 3 : 2; }

// ---------------------------------------------------------------------------
// Built-in analytic kinds

class CircleNode final : public CurveNode {
public:
    CircleNode(Vec center, double radius) : p_{center, radius} {
        if (!(radius > 0.0)) throw std::invalid_argument("circle: radius must be > 0");
    }
    CurveSample eval(double s) const override {
        const double c = std::cos(s), sn = std::sin(s);
        const double r = p_.radius;
        return {p_.center + Vec{r * c, r * sn, 0.0},
                {-r * sn, r * c, 0.0},
                {-r * c, -r * sn, 0.0}};
    }
    Topology topology() const override { return Topology::Closed; }
    int dimension() const override { return dim_of(p_.center); }
    std::string kind() const override { return "circle"; }
    CircleParams p_;
};

class EllipseNode final : public CurveNode {
public:
    EllipseNode(double a, double ecc, Vec center) : p_{a, ecc, center} {
        if (!(a > 0.0)) throw std::invalid_argument("ellipse: semi-major axis must be > 0");
        if (!(ecc >= 0.0 && ecc < 1.0))
            throw std::invalid_argument("ellipse: eccentricity must lie in [0, 1)");
        b_ = a * std::sqrt(1.0 - ecc * ecc);
    }
    CurveSample eval(double s) const override {
        const double c = std::cos(s), sn = std::sin(s);
        const double a = p_.semi_major;
        return {p_.center + Vec{a * c, b_ * sn, 0.0},
                {-a * sn, b_ * c, 0.0},
                {-a * c, -b_ * sn, 0.0}};
    }
    Topology topology() const override { return Topology::Closed; }
    int dimension() const override { return dim_of(p_.center); }
    std::string kind() const override { return "ellipse"; }
    EllipseParams p_;
    double b_;
};

class LineNode final : public CurveNode {
public:
    LineNode(Vec point, Vec direction) : p_{point, direction} {
        if (!(norm2(direction) > 0.0)) throw std::invalid_argument("line: zero direction");
    }
    CurveSample eval(double s) const override {
        return {p_.point + p_.direction * s, p_.direction, {0, 0, 0}};
    }
    Topology topology() const override { return Topology::Open; }
    int dimension() const override {
        return (p_.point.z != 0.0 || p_.direction.z != 0.0) ? 3 : 2;
    }
    std::string kind() const override { return "line"; }
    LineParams p_;
};

// x(s) = (s, A exp(-s^2/w^2)); satisfies the asymptote identification exactly.
class BumpNode final : public CurveNode {
public:
    BumpNode(double amplitude, double width) : p_{amplitude, width} {
        if (!(width > 0.0)) throw std::invalid_argument("open-bump: width must be > 0");
    }
    CurveSample eval(double s) const override {
        const double w2 = p_.width * p_.width;
        const double y = p_.amplitude * std::exp(-s * s / w2);
        const double dy = y * (-2.0 * s / w2);
        const double d2y = y * (4.0 * s * s / (w2 * w2) - 2.0 / w2);
        return {{s, y, 0.0}, {1.0, dy, 0.0}, {0.0, d2y, 0.0}};
    }
    Topology topology() const override { return Topology::Open; }
    int dimension() const override { return 2; }
    std::string kind() const override { return "open-bump"; }
    BumpParams p_;
};

class FourierNode final : public CurveNode {
public:
    explicit FourierNode(FourierLoop loop) : loop_(std::move(loop)) {
        if (loop_.cos_coeffs.empty() || loop_.cos_coeffs.size() != loop_.sin_coeffs.size())
            throw std::invalid_argument("fourier-loop: need matching a_k/b_k lists, M >= 1");
    }
    CurveSample eval(double s) const override {
        Vec pos, vel, acc;
        for (std::size_t i = 0; i < loop_.cos_coeffs.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            const double c = std::cos(k * s), sn = std::sin(k * s);
            const Vec& a = loop_.cos_coeffs[i];
            const Vec& b = loop_.sin_coeffs[i];
            pos += a * c + b * sn;
            vel += (b * c - a * sn) * k;
            acc += (a * c + b * sn) * (-k * k);
        }
        return {pos, vel, acc};
    }
    Topology topology() const override { return Topology::Closed; }
    int dimension() const override { return 2; }
    std::string kind() const override { return "fourier-loop"; }
    FourierLoop loop_;
};

// ---------------------------------------------------------------------------
// Cubic spline interpolation (periodic or natural), uniform knot spacing.

struct SplineCoeffs {
    std::vector<Vec> y;   // knot values
    std::vector<Vec> m;   // second derivatives at knots
    double h = 1.0;       // knot spacing in parameter
};

// Solves the standard continuity system h/6 (m_{i-1} + 4 m_i + m_{i+1}) =
// (y_{i-1} - 2 y_i + y_{i+1}) / h, natural (m = 0) at the ends.
std::vector<Vec> natural_second_derivatives(const std::vector<Vec>& y, double h) {
    const int n = static_cast<int>(y.size());
    std::vector<Vec> m(n);
    if (n < 3) return m;
    const int k = n - 2;  // unknowns m_1..m_{n-2}
    std::vector<double> diag(k, 4.0), sub(k, 1.0);
    std::vector<Vec> rhs(k);
    for (int i = 0; i < k; ++i)
        rhs[i] = (y[i] - y[i + 1] * 2.0 + y[i + 2]) * (6.0 / (h * h));
    // Thomas algorithm
    for (int i = 1; i < k; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= rhs[i - 1] * w;
    }
    m[k] = rhs[k - 1] / diag[k - 1];
    for (int i = k - 2; i >= 0; --i)
        m[i + 1] = (rhs[i] - m[i + 2]) / diag[i];
    return m;
}

// Periodic variant: cyclic tridiagonal system solved via Sherman-Morrison.
std::vector<Vec> periodic_second_derivatives(const std::vector<Vec>& y, double h) {
    const int n = static_cast<int>(y.size());  // one value per knot, y[n] == y[0] implied
    auto wrap = [n](int i) { return (i % n + n) % n; };
    std::vector<Vec> rhs(n);
    for (int i = 0; i < n; ++i)
        rhs[i] = (y[wrap(i - 1)] - y[i] * 2.0 + y[wrap(i + 1)]) * (6.0 / (h * h));

    // System: m_{i-1} + 4 m_i + m_{i+1} = rhs_i, cyclic. Split the corner
    // entries off as a rank-1 update u v^T with u = (gamma,0,..,1) and
    // v = (1,0,..,1/gamma), then solve the plain tridiagonal part twice.
    const double gamma = -4.0;
    std::vector<Vec> x = rhs;
    std::vector<double> q(n, 0.0);
    std::vector<double> d(n, 4.0);
    d[0] -= gamma;
    d[n - 1] -= 1.0 / gamma;
    q[0] = gamma;
    q[n - 1] = 1.0;
    for (int i = 1; i < n; ++i) {
        const double w = 1.0 / d[i - 1];
        d[i] -= w;
        x[i] -= x[i - 1] * w;
        q[i] -= q[i - 1] * w;
    }
    x[n - 1] = x[n - 1] / d[n - 1];
    q[n - 1] = q[n - 1] / d[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        x[i] = (x[i] - x[i + 1]) / d[i];
        q[i] = (q[i] - q[i + 1]) / d[i];
    }
    // v^T x = x_0 + x_{n-1}/gamma ; correction factor 1/(1 + v^T q)
    const double denom = 1.0 + q[0] + q[n - 1] / gamma;
    const Vec vx = x[0] + x[n - 1] / gamma;
    for (int i = 0; i < n; ++i) x[i] -= q[i] * (vx / denom);
    return x;
}

class SplineNode final : public CurveNode {
public:
    SplineNode(std::vector<Vec> points, bool closed) : data_{std::move(points), closed} {
        const auto& pts = data_.points;
        const int n = static_cast<int>(pts.size());
        if (n < 4) throw std::invalid_argument("fit_spline: need at least 4 points");
        for (int i = 0; i + 1 < n; ++i)
            if (norm2(pts[i + 1] - pts[i]) == 0.0)
                throw std::invalid_argument("fit_spline: duplicate consecutive points");
        if (closed && norm2(pts.front() - pts.back()) == 0.0)
            throw std::invalid_argument(
                "fit_spline: closed input must not repeat the first point");
        dim_ = 2;
        for (const auto& p : pts)
            if (p.z != 0.0) dim_ = 3;
        if (closed) {
            coeffs_.h = kTwoPi / n;
            coeffs_.y = pts;
            coeffs_.m = periodic_second_derivatives(pts, coeffs_.h);
        } else {
            coeffs_.h = 1.0;
            coeffs_.y = pts;
            coeffs_.m = natural_second_derivatives(pts, coeffs_.h);
            t_lo_ = -0.5 * (n - 1);  // centered unit-spaced knots
        }
    }

    CurveSample eval(double s) const override {
        const int n = static_cast<int>(coeffs_.y.size());
        const double h = coeffs_.h;
        if (data_.closed) {
            int seg = static_cast<int>(std::floor(s / h));
            seg = std::clamp(seg, 0, n - 1);
            const double tau = s - seg * h;
            return segment(seg, (seg + 1) % n, tau);
        }
        const double t = s - t_lo_;
        if (t <= 0.0) return extend(0, t);
        if (t >= (n - 1) * h) return extend(n - 1, t - (n - 1) * h);
        const int seg = std::min(static_cast<int>(std::floor(t / h)), n - 2);
        return segment(seg, seg + 1, t - seg * h);
    }
    Topology topology() const override {
        return data_.closed ? Topology::Closed : Topology::Open;
    }
    int dimension() const override { return dim_; }
    std::string kind() const override { return "spline"; }

    SplineData data_;

private:
    CurveSample segment(int i, int j, double tau) const {
        const double h = coeffs_.h;
        const Vec& yi = coeffs_.y[i];
        const Vec& yj = coeffs_.y[j];
        const Vec& mi = coeffs_.m[i];
        const Vec& mj = coeffs_.m[j];
        const Vec b = (yj - yi) / h - (mi * 2.0 + mj) * (h / 6.0);
        const Vec c = mi * 0.5;
        const Vec d = (mj - mi) / (6.0 * h);
        return {yi + (b + (c + d * tau) * tau) * tau,
                b + (c * 2.0 + d * (3.0 * tau)) * tau,
                c * 2.0 + d * (6.0 * tau)};
    }
    // Straight extension beyond an end knot with the end tangent; natural ends
    // have zero second derivative so the join stays C2.
    CurveSample extend(int knot, double tau) const {
        const int n = static_cast<int>(coeffs_.y.size());
        CurveSample end = (knot == 0) ? segment(0, 1, 0.0)
                                      : segment(n - 2, n - 1, coeffs_.h);
        return {end.position + end.velocity * tau, end.velocity, {0, 0, 0}};
    }

    SplineCoeffs coeffs_;
    double t_lo_ = 0.0;
    int dim_ = 2;
};

// ---------------------------------------------------------------------------
// Combinator nodes

class TranslatedNode final : public CurveNode {
public:
    TranslatedNode(std::shared_ptr<const CurveNode> src, Vec offset)
        : src_(std::move(src)), offset_(offset) {}
    CurveSample eval(double s) const override {
        CurveSample c = src_->eval(s);
        c.position += offset_;
        return c;
    }
    Topology topology() const override { return src_->topology(); }
    int dimension() const override { return std::max(src_->dimension(), dim_of(offset_)); }
    std::string kind() const override { return "translated"; }

private:
    std::shared_ptr<const CurveNode> src_;
    Vec offset_;
};

class RotatedNode final : public CurveNode {
public:
    RotatedNode(std::shared_ptr<const CurveNode> src, Vec axis, double angle)
        : src_(std::move(src)) {
        const Vec u = normalized(axis);
        const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
        r_[0] = {c + u.x * u.x * t, u.x * u.y * t - u.z * s, u.x * u.z * t + u.y * s};
        r_[1] = {u.y * u.x * t + u.z * s, c + u.y * u.y * t, u.y * u.z * t - u.x * s};
        r_[2] = {u.z * u.x * t - u.y * s, u.z * u.y * t + u.x * s, c + u.z * u.z * t};
        planar_ = (axis.x == 0.0 && axis.y == 0.0);
    }
    CurveSample eval(double s) const override {
        CurveSample c = src_->eval(s);
        return {apply(c.position), apply(c.velocity), apply(c.acceleration)};
    }
    Topology topology() const override { return src_->topology(); }
    int dimension() const override { return planar_ ? src_->dimension() : 3; }
    std::string kind() const override { return "rotated"; }

private:
    Vec apply(const Vec& v) const { return {dot(r_[0], v), dot(r_[1], v), dot(r_[2], v)}; }
    std::shared_ptr<const CurveNode> src_;
    Vec r_[3];
    bool planar_ = false;
};

class ScaledNode final : public CurveNode {
public:
    ScaledNode(std::shared_ptr<const CurveNode> src, double factor)
        : src_(std::move(src)), k_(factor) {
        if (!(factor != 0.0) || !std::isfinite(factor))
            throw std::invalid_argument("scaled: factor must be finite and nonzero");
    }
    CurveSample eval(double s) const override {
        CurveSample c = src_->eval(s);
        return {c.position * k_, c.velocity * k_, c.acceleration * k_};
    }
    Topology topology() const override { return src_->topology(); }
    int dimension() const override { return src_->dimension(); }
    std::string kind() const override { return "scaled"; }

private:
    std::shared_ptr<const CurveNode> src_;
    double k_;
};

class ReversedNode final : public CurveNode {
public:
    explicit ReversedNode(std::shared_ptr<const CurveNode> src) : src_(std::move(src)) {}
    CurveSample eval(double s) const override {
        double t = -s;
        if (src_->topology() == Topology::Closed) t = fold_period(t);
        CurveSample c = src_->eval(t);
        return {c.position, -c.velocity, c.acceleration};
    }
    Topology topology() const override { return src_->topology(); }
    int dimension() const override { return src_->dimension(); }
    std::string kind() const override { return "reversed"; }

private:
    std::shared_ptr<const CurveNode> src_;
};

class ReparamNode final : public CurveNode {
public:
    ReparamNode(std::shared_ptr<const CurveNode> src, double amplitude, int harmonic)
        : src_(std::move(src)), amp_(amplitude), k_(harmonic) {
        if (src_->topology() != Topology::Closed)
            throw std::invalid_argument("reparameterized: closed curves only");
        if (!(std::abs(amplitude * harmonic) < 1.0))
            throw std::invalid_argument("reparameterized: |amplitude*harmonic| must be < 1");
    }
    CurveSample eval(double s) const override {
        const double phi = s + amp_ * std::sin(k_ * s);
        const double dphi = 1.0 + amp_ * k_ * std::cos(k_ * s);
        const double d2phi = -amp_ * k_ * k_ * std::sin(k_ * s);
        CurveSample c = src_->eval(fold_period(phi));
        return {c.position, c.velocity * dphi,
                c.acceleration * (dphi * dphi) + c.velocity * d2phi};
    }
    Topology topology() const override { return Topology::Closed; }
    int dimension() const override { return src_->dimension(); }
    std::string kind() const override { return "reparameterized"; }

private:
    std::shared_ptr<const CurveNode> src_;
    double amp_;
    int k_;
};

} // namespace

// ---------------------------------------------------------------------------

FourierLoop FourierLoop::circle(double radius, int harmonics) {
    FourierLoop loop;
    loop.cos_coeffs.assign(harmonics, Vec{});
    loop.sin_coeffs.assign(harmonics, Vec{});
    loop.cos_coeffs[0] = {radius, 0, 0};
    loop.sin_coeffs[0] = {0, radius, 0};
    return loop;
}

CurveSample Curve::at(double s) const {
    if (!std::isfinite(s)) throw std::invalid_argument("curve parameter must be finite");
    if (closed()) s = fold_period(s);
    return node_->eval(s);
}

Curve Curve::circle(Vec center, double radius) {
    return Curve(std::make_shared<CircleNode>(center, radius));
}
Curve Curve::ellipse(double semi_major, double eccentricity, Vec center) {
    return Curve(std::make_shared<EllipseNode>(semi_major, eccentricity, center));
}
Curve Curve::line(Vec point, Vec direction) {
    return Curve(std::make_shared<LineNode>(point, direction));
}
Curve Curve::open_bump(double amplitude, double width) {
    return Curve(std::make_shared<BumpNode>(amplitude, width));
}
Curve Curve::fourier(FourierLoop loop) {
    return Curve(std::make_shared<FourierNode>(std::move(loop)));
}

Curve Curve::translated(Vec offset) const {
    return Curve(std::make_shared<TranslatedNode>(node_, offset));
}
Curve Curve::rotated(double angle) const { return rotated({0, 0, 1}, angle); }
Curve Curve::rotated(Vec axis, double angle) const {
    return Curve(std::make_shared<RotatedNode>(node_, axis, angle));
}
Curve Curve::scaled(double factor) const {
    return Curve(std::make_shared<ScaledNode>(node_, factor));
}
Curve Curve::reversed() const { return Curve(std::make_shared<ReversedNode>(node_)); }
Curve Curve::reparameterized(double amplitude, int harmonic) const {
    return Curve(std::make_shared<ReparamNode>(node_, amplitude, harmonic));
}

std::optional<CircleParams> Curve::as_circle() const {
    if (auto* n = dynamic_cast<const CircleNode*>(node_.get())) return n->p_;
    return std::nullopt;
}
std::optional<EllipseParams> Curve::as_ellipse() const {
    if (auto* n = dynamic_cast<const EllipseNode*>(node_.get())) return n->p_;
    return std::nullopt;
}
std::optional<LineParams> Curve::as_line() const {
    if (auto* n = dynamic_cast<const LineNode*>(node_.get())) return n->p_;
    return std::nullopt;
}
std::optional<BumpParams> Curve::as_bump() const {
    if (auto* n = dynamic_cast<const BumpNode*>(node_.get())) return n->p_;
    return std::nullopt;
}
std::optional<FourierLoop> Curve::as_fourier() const {
    if (auto* n = dynamic_cast<const FourierNode*>(node_.get())) return n->loop_;
    return std::nullopt;
}
std::optional<SplineData> Curve::as_spline() const {
    if (auto* n = dynamic_cast<const SplineNode*>(node_.get())) return n->data_;
    return std::nullopt;
}

double curvature(const Curve& curve, double s) {
    const CurveSample c = curve.at(s);
    const double v2 = norm2(c.velocity);
    if (!(v2 > 0.0)) throw std::domain_error("curvature: zero velocity");
    const Vec a_perp = c.acceleration - c.velocity * (dot(c.acceleration, c.velocity) / v2);
    return norm(a_perp) / v2;
}

Curve fit_spline(std::span<const Vec> points, bool closed) {
    return Curve(std::make_shared<SplineNode>(
        std::vector<Vec>(points.begin(), points.end()), closed));
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (const auto& c : checks)
        if (!c.passed) out << c.name << " FAILED (" << c.detail << "); ";
    for (const auto& c : checks)
        if (c.passed) out << c.name << " ok; ";
    std::string s = out.str();
    if (s.size() >= 2) s.resize(s.size() - 2);
    return s;
}

double curve_diameter(const Curve& curve) {
    const int n = 256;
    const double lo = curve.closed() ? 0.0 : -8.0;
    const double hi = curve.closed() ? kTwoPi : 8.0;
    Vec min_p = curve.at(lo).position;
    Vec max_p = min_p;
    for (int i = 1; i < n; ++i) {
        const double s = curve.closed() ? lo + (hi - lo) * i / n
                                        : lo + (hi - lo) * i / (n - 1);
        const Vec p = curve.at(s).position;
        min_p = {std::min(min_p.x, p.x), std::min(min_p.y, p.y), std::min(min_p.z, p.z)};
        max_p = {std::max(max_p.x, p.x), std::max(max_p.y, p.y), std::max(max_p.z, p.z)};
    }
    return norm(max_p - min_p);
}

ValidationReport validate(const Curve& curve, const ValidationOptions& options) {
    ValidationReport report;
    const bool closed = curve.closed();
    const int n = options.samples;
    const double lo = closed ? 0.0 : -options.open_window;
    const double hi = closed ? kTwoPi : options.open_window;

    std::vector<Vec> pos(n);
    std::vector<double> speed(n);
    bool all_finite = true;
    for (int i = 0; i < n; ++i) {
        const double s = closed ? lo + (hi - lo) * i / n
                                : lo + (hi - lo) * i / (n - 1);
        const CurveSample c = curve.at(s);
        pos[i] = c.position;
        speed[i] = norm(c.velocity);
        if (!finite(c.position) || !finite(c.velocity) || !finite(c.acceleration))
            all_finite = false;
    }

    // regularity: velocity bounded away from zero everywhere sampled
    {
        const double vmax = *std::max_element(speed.begin(), speed.end());
        const double vmin = *std::min_element(speed.begin(), speed.end());
        const bool ok = all_finite && vmax > 0.0 && vmin > 1e-6 * vmax;
        std::ostringstream d;
        d << "min|v|=" << vmin << " max|v|=" << vmax;
        report.checks.push_back({"regularity", ok, d.str()});
    }

    const double diameter = [&] {
        Vec min_p = pos[0], max_p = pos[0];
        for (const Vec& p : pos) {
            min_p = {std::min(min_p.x, p.x), std::min(min_p.y, p.y), std::min(min_p.z, p.z)};
            max_p = {std::max(max_p.x, p.x), std::max(max_p.y, p.y), std::max(max_p.z, p.z)};
        }
        return norm(max_p - min_p);
    }();

    if (closed) {
        // seam smoothness: Taylor-extrapolate across the seam and compare
        const double h = 1e-4;
        const CurveSample before = curve.at(kTwoPi - h);
        const CurveSample after = curve.at(h);
        const double step = 2.0 * h;
        const Vec pos_pred = before.position + before.velocity * step +
                             before.acceleration * (0.5 * step * step);
        const Vec vel_pred = before.velocity + before.acceleration * step;
        const double scale = std::max(1.0, diameter);
        const bool ok = norm(after.position - pos_pred) < 1e-8 * scale &&
                        norm(after.velocity - vel_pred) < 1e-5 * scale &&
                        norm(after.acceleration - before.acceleration) < 1e-2 * scale;
        std::ostringstream d;
        d << "position gap " << norm(after.position - pos_pred);
        report.checks.push_back({"seam-smoothness", ok, d.str()});
    } else {
        // asymptote identification: far-end unit tangents must agree in direction
        const double far = 1e4;
        const Vec t_in = normalized(curve.at(-far).velocity);
        const Vec t_out = normalized(curve.at(far).velocity);
        const double c = std::clamp(dot(t_in, t_out), -1.0, 1.0);
        const double angle = std::acos(c);
        std::ostringstream d;
        d << "angle between end tangents " << angle << " rad";
        report.checks.push_back({"asymptote-direction", angle < options.direction_tol, d.str()});
    }

    // simpleness: no two well-separated parameters map to nearby points
    {
        const double floor = 1e-3 * diameter;
        const double span = hi - lo;
        const double min_sep = span / 20.0;
        const double step = closed ? span / n : span / (n - 1);
        bool ok = true;
        double worst = diameter;
        for (int i = 0; i < n && ok; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double sep = (j - i) * step;
                if (closed) sep = std::min(sep, span - sep);
                if (sep <= min_sep) continue;
                const double dist = norm(pos[i] - pos[j]);
                if (dist < worst) worst = dist;
                if (dist < floor) {
                    ok = false;
                    break;
                }
            }
        }
        std::ostringstream d;
        d << "min separated distance " << worst << " (floor " << floor << ")";
        report.checks.push_back({"simpleness", ok, d.str()});
    }

    return report;
}

} // namespace curvn
