#include "curvn/worldline.hpp"

#include <cmath>

namespace curvn {

namespace {

void require_subluminal(const WorldLineNode& node) {
    const auto [t0, t1] = node.window();
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        const double t = t0 + (t1 - t0) * i / n;
        if (!(norm(node.eval(t).velocity) < 1.0))
            throw std::invalid_argument("worldline: speed reaches 1");
    }
}

class InertialNode final : public WorldLineNode {
public:
    InertialNode(Vec r0, Vec v) : p_{r0, v} {
        if (!(norm(v) < 1.0)) throw std::invalid_argument("inertial: |v| must be < 1");
    }
    WorldLineSample eval(double t) const override {
        return {p_.position0 + p_.velocity * t, p_.velocity, {}};
    }
    std::pair<double, double> window() const override { return {0.0, 0.0}; }
    std::string kind() const override { return "inertial"; }
    InertialParams p_;
};

class WiggleNode final : public WorldLineNode {
public:
    WiggleNode(double amplitude, double omega, double t0, double t1, Vec axis, Vec drift)
        : p_{amplitude, omega, t0, t1, axis, drift}, amp_(amplitude), omega_(omega),
          t0_(t0), t1_(t1), axis_(normalized(axis)), drift_(drift) {
        if (!(t1 > t0)) throw std::invalid_argument("wiggle: need t1 > t0");
    }
    WorldLineSample eval(double t) const override {
        const double tc = 0.5 * (t0_ + t1_);
        const double half = 0.5 * (t1_ - t0_);
        const double tau = (t - tc) / half;
        Vec pos = drift_ * t;
        Vec vel = drift_;
        Vec acc;
        if (std::abs(tau) < 1.0) {
            // envelope E = cos^4(pi tau / 2): E and two derivatives vanish at the edges
            const double c = std::cos(1.5707963267948966 * tau);
            const double s = std::sin(1.5707963267948966 * tau);
            const double pi_h = 1.5707963267948966 / half;
            const double e = c * c * c * c;
            const double de = -4.0 * c * c * c * s * pi_h;
            const double d2e = (-4.0 * c * c) * (c * c - 3.0 * s * s) * pi_h * pi_h;
            const double ph = omega_ * (t - tc);
            const double sn = std::sin(ph), cs = std::cos(ph);
            pos += axis_ * (amp_ * e * sn);
            vel += axis_ * (amp_ * (de * sn + e * omega_ * cs));
            acc = axis_ * (amp_ * (d2e * sn + 2.0 * de * omega_ * cs - e * omega_ * omega_ * sn));
        }
        return {pos, vel, acc};
    }
    std::pair<double, double> window() const override { return {t0_, t1_}; }
    std::string kind() const override { return "wiggle"; }
    WiggleParams p_;

private:
    double amp_, omega_, t0_, t1_;
    Vec axis_, drift_;
};

// Quintic smoothstep S on [-1, 1]: S(-1)=0, S(1)=1, first and second
// derivatives vanish at both ends.
struct Smoothstep {
    static double value(double tau) {
        return 0.5 + (15.0 * tau - 10.0 * tau * tau * tau +
                      3.0 * tau * tau * tau * tau * tau) / 16.0;
    }
    static double deriv(double tau) {
        const double q = 1.0 - tau * tau;
        return 15.0 * q * q / 16.0;
    }
    static double deriv2(double tau) {
        return -15.0 * tau * (1.0 - tau * tau) / 4.0;
    }
    // integral of S from -1 to tau
    static double integral(double tau) {
        auto J = [](double x) {
            return 0.5 * x + (7.5 * x * x - 2.5 * x * x * x * x +
                              0.5 * x * x * x * x * x * x) / 16.0;
        };
        return J(tau) - J(-1.0);
    }
};

class VelocityStepNode final : public WorldLineNode {
public:
    VelocityStepNode(Vec v0, Vec dv, double t0, double t1, Vec r0)
        : p_{v0, dv, t0, t1, r0}, v0_(v0), dv_(dv), t0_(t0), t1_(t1), r0_(r0) {
        if (!(t1 > t0)) throw std::invalid_argument("velocity_step: need t1 > t0");
    }
    WorldLineSample eval(double t) const override {
        const double tc = 0.5 * (t0_ + t1_);
        const double half = 0.5 * (t1_ - t0_);
        if (t <= t0_) return {r0_ + v0_ * t, v0_, {}};
        if (t >= t1_) {
            const Vec v = v0_ + dv_;
            return {r0_ + v0_ * t + dv_ * (half + (t - t1_)), v, {}};
        }
        const double tau = (t - tc) / half;
        return {r0_ + v0_ * t + dv_ * (half * Smoothstep::integral(tau)),
                v0_ + dv_ * Smoothstep::value(tau),
                dv_ * (Smoothstep::deriv(tau) / half)};
    }
    std::pair<double, double> window() const override { return {t0_, t1_}; }
    std::string kind() const override { return "velocity-step"; }
    VelocityStepParams p_;

private:
    Vec v0_, dv_;
    double t0_, t1_;
    Vec r0_;
};

class BoostedNode final : public WorldLineNode {
public:
    BoostedNode(std::shared_ptr<const WorldLineNode> src, Vec beta)
        : src_(std::move(src)), beta_(beta) {
        const double b2 = norm2(beta);
        if (!(b2 < 1.0)) throw std::invalid_argument("boost: |beta| must be < 1");
        gamma_ = 1.0 / std::sqrt(1.0 - b2);
        b_ = std::sqrt(b2);
        n_ = b_ > 0.0 ? beta / b_ : Vec{1, 0, 0};
    }

    WorldLineSample eval(double tp) const override {
        if (b_ == 0.0) return src_->eval(tp);
        const double t = solve_source_time(tp);
        const WorldLineSample s = src_->eval(t);
        const Vec& v = s.velocity;
        const Vec& a = s.acceleration;
        const double d = 1.0 - dot(beta_, v);
        const double dd = -dot(beta_, a);
        const double v_par = dot(v, n_);
        const double a_par = dot(a, n_);
        const Vec v_perp = v - n_ * v_par;
        const Vec a_perp = a - n_ * a_par;

        const Vec num = n_ * (v_par - b_) + v_perp / gamma_;
        const Vec vboost = num / d;
        // position: r' = r_perp + n gamma (r_par - b t)
        const double r_par = dot(s.position, n_);
        const Vec r_perp = s.position - n_ * r_par;
        const Vec pboost = r_perp + n_ * (gamma_ * (r_par - b_ * t));
        // a' = d(v')/dt / (dt'/dt), dt'/dt = gamma d
        const Vec dnum = n_ * a_par + a_perp / gamma_;
        const Vec dv_dt = (dnum * d - num * dd) / (d * d);
        const Vec aboost = dv_dt / (gamma_ * d);
        return {pboost, vboost, aboost};
    }

    std::pair<double, double> window() const override {
        const auto [t0, t1] = src_->window();
        return {boosted_time(t0), boosted_time(t1)};
    }
    std::string kind() const override { return "boosted:" + src_->kind(); }

private:
    double boosted_time(double t) const {
        return gamma_ * (t - dot(beta_, src_->eval(t).position));
    }

    // Invert t' = gamma (t - beta . r(t)); monotone since |v| < 1.
    double solve_source_time(double tp) const {
        double t = tp / gamma_;
        for (int it = 0; it < 100; ++it) {
            const WorldLineSample s = src_->eval(t);
            const double f = gamma_ * (t - dot(beta_, s.position)) - tp;
            const double fp = gamma_ * (1.0 - dot(beta_, s.velocity));
            const double step = f / fp;
            t -= step;
            if (std::abs(step) <= 1e-14 * (1.0 + std::abs(t))) return t;
        }
        return t;
    }

    std::shared_ptr<const WorldLineNode> src_;
    Vec beta_;
    Vec n_;
    double gamma_ = 1.0;
    double b_ = 0.0;
};

class TranslatedWorldLineNode final : public WorldLineNode {
public:
    TranslatedWorldLineNode(std::shared_ptr<const WorldLineNode> src, Vec dr, double dt)
        : src_(std::move(src)), dr_(dr), dt_(dt) {}
    WorldLineSample eval(double t) const override {
        WorldLineSample s = src_->eval(t - dt_);
        s.position += dr_;
        return s;
    }
    std::pair<double, double> window() const override {
        const auto [t0, t1] = src_->window();
        return {t0 + dt_, t1 + dt_};
    }
    std::string kind() const override { return "translated:" + src_->kind(); }

private:
    std::shared_ptr<const WorldLineNode> src_;
    Vec dr_;
    double dt_;
};

class RotatedWorldLineNode final : public WorldLineNode {
public:
    RotatedWorldLineNode(std::shared_ptr<const WorldLineNode> src, Vec axis, double angle)
        : src_(std::move(src)) {
        const Vec u = normalized(axis);
        const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
        r_[0] = {c + u.x * u.x * t, u.x * u.y * t - u.z * s, u.x * u.z * t + u.y * s};
        r_[1] = {u.y * u.x * t + u.z * s, c + u.y * u.y * t, u.y * u.z * t - u.x * s};
        r_[2] = {u.z * u.x * t - u.y * s, u.z * u.y * t + u.x * s, c + u.z * u.z * t};
    }
    WorldLineSample eval(double t) const override {
        const WorldLineSample s = src_->eval(t);
        return {apply(s.position), apply(s.velocity), apply(s.acceleration)};
    }
    std::pair<double, double> window() const override { return src_->window(); }
    std::string kind() const override { return "rotated:" + src_->kind(); }

private:
    Vec apply(const Vec& v) const { return {dot(r_[0], v), dot(r_[1], v), dot(r_[2], v)}; }
    std::shared_ptr<const WorldLineNode> src_;
    Vec r_[3];
};

} // namespace

WorldLineSample WorldLine::at(double t) const {
    if (!std::isfinite(t)) throw std::invalid_argument("worldline time must be finite");
    return node_->eval(t);
}

WorldLine WorldLine::inertial(Vec position0, Vec velocity) {
    return WorldLine(std::make_shared<InertialNode>(position0, velocity));
}

WorldLine WorldLine::wiggle(double amplitude, double omega, double t0, double t1,
                            Vec axis, Vec drift) {
    auto node = std::make_shared<WiggleNode>(amplitude, omega, t0, t1, axis, drift);
    require_subluminal(*node);
    return WorldLine(node);
}

WorldLine WorldLine::velocity_step(Vec v0, Vec dv, double t0, double t1, Vec r0) {
    auto node = std::make_shared<VelocityStepNode>(v0, dv, t0, t1, r0);
    require_subluminal(*node);
    return WorldLine(node);
}

WorldLine WorldLine::boosted(Vec beta) const {
    return WorldLine(std::make_shared<BoostedNode>(node_, beta));
}
WorldLine WorldLine::translated(Vec dr, double dt) const {
    return WorldLine(std::make_shared<TranslatedWorldLineNode>(node_, dr, dt));
}
WorldLine WorldLine::rotated(Vec axis, double angle) const {
    return WorldLine(std::make_shared<RotatedWorldLineNode>(node_, axis, angle));
}

bool is_identified(const WorldLine& w, double tol) {
    const auto [t0, t1] = w.window();
    const double margin = 1.0 + 1e-3 * (t1 - t0);
    const Vec v_in = w.at(t0 - margin).velocity;
    const Vec v_out = w.at(t1 + margin).velocity;
    return norm(v_out - v_in) <= tol;
}

std::optional<InertialParams> WorldLine::as_inertial() const {
    if (auto* n = dynamic_cast<const InertialNode*>(node_.get())) return n->p_;
    return std::nullopt;
}
std::optional<WiggleParams> WorldLine::as_wiggle() const {
    if (auto* n = dynamic_cast<const WiggleNode*>(node_.get())) return n->p_;
    return std::nullopt;
}
std::optional<VelocityStepParams> WorldLine::as_velocity_step() const {
    if (auto* n = dynamic_cast<const VelocityStepNode*>(node_.get())) return n->p_;
    return std::nullopt;
}

double max_speed(const WorldLine& w) {
    const auto [t0, t1] = w.window();
    const double pad = 1.0 + 0.1 * (t1 - t0);
    double vmax = 0.0;
    for (int i = 0; i <= 2048; ++i) {
        const double t = (t0 - pad) + (t1 - t0 + 2 * pad) * i / 2048.0;
        vmax = std::max(vmax, norm(w.at(t).velocity));
    }
    return vmax;
}

} // namespace curvn
