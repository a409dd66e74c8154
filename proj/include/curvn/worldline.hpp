#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "curvn/vec.hpp"

namespace curvn {

// Sample of a timelike trajectory parameterized by coordinate time (c = 1):
// spatial position, velocity dr/dt (|v| < 1) and acceleration d2r/dt2.
struct WorldLineSample {
    Vec position;
    Vec velocity;
    Vec acceleration;
};

class WorldLineNode {
public:
    virtual ~WorldLineNode() = default;
    virtual WorldLineSample eval(double t) const = 0;
    // Acceleration support [t0, t1]: outside it the motion is inertial.
    virtual std::pair<double, double> window() const = 0;
    virtual std::string kind() const = 0;
};

struct InertialParams { Vec position0; Vec velocity; };
struct WiggleParams {
    double amplitude = 0.0;
    double omega = 1.0;
    double t0 = -1.0, t1 = 1.0;
    Vec axis{1, 0, 0};
    Vec drift;
};
struct VelocityStepParams {
    Vec v0;
    Vec dv;
    double t0 = -1.0, t1 = 1.0;
    Vec r0;
};

class WorldLine {
public:
    explicit WorldLine(std::shared_ptr<const WorldLineNode> node) : node_(std::move(node)) {}

    WorldLineSample at(double t) const;
    std::pair<double, double> window() const { return node_->window(); }
    std::string kind() const { return node_->kind(); }
    const WorldLineNode& node() const { return *node_; }
    std::shared_ptr<const WorldLineNode> node_ptr() const { return node_; }

    static WorldLine inertial(Vec position0, Vec velocity);

    // r(t) = drift t + axis * amplitude * E(t) sin(omega (t - t_center)) with a
    // C2 compactly supported envelope E = cos^4 on [t0, t1]. Initial and final
    // velocities both equal drift, so the worldline is identified.
    static WorldLine wiggle(double amplitude, double omega, double t0, double t1,
                            Vec axis = {1, 0, 0}, Vec drift = {});

    // Velocity ramps smoothly from v0 to v0 + dv across [t0, t1] (quintic
    // step, C2). Not identified unless dv = 0; used to demonstrate the
    // infrared catastrophe.
    static WorldLine velocity_step(Vec v0, Vec dv, double t0, double t1, Vec r0 = {});

    WorldLine boosted(Vec beta) const;  // throws when |beta| >= 1
    WorldLine translated(Vec dr, double dt) const;
    WorldLine rotated(Vec axis, double angle) const;

    // Parameter descriptions of the serializable kinds (empty otherwise).
    std::optional<InertialParams> as_inertial() const;
    std::optional<WiggleParams> as_wiggle() const;
    std::optional<VelocityStepParams> as_velocity_step() const;

private:
    std::shared_ptr<const WorldLineNode> node_;
};

// Initial and final velocities agree within tol.
bool is_identified(const WorldLine& w, double tol = 1e-9);

// Largest sampled |v| (must stay below 1 for a valid worldline).
double max_speed(const WorldLine& w);

} // namespace curvn
