#pragma once

#include <optional>

#include "curvn/curve.hpp"
#include "curvn/quadrature.hpp"

namespace curvn {

inline constexpr double kTwoPiSquared = 19.739208802178716;

// Inversion x -> center + radius^2 (x - center)/|x - center|^2. An involution
// away from the center; the sphere |x - center| = radius is fixed pointwise.
struct InversionMap {
    Vec center;
    double radius = 1.0;
    // Set by classify(): center lies on the curve within the proximity floor.
    bool exceptional = false;
};

// Raised when an invariance check meets an exceptional configuration; the
// caller should use anomaly_check instead.
class exceptional_inversion : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Vec invert_point(const InversionMap& map, const Vec& x);

// Parameter of the curve point coinciding with the inversion center, if any:
// a 4096-point scan refined by Newton, accepted when the refined distance is
// below 1e-9 of the curve diameter.
std::optional<double> center_parameter(const Curve& curve, const InversionMap& map);

// Copy of the map with the exceptional flag filled in for this curve.
InversionMap classify(const Curve& curve, const InversionMap& map);

// Image of the curve under the inversion, with chain-rule derivatives:
//   closed source, center off the curve -> closed image;
//   closed source, center on the curve  -> open image, the seam parameter
//     pushed to infinity (tan compactification of the source parameter);
//   open source, center off the curve   -> closed image through the center
//     (the source's point at infinity maps to the center; the seam is closed
//     through the inverted asymptote line).
// Open source with the center on the curve is not supported.
Curve invert_curve(const Curve& curve, const InversionMap& map);

struct InversionInvarianceReport {
    double n_source = 0.0;
    double n_image = 0.0;
    double relative_difference = 0.0;
    bool passed = false;
    QuadratureResult source_quadrature;
    QuadratureResult image_quadrature;
};

// Compares the curve number before and after a non-exceptional inversion of
// a closed curve. Throws exceptional_inversion when the center lies on the
// curve, and also for open sources: their image closes through the center,
// which shifts n by 2 pi^2 (see anomaly_check), so there is no invariance to
// check.
InversionInvarianceReport check_inversion_invariance(const Curve& curve,
                                                     const InversionMap& map,
                                                     double tol = 1e-6);

struct AnomalyReport {
    double n_closed = 0.0;      // closed side of the pair
    double n_open = 0.0;        // open side of the pair
    double difference = 0.0;    // n_closed - n_open
    double deviation = 0.0;     // difference - 2 pi^2
    bool passed = false;
    QuadratureResult closed_quadrature;
    QuadratureResult open_quadrature;
};

// Verifies the universal 2 pi^2 shift of an exceptional inversion:
//   closed source: the center must lie on the curve; the open image loses
//     exactly 2 pi^2, so n(source) - n(image) is compared against 2 pi^2;
//   open source: the center must lie off the curve; the closed image gains
//     exactly 2 pi^2, so n(image) - n(source) is compared the same way.
// tol is an absolute tolerance on the deviation from 2 pi^2.
AnomalyReport anomaly_check(const Curve& curve, const InversionMap& map,
                            double tol = 1e-3);

} // namespace curvn
