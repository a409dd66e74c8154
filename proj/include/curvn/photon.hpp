#pragma once

#include <vector>

#include "curvn/worldline.hpp"

namespace curvn {

// CODATA fine-structure constant; c = 1, n is dimensionless.
inline constexpr double kFineStructure = 7.2973525693e-3;

class ir_divergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhotonCount {
    double value = 0.0;
    double error_estimate = 0.0;
    int grid_size = 0;
    bool converged = false;
    double window_pad = 0.0;  // padding beyond the acceleration support
    std::vector<std::pair<double, double>> trace;  // (pad, value)
};

// Minkowski transverse-tangent kernel density over (t, t'), signature +---:
//   K = (2 alpha/pi) [ <u,u'> - <u,D><u',D>/S^2 ] / S^2,
// u = (1, v), D = (t - t', r - r'), S^2 = <D,D> > 0 off the diagonal for
// subluminal worldlines. Near the diagonal the analytic limit is used.
double minkowski_kernel(const WorldLine& w, double t, double u);
double minkowski_kernel_direct(const WorldLine& w, double t, double u);
double minkowski_kernel_diagonal(const WorldLine& w, double t);

// Mean photon number by the position-space double time integral. The window
// pads the acceleration support and doubles until the value is stable.
// Throws ir_divergence_error when the worldline is not identified.
PhotonCount photon_number(const WorldLine& w, double tol = 1e-4, int max_grid = 8192);

// Fixed window and grid, no identification requirement; used to exhibit the
// infrared growth for detuned worldlines.
double photon_number_window(const WorldLine& w, double pad, int grid);

struct Spectrum {
    std::vector<double> omega;
    std::vector<double> energy_density;  // dE/domega = (2 alpha / 3 pi) |a~(omega)|^2
    std::vector<double> number_density;  // dN/domega = energy_density / omega
};

// Dipole-order classical radiation spectrum from the Fourier transform of
// the acceleration over its support window.
Spectrum radiation_spectrum(const WorldLine& w, int omega_points = 4096);

// Independent frequency-domain route: n = integral of (dE/domega)/omega.
// Serves as the oracle for photon_number in the dipole regime.
PhotonCount spectral_photon_number(const WorldLine& w);

} // namespace curvn
