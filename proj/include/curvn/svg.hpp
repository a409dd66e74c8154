#pragma once

#include <iosfwd>
#include <string>

#include "curvn/curve.hpp"

namespace curvn {

struct SvgOptions {
    int width = 640;
    int height = 480;
    int samples = 1024;
    double open_window = 8.0;  // parameter range [-w, w] plotted for open curves
    std::string caption;       // drawn under the plot, e.g. "n = 19.7392"
};

// SVG 1.1 document with the curve as a polyline fitted to the viewport.
// Output bytes are deterministic for fixed inputs.
void export_plot(const Curve& curve, const SvgOptions& options, std::ostream& out);

} // namespace curvn
