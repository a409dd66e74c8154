#include "curvn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace curvn {

void export_plot(const Curve& curve, const SvgOptions& options, std::ostream& out) {
    const int n = options.samples;
    const bool closed = curve.closed();
    const double lo = closed ? 0.0 : -options.open_window;
    const double hi = closed ? kTwoPi : options.open_window;

    std::vector<Vec> pts(n + (closed ? 1 : 0));
    for (int i = 0; i < n; ++i) {
        const double s = closed ? lo + (hi - lo) * i / n : lo + (hi - lo) * i / (n - 1);
        pts[i] = curve.at(s).position;
    }
    if (closed) pts[n] = pts[0];  // close the polyline

    double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
    for (const Vec& p : pts) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double span_x = std::max(max_x - min_x, 1e-12);
    const double span_y = std::max(max_y - min_y, 1e-12);
    const double margin = 24.0;
    const double caption_band = options.caption.empty() ? 0.0 : 28.0;
    const double scale = std::min((options.width - 2 * margin) / span_x,
                                  (options.height - 2 * margin - caption_band) / span_y);
    const double off_x = margin + 0.5 * ((options.width - 2 * margin) - scale * span_x);
    const double off_y = margin + 0.5 * ((options.height - 2 * margin - caption_band) -
                                         scale * span_y);

    char buf[160];
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                  "width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                  options.width, options.height, options.width, options.height);
    out << buf;
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double x = off_x + scale * (pts[i].x - min_x);
        // flip y so larger curve-y is higher on screen
        const double y = off_y + scale * (max_y - pts[i].y);
        std::snprintf(buf, sizeof buf, i == 0 ? "%.3f,%.3f" : " %.3f,%.3f", x, y);
        out << buf;
    }
    out << "\"/>\n";
    if (!options.caption.empty()) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" "
                      "font-size=\"16\">",
                      margin, options.height - 12.0);
        out << buf << options.caption << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace curvn
