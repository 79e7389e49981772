#include "islm/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace islm {

std::string format_double(double v) {
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 540.0;

struct Mapper {
    double x0, x1, y0, y1;
    double map_x(double x) const { return (x - x0) / (x1 - x0) * kWidth; }
    double map_y(double y) const { return kHeight - (y - y0) / (y1 - y0) * kHeight; }
};

// Fixed 3-decimals in pixel space keeps files compact and deterministic.
std::string px(double v) {
    const double r = std::round(v * 1000.0) / 1000.0;
    return format_double(r == 0.0 ? 0.0 : r);
}

} // namespace

std::string emit_svg(const std::vector<SvgPolyline>& polylines,
                     const std::vector<SvgMarker>& markers) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    std::size_t npts = 0;
    for (const auto& pl : polylines)
        for (const auto& p : pl.points) {
            xlo = std::min(xlo, p.y);
            xhi = std::max(xhi, p.y);
            ylo = std::min(ylo, p.r);
            yhi = std::max(yhi, p.r);
            ++npts;
        }
    for (const auto& m : markers) {
        xlo = std::min(xlo, m.at.y);
        xhi = std::max(xhi, m.at.y);
        ylo = std::min(ylo, m.at.r);
        yhi = std::max(yhi, m.at.r);
        ++npts;
    }
    if (npts == 0) throw EmptyGeometry("nothing to draw");

    const double mx = std::max(1e-9, 0.05 * (xhi - xlo));
    const double my = std::max(1e-9, 0.05 * (yhi - ylo));
    const Mapper map{xlo - mx, xhi + mx, ylo - my, yhi + my};

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\">\n";
    out << "<style>\n"
           ".stable-arc{fill:none;stroke:#1a6faa;stroke-width:2}\n"
           ".unstable-arc{fill:none;stroke:#c23b22;stroke-width:2;stroke-dasharray:6 4}\n"
           ".isocline{fill:none;stroke:#777;stroke-width:1.2}\n"
           ".cycle{fill:none;stroke:#101010;stroke-width:1.6}\n"
           ".jump{fill:none;stroke:#d98e04;stroke-width:2}\n"
           ".singular{fill:none;stroke:#2e8b57;stroke-width:1.4;stroke-dasharray:2 3}\n"
           ".equilibrium{fill:#000;stroke:none}\n"
           ".arrow{fill:#101010;stroke:none}\n"
           "</style>\n";

    for (const auto& pl : polylines) {
        if (pl.points.size() < 2) continue;
        out << "<polyline class=\"" << pl.css_class << "\" points=\"";
        for (std::size_t k = 0; k < pl.points.size(); ++k) {
            if (k) out << ' ';
            out << px(map.map_x(pl.points[k].y)) << ',' << px(map.map_y(pl.points[k].r));
        }
        out << "\"/>\n";
        if (pl.arrows && pl.points.size() >= 8) {
            // A few arrowheads along the polyline indicating direction.
            const std::size_t n = pl.points.size();
            for (std::size_t frac = 1; frac <= 3; ++frac) {
                const std::size_t k = frac * n / 4;
                if (k + 1 >= n) continue;
                const double ax = map.map_x(pl.points[k].y);
                const double ay = map.map_y(pl.points[k].r);
                const double bx = map.map_x(pl.points[k + 1].y);
                const double by = map.map_y(pl.points[k + 1].r);
                const double dx = bx - ax, dy = by - ay;
                const double n2 = std::hypot(dx, dy);
                if (n2 < 1e-12) continue;
                const double ux = dx / n2, uy = dy / n2;
                const double s = 7.0;
                out << "<path class=\"arrow\" d=\"M" << px(ax + s * ux) << ' ' << px(ay + s * uy)
                    << " L" << px(ax - s * 0.4 * uy) << ' ' << px(ay + s * 0.4 * ux) << " L"
                    << px(ax + s * 0.4 * uy) << ' ' << px(ay - s * 0.4 * ux) << " Z\"/>\n";
            }
        }
    }
    for (const auto& m : markers)
        out << "<circle class=\"" << m.css_class << "\" cx=\"" << px(map.map_x(m.at.y))
            << "\" cy=\"" << px(map.map_y(m.at.r)) << "\" r=\"4\"/>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace islm
