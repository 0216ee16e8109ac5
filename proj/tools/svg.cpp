#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rotset/io.hpp"

namespace rotset::svg {

namespace {

constexpr int kSize = 600;

struct Frame {
  double x0, y0, scale;
  double px(double x) const { return (x - x0) * scale + 20.0; }
  double py(double y) const { return kSize - 20.0 - (y - y0) * scale; }
};

Frame frame_for(double xmin, double xmax, double ymin, double ymax) {
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  return {xmin, ymin, (kSize - 40.0) / span};
}

std::string num(double x) { return format_double(std::round(x * 1000.0) / 1000.0); }

void header(std::ostringstream& os) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void circle(std::ostringstream& os, const Frame& f, double cx, double cy, double r,
            const char* style) {
  os << "<circle cx=\"" << num(f.px(cx)) << "\" cy=\"" << num(f.py(cy)) << "\" r=\""
     << num(r * f.scale) << "\" " << style << "/>\n";
}

void polyline(std::ostringstream& os, const Frame& f, const std::vector<Vec>& pts, bool closed,
              const char* style) {
  os << '<' << (closed ? "polygon" : "polyline") << " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i)
    os << (i ? " " : "") << num(f.px(pts[i][0])) << ',' << num(f.py(pts[i][1]));
  os << "\" " << style << "/>\n";
}

void caption(std::ostringstream& os, const std::string& text) {
  os << "<text x=\"24\" y=\"16\" font-family=\"monospace\" font-size=\"12\">" << text
     << "</text>\n";
}

}  // namespace

std::string hull_plot(const RotationSetEstimate& e, const std::vector<double>& circles) {
  if (e.hull.dim() != 2) fail(ErrorCode::kNotImplemented, "SVG output is available for m = 2");
  std::ostringstream os;
  header(os);
  const Frame f = frame_for(-1.05, 1.05, -1.05, 1.05);
  circle(os, f, 0, 0, 1.0, "fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"");
  for (const double r : circles)
    circle(os, f, 0, 0, r, "fill=\"none\" stroke=\"#c33\"");
  std::vector<Vec> poly;
  for (const auto id : e.hull.vertex_ids()) poly.push_back(e.points[id].w);
  polyline(os, f, poly, true, "fill=\"#9cf\" fill-opacity=\"0.4\" stroke=\"#036\"");
  for (const auto& p : e.points) circle(os, f, p.w[0], p.w[1], 0.006, "fill=\"#036\"");
  caption(os, "inscribed radius " + num(e.inscribed_radius) + ", " +
                  std::to_string(e.points.size()) + " rotation vectors");
  os << "</svg>\n";
  return os.str();
}

std::string orbit_plot(const std::vector<Vec>& points, const BilliardConfig& cfg,
                       const std::string& text) {
  if (cfg.dim != 2) fail(ErrorCode::kNotImplemented, "SVG output is available for m = 2");
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (const auto& p : points) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  xmin -= 1.0, ymin -= 1.0, xmax += 1.0, ymax += 1.0;
  std::ostringstream os;
  header(os);
  const Frame f = frame_for(xmin, xmax, ymin, ymax);
  for (int i = static_cast<int>(std::floor(xmin)); i <= static_cast<int>(std::ceil(xmax)); ++i)
    for (int j = static_cast<int>(std::floor(ymin)); j <= static_cast<int>(std::ceil(ymax)); ++j) {
      const Vec c = obstacle_center(LatticeIndex{i, j}, cfg);
      circle(os, f, c[0], c[1], cfg.radius, "fill=\"#ddd\" stroke=\"#666\"");
    }
  polyline(os, f, points, false, "fill=\"none\" stroke=\"#036\" stroke-width=\"1.5\"");
  caption(os, text);
  os << "</svg>\n";
  return os.str();
}

std::string square_plot(const std::vector<Vec>& folded, const BilliardConfig& cfg,
                        const std::string& text) {
  std::ostringstream os;
  header(os);
  const Frame f = frame_for(-0.5, 0.5, -0.5, 0.5);
  polyline(os, f, {Vec{-0.5, -0.5}, Vec{0.5, -0.5}, Vec{0.5, 0.5}, Vec{-0.5, 0.5}}, true,
           "fill=\"none\" stroke=\"black\"");
  circle(os, f, cfg.center[0], cfg.center[1], cfg.radius, "fill=\"#ddd\" stroke=\"#666\"");
  polyline(os, f, folded, false, "fill=\"none\" stroke=\"#036\" stroke-opacity=\"0.6\"");
  caption(os, text);
  os << "</svg>\n";
  return os.str();
}

}  // namespace rotset::svg
