#ifndef BESOVDENS_SVG_UTIL_HPP_
#define BESOVDENS_SVG_UTIL_HPP_

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace besovdens::svg {

inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

inline void begin(std::ostream& os, double width, double height) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
     << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
     << ' ' << num(height) << "\">\n";
}

inline void end(std::ostream& os) { os << "</svg>\n"; }

inline void rect(std::ostream& os, double x, double y, double w, double h,
                 const std::string& fill) {
  os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
     << num(w) << "\" height=\"" << num(h) << "\" fill=\"" << fill
     << "\"/>\n";
}

inline void polyline(std::ostream& os,
                     const std::vector<std::pair<double, double>>& pts,
                     const std::string& stroke, double stroke_width,
                     bool dashed = false) {
  if (pts.size() < 2) return;
  os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
     << num(stroke_width) << "\"";
  if (dashed) os << " stroke-dasharray=\"6,4\"";
  os << " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) os << ' ';
    os << num(pts[i].first) << ',' << num(pts[i].second);
  }
  os << "\"/>\n";
}

inline void text(std::ostream& os, double x, double y,
                 const std::string& content, int size = 12) {
  os << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\""
     << size << "\" font-family=\"sans-serif\">" << content << "</text>\n";
}

inline void line(std::ostream& os, double x1, double y1, double x2, double y2,
                 const std::string& stroke, double stroke_width) {
  os << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
     << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke
     << "\" stroke-width=\"" << num(stroke_width) << "\"/>\n";
}

/// Three-stop color ramp for t in [0, 1].
inline std::string heat_color(double t) {
  if (t < 0) t = 0;
  if (t > 1) t = 1;
  auto lerp = [](int a, int b, double u) {
    return static_cast<int>(a + (b - a) * u + 0.5);
  };
  int r, g, b;
  if (t < 0.5) {
    const double u = t / 0.5;
    r = lerp(68, 33, u);
    g = lerp(1, 144, u);
    b = lerp(84, 140, u);
  } else {
    const double u = (t - 0.5) / 0.5;
    r = lerp(33, 253, u);
    g = lerp(144, 231, u);
    b = lerp(140, 37, u);
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace besovdens::svg

#endif  // BESOVDENS_SVG_UTIL_HPP_
