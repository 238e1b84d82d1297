#include "squeeze/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "squeeze/io.hpp"

namespace squeeze::svg {

namespace {

constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

// "Nice" tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi, int target = 6) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string header(int w, int h, const std::string& title) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
       std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(w / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(title) + "</text>\n";
  return s;
}

std::string axis_labels(int w, int h, const std::string& xl, const std::string& yl) {
  const double cx = kLeft + (w - kLeft - kRight) / 2.0;
  const double cy = kTop + (h - kTop - kBottom) / 2.0;
  return "<text x=\"" + num(cx) + "\" y=\"" + num(h - 15.0) + "\" text-anchor=\"middle\">" +
         escape(xl) + "</text>\n<text x=\"20\" y=\"" + num(cy) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " + num(cy) + ")\">" + escape(yl) +
         "</text>\n";
}

std::string marker_svg(Marker m, double x, double y, const std::string& color) {
  switch (m) {
  case Marker::Diamond:
    return "<polygon points=\"" + num(x) + "," + num(y - 4) + " " + num(x + 4) + "," + num(y) +
           " " + num(x) + "," + num(y + 4) + " " + num(x - 4) + "," + num(y) + "\" fill=\"" +
           color + "\"/>\n";
  case Marker::Circle:
    return "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3.5\" fill=\"none\" stroke=\"" +
           color + "\"/>\n";
  case Marker::None:
    break;
  }
  return {};
}

} // namespace

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    case '\'': out += "&apos;"; break;
    default: out += c;
    }
  }
  return out;
}

std::string diverging_color(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, -1.0, 1.0);
  int r, g, b;
  if (t < 0) {
    const double u = -t;
    r = static_cast<int>(std::lround(255 * (1 - u) + 33 * u));
    g = static_cast<int>(std::lround(255 * (1 - u) + 102 * u));
    b = static_cast<int>(std::lround(255 * (1 - u) + 172 * u));
  } else {
    r = static_cast<int>(std::lround(255 * (1 - t) + 178 * t));
    g = static_cast<int>(std::lround(255 * (1 - t) + 24 * t));
    b = static_cast<int>(std::lround(255 * (1 - t) + 43 * t));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string LinePlot::render() const {
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  Range xr, yr;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("LinePlot: x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_x && !(s.x[i] > 0)) continue;
      if (!std::isfinite(s.y[i])) continue;
      xr.add(tx(s.x[i]));
      yr.add(s.y[i]);
    }
  }
  xr.finish();
  yr.finish();
  const double pw = width - kLeft - kRight, ph = height - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (tx(v) - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double v) { return kTop + (yr.hi - v) / (yr.hi - yr.lo) * ph; };

  std::string s = header(width, height, title);
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
       "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  if (log_x) {
    for (int e = static_cast<int>(std::ceil(xr.lo - 1e-9)); e <= xr.hi + 1e-9; ++e) {
      const double x = kLeft + (e - xr.lo) / (xr.hi - xr.lo) * pw;
      s += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
      s += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 18) +
           "\" text-anchor=\"middle\">1e" + std::to_string(e) + "</text>\n";
    }
  } else {
    for (double v : ticks(xr.lo, xr.hi)) {
      const double x = kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw;
      s += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
      s += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           tick_label(v) + "</text>\n";
    }
  }
  for (double v : ticks(yr.lo, yr.hi)) {
    const double y = py(v);
    s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
         tick_label(v) + "</text>\n";
  }
  s += axis_labels(width, height, x_label, y_label);

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& ser = series[k];
    std::string pts;
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if ((log_x && !(ser.x[i] > 0)) || !std::isfinite(ser.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(px(ser.x[i])) + "," + num(py(ser.y[i]));
    }
    s += "<polyline fill=\"none\" stroke=\"" + ser.color + "\" stroke-width=\"1.5\"" +
         (ser.dashed ? " stroke-dasharray=\"6 3\"" : "") + " points=\"" + pts + "\"/>\n";
    if (ser.marker != Marker::None) {
      // Thin out markers so dense curves stay readable.
      const std::size_t stride = std::max<std::size_t>(1, ser.x.size() / 16);
      for (std::size_t i = 0; i < ser.x.size(); i += stride)
        if ((!log_x || ser.x[i] > 0) && std::isfinite(ser.y[i]))
          s += marker_svg(ser.marker, px(ser.x[i]), py(ser.y[i]), ser.color);
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    const double lx = width - kRight + 12;
    s += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 24) + "\" y2=\"" +
         num(ly) + "\" stroke=\"" + ser.color + "\" stroke-width=\"1.5\"" +
         (ser.dashed ? " stroke-dasharray=\"6 3\"" : "") + "/>\n";
    s += marker_svg(ser.marker, lx + 12, ly, ser.color);
    s += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) + "\">" + escape(ser.label) +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string Heatmap::render() const {
  const std::size_t nx = x.size(), ny = y.size();
  if (nx == 0 || ny == 0 || z.size() != nx * ny)
    throw std::invalid_argument("Heatmap: z must have x.size()*y.size() entries");
  double zmax = 0.0;
  for (double v : z)
    if (std::isfinite(v)) zmax = std::max(zmax, std::abs(v));
  if (zmax == 0.0) zmax = 1.0;

  const double pw = width - kLeft - kRight, ph = height - kTop - kBottom;
  const double cw = pw / static_cast<double>(nx), ch = ph / static_cast<double>(ny);
  std::string s = header(width, height, title);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double v = z[iy * nx + ix];
      // Row 0 at the bottom.
      const double yy = kTop + ph - static_cast<double>(iy + 1) * ch;
      s += "<rect x=\"" + num(kLeft + static_cast<double>(ix) * cw) + "\" y=\"" + num(yy) +
           "\" width=\"" + num(cw + 0.05) + "\" height=\"" + num(ch + 0.05) + "\" fill=\"" +
           diverging_color(v / zmax) + "\"/>\n";
    }
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
       "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  auto axis_ticks = [&](const std::vector<double>& v, bool horizontal) {
    const double lo = v.front(), hi = v.back();
    for (double t : ticks(std::min(lo, hi), std::max(lo, hi), 5)) {
      const double f = hi == lo ? 0.5 : (t - lo) / (hi - lo);
      if (horizontal) {
        const double xx = kLeft + (f * static_cast<double>(nx - 1) + 0.5) * cw;
        s += "<text x=\"" + num(xx) + "\" y=\"" + num(kTop + ph + 18) +
             "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
      } else {
        const double yy = kTop + ph - (f * static_cast<double>(ny - 1) + 0.5) * ch;
        s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(yy + 4) +
             "\" text-anchor=\"end\">" + tick_label(t) + "</text>\n";
      }
    }
  };
  axis_ticks(x, true);
  axis_ticks(y, false);
  s += axis_labels(width, height, x_label, y_label);

  // Colour bar.
  const double bx = width - kRight + 30, bh = ph;
  for (int i = 0; i < 50; ++i) {
    const double t = 1.0 - 2.0 * i / 49.0;
    s += "<rect x=\"" + num(bx) + "\" y=\"" + num(kTop + bh * i / 50.0) +
         "\" width=\"18\" height=\"" + num(bh / 50.0 + 0.05) + "\" fill=\"" + diverging_color(t) +
         "\"/>\n";
  }
  s += "<text x=\"" + num(bx + 24) + "\" y=\"" + num(kTop + 10) + "\">" +
       escape(io::format_number(zmax)) + "</text>\n";
  s += "<text x=\"" + num(bx + 24) + "\" y=\"" + num(kTop + bh / 2 + 4) + "\">0</text>\n";
  s += "<text x=\"" + num(bx + 24) + "\" y=\"" + num(kTop + bh) + "\">" +
       escape(io::format_number(-zmax)) + "</text>\n";
  s += "</svg>\n";
  return s;
}

} // namespace squeeze::svg
