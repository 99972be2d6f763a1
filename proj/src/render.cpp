#include "pursuit/render.hpp"

#include <array>
#include <sstream>

#include "pursuit/errors.hpp"

namespace pursuit {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd",
                                              "#8c564b", "#e377c2", "#17becf", "#bcbd22"};

class Canvas {
 public:
  Canvas(const Environment& env, double width) : box_(env.bounds()) {
    const double span = std::max(box_.width(), box_.height());
    scale_ = (width - 2 * kMargin) / span;
    w_ = box_.width() * scale_ + 2 * kMargin;
    h_ = box_.height() * scale_ + 2 * kMargin;
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
         << "\" viewBox=\"0 0 " << w_ << ' ' << h_ << "\">\n";
  }

  // SVG's y axis points down.
  Point map(Point p) const {
    return {kMargin + (p.x - box_.lo.x) * scale_, kMargin + (box_.hi.y - p.y) * scale_};
  }

  void ring(const std::vector<Point>& pts, const char* fill, const char* stroke) {
    out_ << "<polygon points=\"";
    for (Point p : pts) {
      const Point q = map(p);
      out_ << q.x << ',' << q.y << ' ';
    }
    out_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>\n";
  }

  void polyline(const std::vector<Point>& pts, const char* stroke, double width) {
    out_ << "<polyline points=\"";
    for (Point p : pts) {
      const Point q = map(p);
      out_ << q.x << ',' << q.y << ' ';
    }
    out_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"/>\n";
  }

  void line(Point a, Point b, const char* stroke, double width) {
    const Point p = map(a);
    const Point q = map(b);
    out_ << "<line x1=\"" << p.x << "\" y1=\"" << p.y << "\" x2=\"" << q.x << "\" y2=\"" << q.y
         << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"/>\n";
  }

  void circle(Point c, double r, const char* colour, bool filled, const char* cls) {
    const Point p = map(c);
    out_ << "<circle class=\"" << cls << "\" cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << r
         << "\" fill=\"" << (filled ? colour : "none") << "\" stroke=\"" << colour
         << "\" stroke-width=\"2\"/>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  static constexpr double kMargin = 10.0;
  Box box_;
  double scale_ = 1.0;
  double w_ = 0.0;
  double h_ = 0.0;
  std::ostringstream out_;
};

}  // namespace

Web web_from_json(const Json& j) {
  Web w;
  try {
    for (const Json& p : j.at("initial")) w.initial.push_back(point_from_json(p));
    for (const Json& q : j.at("intersection")) w.intersection.push_back(point_from_json(q));
    for (const Json& pr : j.at("pairs")) w.pairs.push_back({pr.at(0).get<std::size_t>(), pr.at(1).get<std::size_t>()});
  } catch (const Json::exception& e) {
    throw FormatError(std::string("web: ") + e.what());
  }
  if (w.pairs.size() != w.intersection.size()) throw FormatError("web: one pair per intersection point");
  for (const auto& pr : w.pairs) {
    if (pr[0] >= w.initial.size() || pr[1] >= w.initial.size()) throw FormatError("web: pair index out of range");
  }
  return w;
}

std::string render_svg(const Environment& env, const RenderInput& in) {
  Canvas cv(env, in.width);
  cv.ring(env.outer(), "#ffffff", "#000000");
  for (const auto& h : env.holes()) cv.ring(h, "#b0b0b0", "#000000");

  if (in.graph) {
    const Json& g = *in.graph;
    const Json& verts = g.at("vertices");
    for (const Json& e : g.at("edges")) {
      const Json& a = verts.at(e.at(0).get<std::size_t>()).at("config");
      const Json& b = verts.at(e.at(1).get<std::size_t>()).at("config");
      for (std::size_t i = 0; i < a.size(); ++i) {
        cv.line(point_from_json(a[i]), point_from_json(b[i]), "#d0d0d0", 0.5);
      }
    }
    for (const Json& v : verts) {
      for (const Json& p : v.at("config")) cv.circle(point_from_json(p), 1.5, "#808080", true, "vertex");
    }
  }

  if (in.web) {
    const Web& w = *in.web;
    for (std::size_t k = 0; k < w.intersection.size(); ++k) {
      for (std::size_t i : w.pairs[k]) cv.line(w.intersection[k], w.initial[i], "#2ca02c", 1.0);
    }
    for (Point p : w.initial) cv.circle(p, 4.0, "#d62728", true, "initial");
    for (Point q : w.intersection) cv.circle(q, 4.0, "#1f3fbf", true, "intersection");
  }

  if (in.solution && !in.solution->waypoints.empty()) {
    const Solution& s = *in.solution;
    for (std::size_t i = 0; i < s.num_pursuers; ++i) {
      const char* colour = kPalette[i % kPalette.size()];
      std::vector<Point> track;
      for (const JointConfig& c : s.waypoints) track.push_back(c[i]);
      cv.polyline(track, colour, 2.0);
      cv.circle(track.front(), 5.0, colour, true, "start");
      cv.circle(track.back(), 8.0, colour, false, "end");
    }
  }
  return cv.finish();
}

}  // namespace pursuit
