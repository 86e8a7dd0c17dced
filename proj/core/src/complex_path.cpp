#include "holgeo/complex_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holgeo {

namespace {

double seg_length(const ComplexPath::Segment& seg) {
  if (const auto* l = std::get_if<ComplexPath::Line>(&seg)) return std::abs(l->b - l->a);
  const auto& a = std::get<ComplexPath::Arc>(seg);
  return a.radius * std::abs(a.angle1 - a.angle0);
}

Cx seg_start(const ComplexPath::Segment& seg) {
  if (const auto* l = std::get_if<ComplexPath::Line>(&seg)) return l->a;
  const auto& a = std::get<ComplexPath::Arc>(seg);
  return a.center + a.radius * std::polar(1.0, a.angle0);
}

Cx seg_end(const ComplexPath::Segment& seg) {
  if (const auto* l = std::get_if<ComplexPath::Line>(&seg)) return l->b;
  const auto& a = std::get<ComplexPath::Arc>(seg);
  return a.center + a.radius * std::polar(1.0, a.angle1);
}

bool close_points(Cx a, Cx b) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-14 * scale;
}

}  // namespace

Cx segment_point(const ComplexPath::Segment& seg, double s) {
  if (const auto* l = std::get_if<ComplexPath::Line>(&seg)) {
    double len = std::abs(l->b - l->a);
    if (len == 0.0) return l->a;
    return l->a + (l->b - l->a) * (s / len);
  }
  const auto& a = std::get<ComplexPath::Arc>(seg);
  double dir = a.angle1 >= a.angle0 ? 1.0 : -1.0;
  double theta = a.angle0 + dir * s / a.radius;
  return a.center + a.radius * std::polar(1.0, theta);
}

Cx segment_tangent(const ComplexPath::Segment& seg, double s) {
  if (const auto* l = std::get_if<ComplexPath::Line>(&seg)) {
    double len = std::abs(l->b - l->a);
    if (len == 0.0) return Cx{1.0, 0.0};
    return (l->b - l->a) / len;
  }
  const auto& a = std::get<ComplexPath::Arc>(seg);
  double dir = a.angle1 >= a.angle0 ? 1.0 : -1.0;
  double theta = a.angle0 + dir * s / a.radius;
  return Cx{0.0, dir} * std::polar(1.0, theta);
}

void ComplexPath::push(Segment seg) {
  double len = seg_length(seg);
  if (!(len > 0.0)) throw std::invalid_argument("ComplexPath: zero-length segment");
  if (!segments_.empty() && !close_points(seg_end(segments_.back()), seg_start(seg)))
    throw std::invalid_argument("ComplexPath: segments are not contiguous");
  segments_.push_back(std::move(seg));
  cumulative_.push_back(length() + len);
}

ComplexPath ComplexPath::line(Cx a, Cx b) {
  ComplexPath p;
  p.push(Line{a, b});
  return p;
}

ComplexPath ComplexPath::arc(Cx center, double radius, double angle0, double angle1) {
  ComplexPath p;
  p.push(Arc{center, radius, angle0, angle1});
  return p;
}

ComplexPath ComplexPath::polyline(std::span<const Cx> points) {
  if (points.size() < 2) throw std::invalid_argument("polyline needs at least 2 points");
  ComplexPath p;
  for (size_t i = 0; i + 1 < points.size(); ++i) p.push(Line{points[i], points[i + 1]});
  return p;
}

ComplexPath ComplexPath::circle(Cx center, double radius, double start_angle, int turns) {
  if (radius <= 0.0 || turns == 0) throw std::invalid_argument("circle: bad radius/turns");
  ComplexPath p;
  p.push(Arc{center, radius, start_angle,
             start_angle + 2.0 * M_PI * static_cast<double>(turns)});
  return p;
}

ComplexPath ComplexPath::semicircle_detour(double t, double radius, int half_plane) {
  if (radius <= 0.0) throw std::invalid_argument("semicircle_detour: bad radius");
  ComplexPath p;
  if (half_plane >= 0) {
    p.push(Arc{Cx{t, 0.0}, radius, M_PI, 0.0});      // through t+ir, clockwise
  } else {
    p.push(Arc{Cx{t, 0.0}, radius, M_PI, 2.0 * M_PI});  // through t-ir
  }
  return p;
}

ComplexPath& ComplexPath::append_line_to(Cx b) {
  if (segments_.empty()) throw std::invalid_argument("append_line_to on empty path");
  push(Line{end(), b});
  return *this;
}

ComplexPath& ComplexPath::append_arc(Cx center, double radius, double angle0, double angle1) {
  push(Arc{center, radius, angle0, angle1});
  return *this;
}

ComplexPath& ComplexPath::append(const ComplexPath& other) {
  for (const auto& seg : other.segments_) push(seg);
  return *this;
}

Cx ComplexPath::start() const {
  if (segments_.empty()) throw std::logic_error("empty path");
  return seg_start(segments_.front());
}

Cx ComplexPath::end() const {
  if (segments_.empty()) throw std::logic_error("empty path");
  return seg_end(segments_.back());
}

Cx ComplexPath::point(double s) const {
  if (segments_.empty()) throw std::logic_error("empty path");
  s = std::clamp(s, 0.0, length());
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), s);
  size_t i = std::min<size_t>(it - cumulative_.begin(), segments_.size() - 1);
  return segment_point(segments_[i], s - segment_offset(i));
}

Cx ComplexPath::tangent(double s) const {
  if (segments_.empty()) throw std::logic_error("empty path");
  s = std::clamp(s, 0.0, length());
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), s);
  size_t i = std::min<size_t>(it - cumulative_.begin(), segments_.size() - 1);
  return segment_tangent(segments_[i], s - segment_offset(i));
}

bool ComplexPath::is_closed() const {
  return !segments_.empty() && close_points(start(), end());
}

double ComplexPath::segment_length(size_t i) const {
  return cumulative_[i] - segment_offset(i);
}

ComplexPath ComplexPath::reversed() const {
  ComplexPath p;
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    if (const auto* l = std::get_if<Line>(&*it)) {
      p.push(Line{l->b, l->a});
    } else {
      const auto& a = std::get<Arc>(*it);
      p.push(Arc{a.center, a.radius, a.angle1, a.angle0});
    }
  }
  return p;
}

}  // namespace holgeo
