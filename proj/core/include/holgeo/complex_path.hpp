#pragma once

#include <span>
#include <variant>
#include <vector>

#include "holgeo/result.hpp"

namespace holgeo {

/// Piecewise path in the complex plane along which integration time
/// evolves: straight segments and circular arcs, parametrized by arc
/// length. Segments must be contiguous; construction enforces this.
class ComplexPath {
public:
  struct Line {
    Cx a, b;
  };
  struct Arc {
    Cx center;
    double radius;
    double angle0;
    double angle1;  // angle1 > angle0 is counterclockwise
  };
  using Segment = std::variant<Line, Arc>;

  static ComplexPath line(Cx a, Cx b);
  static ComplexPath arc(Cx center, double radius, double angle0, double angle1);
  static ComplexPath polyline(std::span<const Cx> points);
  /// Full circle(s): |turns| complete revolutions starting at
  /// center + radius*e^{i*start_angle}; positive turns are counterclockwise.
  static ComplexPath circle(Cx center, double radius, double start_angle, int turns);
  /// Semicircle over the real axis from t-r to t+r around the point t;
  /// half_plane +1 goes through t+ir, -1 through t-ir.
  static ComplexPath semicircle_detour(double t, double radius, int half_plane);

  ComplexPath& append_line_to(Cx b);
  ComplexPath& append_arc(Cx center, double radius, double angle0, double angle1);
  ComplexPath& append(const ComplexPath& other);

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  Cx start() const;
  Cx end() const;
  Cx point(double s) const;
  Cx tangent(double s) const;  // dz/ds, unit magnitude
  bool is_closed() const;

  ComplexPath reversed() const;

  size_t segment_count() const { return segments_.size(); }
  const Segment& segment(size_t i) const { return segments_[i]; }
  double segment_length(size_t i) const;
  /// Cumulative arc length at the start of segment i.
  double segment_offset(size_t i) const { return i == 0 ? 0.0 : cumulative_[i - 1]; }

private:
  ComplexPath() = default;
  void push(Segment seg);

  std::vector<Segment> segments_;
  std::vector<double> cumulative_;
};

Cx segment_point(const ComplexPath::Segment& seg, double s);
Cx segment_tangent(const ComplexPath::Segment& seg, double s);

}  // namespace holgeo
