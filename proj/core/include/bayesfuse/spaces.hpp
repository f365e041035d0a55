#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace bayesfuse {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Range of the hidden quantity: a closed interval (possibly unbounded on
/// either side) or a strictly sorted finite point list.
class ObjectSpace {
 public:
  ObjectSpace() = default;  // the full real line
  static ObjectSpace interval(double lo, double hi);
  static ObjectSpace points(std::vector<double> pts);

  bool discrete() const { return discrete_; }
  const std::vector<double>& point_list() const { return points_; }
  const Interval& bounds() const { return bounds_; }
  bool bounded() const;
  bool contains(double h) const;
  double min() const;
  double max() const;

  bool operator==(const ObjectSpace& other) const;

 private:
  bool discrete_ = false;
  Interval bounds_;
  std::vector<double> points_;
};

/// Per-sensor output space: `dims` coordinates sharing one domain.
class FeatureSpace {
 public:
  enum class Domain { RealLine, HalfLine, Interval, NonnegativeIntegers, Points };

  static FeatureSpace real_line(int dims);
  static FeatureSpace half_line(int dims);
  static FeatureSpace interval(int dims, double lo, double hi);
  static FeatureSpace counts(int dims);
  static FeatureSpace points(std::vector<double> pts);  // dims = 1

  int dims() const { return dims_; }
  Domain domain() const { return domain_; }
  const Interval& bounds() const { return bounds_; }
  const std::vector<double>& point_list() const { return points_; }
  bool contains(std::span<const double> a) const;

 private:
  FeatureSpace() = default;
  int dims_ = 1;
  Domain domain_ = Domain::RealLine;
  Interval bounds_;
  std::vector<double> points_;
};

/// Admissible fused outputs: a closed interval, a finite point list, or a
/// union of disjoint closed intervals.
class DecisionSpace {
 public:
  enum class Kind { IntervalK, PointsK, UnionK };

  static DecisionSpace interval(double lo, double hi);
  static DecisionSpace points(std::vector<double> pts);
  static DecisionSpace interval_union(std::vector<Interval> parts);

  Kind kind() const { return kind_; }
  bool discrete() const { return kind_ == Kind::PointsK; }
  const std::vector<double>& point_list() const { return points_; }
  const std::vector<Interval>& parts() const { return parts_; }
  const Interval& hull() const { return hull_; }
  bool bounded() const { return hull_.bounded(); }
  bool contains(double x) const;

  bool operator==(const DecisionSpace& other) const;

 private:
  DecisionSpace() = default;
  Kind kind_ = Kind::IntervalK;
  std::vector<double> points_;
  std::vector<Interval> parts_;
  Interval hull_;
};

}  // namespace bayesfuse
