#include "bayesfuse/spaces.hpp"

#include <algorithm>

#include "bayesfuse/errors.hpp"

namespace bayesfuse {
namespace {

void check_sorted_points(const std::vector<double>& pts, const char* what) {
  if (pts.empty()) throw InputError(std::string(what) + ": point list must be non-empty");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(pts[i])) throw InputError(std::string(what) + ": points must be finite");
    if (i > 0 && !(pts[i] > pts[i - 1])) {
      throw InputError(std::string(what) + ": point list must be strictly sorted");
    }
  }
}

}  // namespace

ObjectSpace ObjectSpace::interval(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw InputError("object space: interval requires lo < hi");
  }
  ObjectSpace s;
  s.discrete_ = false;
  s.bounds_ = Interval{lo, hi};
  return s;
}

ObjectSpace ObjectSpace::points(std::vector<double> pts) {
  check_sorted_points(pts, "object space");
  ObjectSpace s;
  s.discrete_ = true;
  s.bounds_ = Interval{pts.front(), pts.back()};
  s.points_ = std::move(pts);
  return s;
}

bool ObjectSpace::bounded() const { return bounds_.bounded(); }

bool ObjectSpace::contains(double h) const {
  if (std::isnan(h)) return false;
  if (!discrete_) return bounds_.contains(h);
  return std::binary_search(points_.begin(), points_.end(), h);
}

double ObjectSpace::min() const { return bounds_.lo; }
double ObjectSpace::max() const { return bounds_.hi; }

bool ObjectSpace::operator==(const ObjectSpace& other) const {
  return discrete_ == other.discrete_ && bounds_.lo == other.bounds_.lo &&
         bounds_.hi == other.bounds_.hi && points_ == other.points_;
}

FeatureSpace FeatureSpace::real_line(int dims) {
  if (dims < 1) throw InputError("feature space: dims must be >= 1");
  FeatureSpace s;
  s.dims_ = dims;
  s.domain_ = Domain::RealLine;
  return s;
}

FeatureSpace FeatureSpace::half_line(int dims) {
  if (dims < 1) throw InputError("feature space: dims must be >= 1");
  FeatureSpace s;
  s.dims_ = dims;
  s.domain_ = Domain::HalfLine;
  s.bounds_ = Interval{0.0, std::numeric_limits<double>::infinity()};
  return s;
}

FeatureSpace FeatureSpace::interval(int dims, double lo, double hi) {
  if (dims < 1) throw InputError("feature space: dims must be >= 1");
  if (!(lo < hi)) throw InputError("feature space: interval requires lo < hi");
  FeatureSpace s;
  s.dims_ = dims;
  s.domain_ = Domain::Interval;
  s.bounds_ = Interval{lo, hi};
  return s;
}

FeatureSpace FeatureSpace::counts(int dims) {
  if (dims < 1) throw InputError("feature space: dims must be >= 1");
  FeatureSpace s;
  s.dims_ = dims;
  s.domain_ = Domain::NonnegativeIntegers;
  s.bounds_ = Interval{0.0, std::numeric_limits<double>::infinity()};
  return s;
}

FeatureSpace FeatureSpace::points(std::vector<double> pts) {
  check_sorted_points(pts, "feature space");
  FeatureSpace s;
  s.dims_ = 1;
  s.domain_ = Domain::Points;
  s.bounds_ = Interval{pts.front(), pts.back()};
  s.points_ = std::move(pts);
  return s;
}

bool FeatureSpace::contains(std::span<const double> a) const {
  if (static_cast<int>(a.size()) != dims_) return false;
  for (double x : a) {
    if (std::isnan(x)) return false;
    switch (domain_) {
      case Domain::RealLine:
        if (!std::isfinite(x)) return false;
        break;
      case Domain::HalfLine:
        if (!(x >= 0.0) || !std::isfinite(x)) return false;
        break;
      case Domain::Interval:
        if (!bounds_.contains(x)) return false;
        break;
      case Domain::NonnegativeIntegers:
        if (!(x >= 0.0) || x != std::floor(x) || !std::isfinite(x)) return false;
        break;
      case Domain::Points:
        if (!std::binary_search(points_.begin(), points_.end(), x)) return false;
        break;
    }
  }
  return true;
}

DecisionSpace DecisionSpace::interval(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw InputError("decision space: interval requires lo < hi");
  }
  DecisionSpace s;
  s.kind_ = Kind::IntervalK;
  s.parts_ = {Interval{lo, hi}};
  s.hull_ = Interval{lo, hi};
  return s;
}

DecisionSpace DecisionSpace::points(std::vector<double> pts) {
  check_sorted_points(pts, "decision space");
  DecisionSpace s;
  s.kind_ = Kind::PointsK;
  s.hull_ = Interval{pts.front(), pts.back()};
  s.points_ = std::move(pts);
  return s;
}

DecisionSpace DecisionSpace::interval_union(std::vector<Interval> parts) {
  if (parts.empty()) throw InputError("decision space: union must be non-empty");
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (std::isnan(parts[i].lo) || std::isnan(parts[i].hi) || !(parts[i].lo <= parts[i].hi)) {
      throw InputError("decision space: union parts must satisfy lo <= hi");
    }
    if (i > 0 && !(parts[i].lo > parts[i - 1].hi)) {
      throw InputError("decision space: union parts must be disjoint");
    }
  }
  if (parts.size() == 1) return DecisionSpace::interval(parts[0].lo, parts[0].hi);
  DecisionSpace s;
  s.kind_ = Kind::UnionK;
  s.hull_ = Interval{parts.front().lo, parts.back().hi};
  s.parts_ = std::move(parts);
  return s;
}

bool DecisionSpace::contains(double x) const {
  if (std::isnan(x)) return false;
  switch (kind_) {
    case Kind::IntervalK:
      return hull_.contains(x);
    case Kind::PointsK:
      return std::binary_search(points_.begin(), points_.end(), x);
    case Kind::UnionK:
      for (const Interval& p : parts_) {
        if (p.contains(x)) return true;
      }
      return false;
  }
  return false;
}

bool DecisionSpace::operator==(const DecisionSpace& other) const {
  if (kind_ != other.kind_) return false;
  if (points_ != other.points_) return false;
  if (parts_.size() != other.parts_.size()) return false;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].lo != other.parts_[i].lo || parts_[i].hi != other.parts_[i].hi) return false;
  }
  return true;
}

}  // namespace bayesfuse
