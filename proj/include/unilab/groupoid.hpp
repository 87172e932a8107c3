#pragma once

// Finite groupoids whose arrows are invertible linear maps between the
// tangent spaces at points of a finite point set.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unilab/field.hpp"
#include "unilab/measures.hpp"
#include "unilab/tensor.hpp"

namespace unilab {

struct PointId {
  std::string name;

  auto operator<=>(const PointId&) const = default;
};

struct Point {
  PointId id;
  Vec3 coordinates;
};

class PointSet {
 public:
  PointSet() = default;
  /// Throws std::invalid_argument on duplicate ids.
  explicit PointSet(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool contains(const PointId& id) const;
  /// Throws std::out_of_range for unknown ids.
  const Vec3& coordinates(const PointId& id) const;
  std::vector<PointId> ids() const;

 private:
  std::vector<Point> points_;
};

/// Arrow from `source` to `target` carrying a linear map T_source -> T_target.
struct Arrow {
  PointId source;
  PointId target;
  Mat3 map = Mat3::identity();
  std::string label;  // optional, for reporting only
};

inline constexpr double kArrowTolerance = 1e-9;

/// Same endpoints and maps within tol (max-entry distance). Labels are ignored.
bool same_arrow(const Arrow& a, const Arrow& b, double tol = kArrowTolerance);

Arrow unit_arrow(const PointId& p);

/// u v, defined when source(u) == target(v); the map of v is applied first.
/// Throws NotComposable.
Arrow compose(const Arrow& u, const Arrow& v);
Arrow inverse(const Arrow& u);

class FiniteGroupoid {
 public:
  FiniteGroupoid() = default;
  /// Stores the arrows as given; use axiom_violations() to audit them and
  /// closure() to complete a generating set.
  FiniteGroupoid(PointSet base, std::vector<Arrow> arrows, double tolerance = kArrowTolerance);

  /// Smallest groupoid containing the generators together with units at
  /// every base point. Throws SizeLimit past max_arrows.
  static FiniteGroupoid closure(PointSet base, std::vector<Arrow> generators,
                                double tolerance = kArrowTolerance, std::size_t max_arrows = 10000);

  const PointSet& base() const { return base_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  double tolerance() const { return tolerance_; }

  bool contains(const Arrow& a) const;
  std::vector<Arrow> arrows_between(const PointId& source, const PointId& target) const;
  /// Unit at p if stored, otherwise std::nullopt.
  std::optional<Arrow> unit(const PointId& p) const;

  /// The only arrow source -> target. Throws NotTransitive when there is
  /// none and NotTriclinic when there are several.
  const Arrow& unique_arrow(const PointId& source, const PointId& target) const;

  /// Human-readable list of failed groupoid axioms (units, inverses,
  /// composition closure, unit laws, associativity); empty when valid.
  std::vector<std::string> axiom_violations() const;

  /// The image under a change of configuration: a -> H(target) a H(source)^{-1}.
  FiniteGroupoid transformed(const std::map<PointId, Mat3>& jacobians) const;

 private:
  PointSet base_;
  std::vector<Arrow> arrows_;
  double tolerance_ = kArrowTolerance;
};

FiniteMatrixGroup vertex_group(const FiniteGroupoid& g, const PointId& x);

/// True iff every ordered pair of base points is joined by an arrow.
template <typename ArrowLike>
bool is_transitive(const PointSet& base, const std::vector<ArrowLike>& arrows) {
  std::map<PointId, std::size_t> index;
  for (const Point& p : base.points()) index.emplace(p.id, index.size());
  const std::size_t n = index.size();
  std::vector<char> linked(n * n, 0);
  for (const auto& a : arrows) {
    const auto s = index.find(a.source), t = index.find(a.target);
    if (s != index.end() && t != index.end()) linked[s->second * n + t->second] = 1;
  }
  for (char c : linked)
    if (!c) return false;
  return true;
}

bool is_transitive(const FiniteGroupoid& g);

/// One identity-map arrow per ordered pair; units are (X, X).
FiniteGroupoid pair_groupoid(const PointSet& base);

/// Arrows X -> Y with maps P(Y) P(X)^{-1} for every ordered pair.
/// Throws SingularFrame.
FiniteGroupoid from_frame_field(const FrameField& f, const PointSet& base);
/// Same construction from frames given directly per point.
FiniteGroupoid from_point_frames(const PointSet& base, const std::map<PointId, Mat3>& frames);

}  // namespace unilab
