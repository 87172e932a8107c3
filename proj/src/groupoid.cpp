#include "unilab/groupoid.hpp"

#include <algorithm>
#include <stdexcept>

#include "unilab/errors.hpp"

namespace unilab {

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      if (points_[i].id == points_[j].id)
        throw std::invalid_argument("duplicate point id '" + points_[i].id.name + "'");
}

bool PointSet::contains(const PointId& id) const {
  return std::any_of(points_.begin(), points_.end(), [&](const Point& p) { return p.id == id; });
}

const Vec3& PointSet::coordinates(const PointId& id) const {
  for (const Point& p : points_)
    if (p.id == id) return p.coordinates;
  throw std::out_of_range("unknown point id '" + id.name + "'");
}

std::vector<PointId> PointSet::ids() const {
  std::vector<PointId> out;
  out.reserve(points_.size());
  for (const Point& p : points_) out.push_back(p.id);
  return out;
}

bool same_arrow(const Arrow& a, const Arrow& b, double tol) {
  return a.source == b.source && a.target == b.target && max_abs_diff(a.map, b.map) <= tol;
}

Arrow unit_arrow(const PointId& p) { return {p, p, Mat3::identity(), {}}; }

Arrow compose(const Arrow& u, const Arrow& v) {
  if (!(u.source == v.target)) {
    throw NotComposable("cannot compose: source of u (" + u.source.name +
                        ") differs from target of v (" + v.target.name + ")");
  }
  return {v.source, u.target, u.map * v.map, {}};
}

Arrow inverse(const Arrow& u) { return {u.target, u.source, invert(u.map), {}}; }

// ---------------------------------------------------------------------------

FiniteGroupoid::FiniteGroupoid(PointSet base, std::vector<Arrow> arrows, double tolerance)
    : base_(std::move(base)), arrows_(std::move(arrows)), tolerance_(tolerance) {}

FiniteGroupoid FiniteGroupoid::closure(PointSet base, std::vector<Arrow> generators,
                                       double tolerance, std::size_t max_arrows) {
  FiniteGroupoid g(std::move(base), {}, tolerance);
  auto add = [&](Arrow a) {
    if (g.contains(a)) return false;
    if (g.arrows_.size() >= max_arrows)
      throw SizeLimit("groupoid closure exceeds " + std::to_string(max_arrows) + " arrows");
    g.arrows_.push_back(std::move(a));
    return true;
  };
  for (const Point& p : g.base_.points()) add(unit_arrow(p.id));
  for (const Arrow& a : generators) {
    add(a);
    add(inverse(a));
  }
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t n = g.arrows_.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Arrow& u = g.arrows_[i];
        const Arrow& v = g.arrows_[j];
        if (u.source == v.target) grew |= add(compose(u, v));
      }
  }
  return g;
}

bool FiniteGroupoid::contains(const Arrow& a) const {
  return std::any_of(arrows_.begin(), arrows_.end(),
                     [&](const Arrow& b) { return same_arrow(a, b, tolerance_); });
}

std::vector<Arrow> FiniteGroupoid::arrows_between(const PointId& source, const PointId& target) const {
  std::vector<Arrow> out;
  for (const Arrow& a : arrows_)
    if (a.source == source && a.target == target) out.push_back(a);
  return out;
}

std::optional<Arrow> FiniteGroupoid::unit(const PointId& p) const {
  const Arrow u = unit_arrow(p);
  for (const Arrow& a : arrows_)
    if (same_arrow(a, u, tolerance_)) return a;
  return std::nullopt;
}

const Arrow& FiniteGroupoid::unique_arrow(const PointId& source, const PointId& target) const {
  const Arrow* found = nullptr;
  for (const Arrow& a : arrows_) {
    if (!(a.source == source && a.target == target)) continue;
    if (found && !same_arrow(*found, a, tolerance_))
      throw NotTriclinic("several arrows " + source.name + " -> " + target.name);
    found = &a;
  }
  if (!found) throw NotTransitive("no arrow " + source.name + " -> " + target.name);
  return *found;
}

std::vector<std::string> FiniteGroupoid::axiom_violations() const {
  std::vector<std::string> out;
  auto name = [](const Arrow& a) { return a.source.name + "->" + a.target.name; };

  for (const Arrow& a : arrows_) {
    if (!base_.contains(a.source) || !base_.contains(a.target))
      out.push_back("arrow " + name(a) + " has an endpoint outside the base");
    if (!(std::abs(det(a.map)) > singular_tolerance(a.map)) || max_abs(a.map) == 0.0) {
      out.push_back("arrow " + name(a) + " is singular");
      return out;
    }
    if (!unit(a.source) || !unit(a.target)) out.push_back("missing unit at an endpoint of " + name(a));
    if (!contains(inverse(a))) out.push_back("missing inverse of " + name(a));
    const Arrow left = compose(unit_arrow(a.target), a);
    const Arrow right = compose(a, unit_arrow(a.source));
    if (!same_arrow(left, a, tolerance_) || !same_arrow(right, a, tolerance_))
      out.push_back("unit law fails for " + name(a));
    const Arrow loop_s = compose(inverse(a), a);
    const Arrow loop_t = compose(a, inverse(a));
    if (!same_arrow(loop_s, unit_arrow(a.source), tolerance_) ||
        !same_arrow(loop_t, unit_arrow(a.target), tolerance_))
      out.push_back("inverse law fails for " + name(a));
  }

  for (const Arrow& u : arrows_)
    for (const Arrow& v : arrows_) {
      if (!(u.source == v.target)) continue;
      const Arrow uv = compose(u, v);
      if (!contains(uv)) out.push_back("product " + name(u) + " * " + name(v) + " missing");
      for (const Arrow& w : arrows_) {
        if (!(v.source == w.target)) continue;
        if (!same_arrow(compose(uv, w), compose(u, compose(v, w)), tolerance_))
          out.push_back("associativity fails for " + name(u) + ", " + name(v) + ", " + name(w));
      }
    }
  return out;
}

FiniteGroupoid FiniteGroupoid::transformed(const std::map<PointId, Mat3>& jacobians) const {
  std::map<PointId, Mat3> inverses;
  for (const auto& [id, h] : jacobians) {
    try {
      inverses.emplace(id, invert(h));
    } catch (const SingularMatrix&) {
      throw SingularJacobian("jacobian at '" + id.name + "' is singular");
    }
  }
  auto lookup = [&](const std::map<PointId, Mat3>& m, const PointId& id) -> const Mat3& {
    const auto it = m.find(id);
    if (it == m.end()) throw std::invalid_argument("no jacobian for point '" + id.name + "'");
    return it->second;
  };
  std::vector<Arrow> arrows;
  arrows.reserve(arrows_.size());
  for (const Arrow& a : arrows_) {
    Arrow b = a;
    b.map = lookup(jacobians, a.target) * a.map * lookup(inverses, a.source);
    arrows.push_back(std::move(b));
  }
  return FiniteGroupoid(base_, std::move(arrows), tolerance_);
}

FiniteMatrixGroup vertex_group(const FiniteGroupoid& g, const PointId& x) {
  if (!g.base().contains(x)) throw std::out_of_range("unknown point id '" + x.name + "'");
  FiniteMatrixGroup group;
  for (const Arrow& a : g.arrows_between(x, x)) group.elements.push_back(a.map);
  if (group.elements.empty()) group.elements.push_back(Mat3::identity());
  group.check(g.tolerance());
  return group;
}

bool is_transitive(const FiniteGroupoid& g) { return is_transitive(g.base(), g.arrows()); }

FiniteGroupoid pair_groupoid(const PointSet& base) {
  std::vector<Arrow> arrows;
  for (const Point& x : base.points())
    for (const Point& y : base.points()) arrows.push_back({x.id, y.id, Mat3::identity(), {}});
  return FiniteGroupoid(base, std::move(arrows));
}

FiniteGroupoid from_point_frames(const PointSet& base, const std::map<PointId, Mat3>& frames) {
  std::map<PointId, Mat3> inverses;
  for (const Point& p : base.points()) {
    const auto it = frames.find(p.id);
    if (it == frames.end()) throw std::invalid_argument("no frame for point '" + p.id.name + "'");
    try {
      inverses.emplace(p.id, invert(it->second));
    } catch (const SingularMatrix& e) {
      throw SingularFrame(std::string("frame at '") + p.id.name + "': " + e.what());
    }
  }
  std::vector<Arrow> arrows;
  for (const Point& x : base.points())
    for (const Point& y : base.points())
      arrows.push_back({x.id, y.id, frames.at(y.id) * inverses.at(x.id), {}});
  return FiniteGroupoid(base, std::move(arrows));
}

FiniteGroupoid from_frame_field(const FrameField& f, const PointSet& base) {
  std::map<PointId, Mat3> frames;
  for (const Point& p : base.points()) frames.emplace(p.id, f.jet(p.coordinates).p);
  return from_point_frames(base, frames);
}

}  // namespace unilab
