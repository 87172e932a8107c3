#include "unilab/dgpd.hpp"

#include <algorithm>
#include <stdexcept>

#include "unilab/errors.hpp"

namespace unilab {

namespace {

bool close(const Mat3& a, const Mat3& b, double tol) {
  return max_abs_diff(a, b) <= tol * (1.0 + max_abs(a));
}

std::string edge(const Arrow& a) { return a.source.name + "->" + a.target.name; }

void expect(const Arrow& a, const PointId& from, const PointId& to, const char* which) {
  if (!(a.source == from && a.target == to)) {
    throw InconsistentCorners(std::string("arrow ") + which + " is " + edge(a) + ", expected " +
                              from.name + "->" + to.name);
  }
}

bool is_unit(const Arrow& a, double tol) {
  return a.source == a.target && max_abs_diff(a.map, Mat3::identity()) <= tol;
}

std::map<PointId, std::vector<const Arrow*>> by_source(const FiniteGroupoid& g) {
  std::map<PointId, std::vector<const Arrow*>> out;
  for (const Arrow& a : g.arrows()) out[a.source].push_back(&a);
  return out;
}

void require_shared_base(const FiniteGroupoid& h, const FiniteGroupoid& v) {
  std::vector<PointId> a = h.base().ids(), b = v.base().ids();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw std::invalid_argument("side groupoids have different bases");
}

}  // namespace

void Square::validate() const {
  expect(s, w, y, "s");
  expect(t, x, z, "t");
  expect(s_hat, w, x, "s_hat");
  expect(t_hat, y, z, "t_hat");
}

Square make_square(Arrow s, Arrow t, Arrow s_hat, Arrow t_hat) {
  Square sq{s.source, t.source, s.target, t.target,
            std::move(s), std::move(t), std::move(s_hat), std::move(t_hat)};
  sq.validate();
  return sq;
}

double commutation_defect(const Square& sq) {
  sq.validate();
  return max_abs_diff(sq.t.map * sq.s_hat.map, sq.t_hat.map * sq.s.map);
}

bool is_commutative(const Square& sq, double tol) {
  const Mat3 lhs = sq.t.map * sq.s_hat.map;
  return commutation_defect(sq) <= tol * (1.0 + max_abs(lhs));
}

bool same_square(const Square& a, const Square& b, double tol) {
  return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z && same_arrow(a.s, b.s, tol) &&
         same_arrow(a.t, b.t, tol) && same_arrow(a.s_hat, b.s_hat, tol) &&
         same_arrow(a.t_hat, b.t_hat, tol);
}

Square hcompose(const Square& a, const Square& b, double tol) {
  if (!same_arrow(a.s_hat, b.t_hat, tol)) {
    throw NotComposable("hcompose: right edge " + edge(a.s_hat) + " of the left square differs from left edge " +
                        edge(b.t_hat) + " of the right square");
  }
  return {b.w, b.x, a.y, a.z, compose(a.s, b.s), compose(a.t, b.t), b.s_hat, a.t_hat};
}

Square vcompose(const Square& a, const Square& b, double tol) {
  if (!same_arrow(a.s, b.t, tol)) {
    throw NotComposable("vcompose: bottom edge " + edge(a.s) + " of the upper square differs from top edge " +
                        edge(b.t) + " of the lower square");
  }
  return {b.w, a.x, b.y, a.z, b.s, a.t, compose(a.s_hat, b.s_hat), compose(a.t_hat, b.t_hat)};
}

Square h_inverse(const Square& a) {
  return {a.y, a.z, a.w, a.x, inverse(a.s), inverse(a.t), a.t_hat, a.s_hat};
}

Square v_inverse(const Square& a) {
  return {a.x, a.w, a.z, a.y, a.t, a.s, inverse(a.s_hat), inverse(a.t_hat)};
}

Square h_unit(const Arrow& v_arrow) {
  const PointId& a = v_arrow.source;
  const PointId& b = v_arrow.target;
  return {a, b, a, b, unit_arrow(a), unit_arrow(b), v_arrow, v_arrow};
}

Square v_unit(const Arrow& h_arrow) {
  const PointId& a = h_arrow.source;
  const PointId& b = h_arrow.target;
  return {a, a, b, b, h_arrow, h_arrow, unit_arrow(a), unit_arrow(b)};
}

bool interchange_check(const Square& a, const Square& b, const Square& c, const Square& d,
                       double tol) {
  auto step = [](const char* what, auto&& f) {
    try {
      return f();
    } catch (const NotComposable& e) {
      throw NotComposable(std::string(what) + ": " + e.what());
    }
  };
  const Square ab = step("a.h b", [&] { return hcompose(a, b, tol); });
  const Square cd = step("c.h d", [&] { return hcompose(c, d, tol); });
  const Square ac = step("a.v c", [&] { return vcompose(a, c, tol); });
  const Square bd = step("b.v d", [&] { return vcompose(b, d, tol); });
  const Square lhs = step("(a.h b).v(c.h d)", [&] { return vcompose(ab, cd, tol); });
  const Square rhs = step("(a.v c).h(b.v d)", [&] { return hcompose(ac, bd, tol); });
  return same_square(lhs, rhs, tol);
}

Square transpose(const Square& sq) {
  return {sq.w, sq.y, sq.x, sq.z, sq.s_hat, sq.t_hat, sq.s, sq.t};
}

std::vector<Square> coarse_enumerate(const FiniteGroupoid& side_h, const FiniteGroupoid& side_v,
                                     std::size_t max_squares) {
  require_shared_base(side_h, side_v);
  const auto h_from = by_source(side_h);
  const auto v_from = by_source(side_v);
  static const std::vector<const Arrow*> kNone;
  auto from = [](const auto& index, const PointId& p) -> const std::vector<const Arrow*>& {
    const auto it = index.find(p);
    return it == index.end() ? kNone : it->second;
  };

  std::vector<Square> out;
  for (const Arrow& s : side_h.arrows())
    for (const Arrow* s_hat : from(v_from, s.source))
      for (const Arrow* t : from(h_from, s_hat->target))
        for (const Arrow* t_hat : from(v_from, s.target)) {
          if (!(t_hat->target == t->target)) continue;
          if (out.size() >= max_squares)
            throw SizeLimit("coarse double groupoid exceeds " + std::to_string(max_squares) + " squares");
          out.push_back({s.source, t->source, s.target, t->target, s, *t, *s_hat, *t_hat});
        }
  return out;
}

// ---------------------------------------------------------------------------

MaterialDoubleGroupoid::MaterialDoubleGroupoid(FiniteGroupoid side_h, FiniteGroupoid side_v,
                                               std::vector<Square> squares, double tolerance)
    : side_h_(std::move(side_h)),
      side_v_(std::move(side_v)),
      squares_(std::move(squares)),
      tolerance_(tolerance) {
  require_shared_base(side_h_, side_v_);
  for (const Square& sq : squares_) {
    sq.validate();
    if (!side_h_.contains(sq.s) || !side_h_.contains(sq.t))
      throw PreconditionViolated("square " + sq.w.name + sq.x.name + sq.y.name + sq.z.name +
                                 " has a horizontal edge outside component 1");
    if (!side_v_.contains(sq.s_hat) || !side_v_.contains(sq.t_hat))
      throw PreconditionViolated("square " + sq.w.name + sq.x.name + sq.y.name + sq.z.name +
                                 " has a vertical edge outside component 2");
    if (!is_commutative(sq, tolerance_))
      throw PreconditionViolated("square " + sq.w.name + sq.x.name + sq.y.name + sq.z.name +
                                 " is not commutative");
  }
}

MaterialDoubleGroupoid MaterialDoubleGroupoid::generate(FiniteGroupoid side_h, FiniteGroupoid side_v,
                                                        double tolerance, std::size_t max_squares) {
  std::vector<Square> squares;
  for (Square& sq : coarse_enumerate(side_h, side_v, max_squares))
    if (is_commutative(sq, tolerance)) squares.push_back(std::move(sq));
  return MaterialDoubleGroupoid(std::move(side_h), std::move(side_v), std::move(squares), tolerance);
}

std::vector<UnfilledPair> filling_check(const FiniteGroupoid& side_h, const FiniteGroupoid& side_v,
                                        const std::vector<Square>& squares, double tol) {
  std::vector<UnfilledPair> out;
  for (const Arrow& s : side_h.arrows())
    for (const Arrow& s_hat : side_v.arrows()) {
      if (!(s.source == s_hat.source)) continue;
      const bool filled = std::any_of(squares.begin(), squares.end(), [&](const Square& sq) {
        return same_arrow(sq.s, s, tol) && same_arrow(sq.s_hat, s_hat, tol);
      });
      if (!filled) out.push_back({s, s_hat});
    }
  return out;
}

std::vector<UnfilledPair> filling_check(const MaterialDoubleGroupoid& dg) {
  return filling_check(dg.side_h(), dg.side_v(), dg.squares(), dg.side_h().tolerance());
}

CoreGroupoid core(const MaterialDoubleGroupoid& dg) {
  const double tol = dg.side_h().tolerance();
  CoreGroupoid out{dg.side_h().base(), {}};
  for (const Square& sq : dg.squares()) {
    if (!(sq.w == sq.x && sq.w == sq.y)) continue;
    if (!is_unit(sq.s, tol) || !is_unit(sq.s_hat, tol)) continue;
    const bool seen = std::any_of(out.arrows.begin(), out.arrows.end(), [&](const CoreArrow& c) {
      return c.source == sq.w && c.target == sq.z && max_abs_diff(c.h_map, sq.t.map) <= tol &&
             max_abs_diff(c.v_map, sq.t_hat.map) <= tol;
    });
    if (!seen) out.arrows.push_back({sq.w, sq.z, sq.t.map, sq.t_hat.map});
  }
  return out;
}

bool is_uniform(const MaterialDoubleGroupoid& dg) {
  const CoreGroupoid c = core(dg);
  return is_transitive(c.base, c.arrows);
}

Mat3 misalignment(const MaterialDoubleGroupoid& dg, const PointId& x, const PointId& y) {
  const Arrow& u = dg.side_h().unique_arrow(x, y);
  const Arrow& u_star = dg.side_v().unique_arrow(x, y);
  return invert(u_star.map) * u.map;
}

MaterialDoubleGroupoid apply_config_change(const MaterialDoubleGroupoid& dg,
                                           const std::map<PointId, Mat3>& jacobians) {
  std::map<PointId, Mat3> inverses;
  for (const auto& [id, h] : jacobians) {
    try {
      inverses.emplace(id, invert(h));
    } catch (const SingularMatrix&) {
      throw SingularJacobian("jacobian at '" + id.name + "' is singular");
    }
  }
  auto push = [&](const Arrow& a) {
    const auto ht = jacobians.find(a.target);
    const auto hs = inverses.find(a.source);
    if (ht == jacobians.end() || hs == inverses.end())
      throw std::invalid_argument("no jacobian for an endpoint of " + edge(a));
    Arrow b = a;
    b.map = ht->second * a.map * hs->second;
    return b;
  };
  std::vector<Square> squares;
  squares.reserve(dg.squares().size());
  for (const Square& sq : dg.squares())
    squares.push_back({sq.w, sq.x, sq.y, sq.z, push(sq.s), push(sq.t), push(sq.s_hat), push(sq.t_hat)});
  return MaterialDoubleGroupoid(dg.side_h().transformed(jacobians), dg.side_v().transformed(jacobians),
                                std::move(squares), dg.tolerance());
}

bool is_compatible(const MaterialDoubleGroupoid& dg, const PointPair& pair1, const PointPair& pair2,
                   int component) {
  if (component != 1 && component != 2) throw std::invalid_argument("component must be 1 or 2");
  const Mat3 m = misalignment(dg, pair1.first, pair1.second);
  const Mat3 m2 = misalignment(dg, pair2.first, pair2.second);
  const FiniteGroupoid& side = component == 1 ? dg.side_h() : dg.side_v();
  const Mat3& h = side.unique_arrow(pair1.first, pair2.first).map;
  return close(m2, h * m * invert(h), dg.tolerance());
}

bool normalizer_criterion(const MaterialDoubleGroupoid& dg, const PointPair& pair1,
                          const PointPair& pair2) {
  if (!is_compatible(dg, pair1, pair2, 1))
    throw NotOneCompatible("pairs (" + pair1.first.name + "," + pair1.second.name + ") and (" +
                           pair2.first.name + "," + pair2.second.name + ") are not 1-compatible");
  const Mat3 m = misalignment(dg, pair1.first, pair1.second);
  const Mat3 n = misalignment(dg, pair1.first, pair2.first);
  return close(n * m, m * n, dg.tolerance());
}

ComplementaryResult complementary_square(const MaterialDoubleGroupoid& dg, const Square& sq) {
  sq.validate();
  if (!is_commutative(sq, dg.tolerance()))
    throw PreconditionViolated("complementary square needs a commutative square");
  const FiniteGroupoid& h = dg.side_h();
  const FiniteGroupoid& v = dg.side_v();

  ComplementaryResult r;
  r.star = {sq.w,
            sq.x,
            sq.y,
            sq.z,
            v.unique_arrow(sq.w, sq.y),
            v.unique_arrow(sq.x, sq.z),
            h.unique_arrow(sq.w, sq.x),
            h.unique_arrow(sq.y, sq.z)};
  const Mat3& s = sq.s.map;
  const Mat3& t = sq.t.map;
  const Mat3& s_hat = sq.s_hat.map;
  const Mat3& t_hat = sq.t_hat.map;
  const Mat3& s_star = r.star.s.map;
  const Mat3& t_star = r.star.t.map;
  const Mat3& s_hat_star = r.star.s_hat.map;
  const Mat3& t_hat_star = r.star.t_hat.map;

  r.commutative = is_commutative(r.star, dg.tolerance());
  r.condition1 = max_abs_diff(t * s_hat, t_hat * s);
  r.condition2 = max_abs_diff(t * s_hat_star, t_hat_star * s);
  r.condition3 = max_abs_diff(t_star * s_hat, t_hat * s_star);

  r.s_hat_normal = invert(s_hat_star) * s_hat;
  r.q_star = invert(s) * s_star;
  r.p_star = invert(t * s_hat_star) * t_star * s_hat_star;
  r.intertwining_residual = max_abs_diff(r.p_star * r.s_hat_normal, r.s_hat_normal * r.q_star);
  r.p_equals_q = close(r.p_star, r.q_star, dg.tolerance());
  return r;
}

}  // namespace unilab
