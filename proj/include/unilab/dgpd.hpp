#pragma once

// Squares over two side groupoids on a common base (component 1 horizontal,
// component 2 vertical) and the material double groupoid of commutative
// squares.
//
// Orientation, with the second factor of a product applied first:
//
//      Z <---t---- X
//      ^           ^
//    t_hat       s_hat
//      |           |
//      Y <---s---- W
//
// Commutation: t s_hat = t_hat s as maps T_W -> T_Z.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "unilab/groupoid.hpp"

namespace unilab {

inline constexpr double kCommutationTolerance = 1e-9;

struct Square {
  PointId w, x, y, z;
  Arrow s;      // W -> Y, horizontal
  Arrow t;      // X -> Z, horizontal
  Arrow s_hat;  // W -> X, vertical
  Arrow t_hat;  // Y -> Z, vertical

  /// Throws InconsistentCorners when an arrow does not join its corners.
  void validate() const;
};

/// Corners are read off the arrows. Throws InconsistentCorners.
Square make_square(Arrow s, Arrow t, Arrow s_hat, Arrow t_hat);

/// max|t s_hat - t_hat s|. Throws InconsistentCorners.
double commutation_defect(const Square& sq);
bool is_commutative(const Square& sq, double tol = kCommutationTolerance);

/// Arrow maps and corners agree within tol.
bool same_square(const Square& a, const Square& b, double tol = kArrowTolerance);

/// a glued to the left of b along a.s_hat = b.t_hat. Throws NotComposable.
Square hcompose(const Square& a, const Square& b, double tol = kArrowTolerance);
/// a stacked on b along a.s = b.t. Throws NotComposable.
Square vcompose(const Square& a, const Square& b, double tol = kArrowTolerance);

/// Inverse for hcompose: hcompose(a, h_inverse(a)) = h_unit(a.t_hat).
Square h_inverse(const Square& a);
/// Inverse for vcompose: vcompose(a, v_inverse(a)) = v_unit(a.t).
Square v_inverse(const Square& a);

/// Left and right edges v_arrow, top and bottom units.
Square h_unit(const Arrow& v_arrow);
/// Top and bottom edges h_arrow, left and right units.
Square v_unit(const Arrow& h_arrow);

/// (a.h b).v(c.h d) against (a.v c).h(b.v d). Throws NotComposable naming
/// the product that is undefined.
bool interchange_check(const Square& a, const Square& b, const Square& c, const Square& d,
                       double tol = 1e-10);

/// Swaps s <-> s_hat, t <-> t_hat and the corners X <-> Y.
Square transpose(const Square& sq);

/// Every endpoint-consistent quadruple (s, t, s_hat, t_hat). Throws SizeLimit
/// past max_squares and std::invalid_argument when the bases differ.
std::vector<Square> coarse_enumerate(const FiniteGroupoid& side_h, const FiniteGroupoid& side_v,
                                     std::size_t max_squares = 1'000'000);

class MaterialDoubleGroupoid {
 public:
  MaterialDoubleGroupoid() = default;
  /// Throws PreconditionViolated when a square is not commutative or uses
  /// an arrow missing from its side groupoid.
  MaterialDoubleGroupoid(FiniteGroupoid side_h, FiniteGroupoid side_v, std::vector<Square> squares,
                         double tolerance = kCommutationTolerance);

  /// All commutative squares of the coarse double groupoid.
  static MaterialDoubleGroupoid generate(FiniteGroupoid side_h, FiniteGroupoid side_v,
                                         double tolerance = kCommutationTolerance,
                                         std::size_t max_squares = 1'000'000);

  const FiniteGroupoid& side_h() const { return side_h_; }
  const FiniteGroupoid& side_v() const { return side_v_; }
  const std::vector<Square>& squares() const { return squares_; }
  double tolerance() const { return tolerance_; }

 private:
  FiniteGroupoid side_h_;
  FiniteGroupoid side_v_;
  std::vector<Square> squares_;
  double tolerance_ = kCommutationTolerance;
};

struct UnfilledPair {
  Arrow h_arrow;  // candidate s
  Arrow v_arrow;  // candidate s_hat
};

/// Source pairs (s, s_hat) with a common tail that no square has as its
/// double source.
std::vector<UnfilledPair> filling_check(const FiniteGroupoid& side_h, const FiniteGroupoid& side_v,
                                        const std::vector<Square>& squares,
                                        double tol = kArrowTolerance);
std::vector<UnfilledPair> filling_check(const MaterialDoubleGroupoid& dg);

struct CoreArrow {
  PointId source;  // W
  PointId target;  // Z
  Mat3 h_map;      // t
  Mat3 v_map;      // t_hat
};

struct CoreGroupoid {
  PointSet base;
  std::vector<CoreArrow> arrows;
};

/// Pairs (t, t_hat) of squares with W = X = Y and unit s, s_hat.
CoreGroupoid core(const MaterialDoubleGroupoid& dg);
bool is_uniform(const MaterialDoubleGroupoid& dg);

/// (u*)^{-1} u with u, u* the component-1 and component-2 arrows X -> Y.
/// Throws NotTransitive or NotTriclinic.
Mat3 misalignment(const MaterialDoubleGroupoid& dg, const PointId& x, const PointId& y);

/// Both side groupoids and every square pushed through a -> H(Y) a H(X)^{-1}.
/// Throws SingularJacobian.
MaterialDoubleGroupoid apply_config_change(const MaterialDoubleGroupoid& dg,
                                           const std::map<PointId, Mat3>& jacobians);

using PointPair = std::pair<PointId, PointId>;

/// m' = H m H^{-1} with H the component-`component` arrow X -> X'.
bool is_compatible(const MaterialDoubleGroupoid& dg, const PointPair& pair1, const PointPair& pair2,
                   int component);

/// For 1-compatible pairs: 2-compatible iff n = (s*)^{-1} s commutes with m.
/// Throws NotOneCompatible.
bool normalizer_criterion(const MaterialDoubleGroupoid& dg, const PointPair& pair1,
                          const PointPair& pair2);

struct ComplementaryResult {
  Square star;  // s*, t* from component 2; s_hat*, t_hat* from component 1
  bool commutative = false;
  double condition1 = 0.0;  // |t s_hat - t_hat s|
  double condition2 = 0.0;  // |t s_hat* - t_hat* s|
  double condition3 = 0.0;  // |t* s_hat - t_hat s*|
  // Matrices after the configuration change that sends s, t, s_hat*, t_hat*
  // to the identity.
  Mat3 p_star, q_star, s_hat_normal;
  double intertwining_residual = 0.0;  // |P* S - S Q*|
  bool p_equals_q = false;
};

/// Throws NotTriclinic / NotTransitive, and PreconditionViolated when sq is
/// not commutative.
ComplementaryResult complementary_square(const MaterialDoubleGroupoid& dg, const Square& sq);

}  // namespace unilab
