#pragma once

// Frame fields P(X) and director fields n(X), either analytic (expression
// entries, exact derivatives) or sampled on an axis-aligned grid (second
// order finite differences, trilinear interpolation between nodes).

#include <array>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "unilab/expr.hpp"
#include "unilab/tensor.hpp"

namespace unilab {

/// Axis-aligned box with a sampling lattice.
struct BodyDomain {
  Vec3 lower{0.0, 0.0, 0.0};
  Vec3 upper{1.0, 1.0, 1.0};
  std::array<int, 3> resolution{2, 2, 2};

  /// Throws std::invalid_argument unless upper > lower and resolution >= 2 per axis.
  void validate() const;
  bool contains(const Vec3& x, double slack = 1e-12) const;
  std::size_t node_count() const;
  /// Lattice node with x1 varying fastest.
  Vec3 node(std::size_t index) const;
  std::vector<Vec3> lattice() const;
};

/// Node samples of an n-component field on a regular grid. Node (i, j, k)
/// is stored at index i + n1 * (j + n2 * k); each node holds `components`
/// consecutive values.
class GridField {
 public:
  GridField(Vec3 lower, Vec3 upper, std::array<int, 3> shape, std::size_t components,
            std::vector<double> values);

  /// Samples `f(X)` (returning `components` values) at every node.
  template <typename F>
  static GridField sample(const Vec3& lower, const Vec3& upper, std::array<int, 3> shape,
                          std::size_t components, F&& f);

  std::size_t components() const { return components_; }
  const Vec3& lower() const { return lower_; }
  const Vec3& upper() const { return upper_; }
  const std::array<int, 3>& shape() const { return shape_; }
  Vec3 spacing() const { return spacing_; }
  const std::vector<double>& values() const { return values_; }

  /// Interpolated value and gradient at x: value[c], gradient[c][axis].
  /// Throws OutOfDomain outside the box.
  void evaluate(const Vec3& x, std::vector<double>& value,
                std::vector<std::array<double, 3>>& gradient) const;

 private:
  double at(int i, int j, int k, std::size_t c) const;
  double node_derivative(int i, int j, int k, std::size_t c, std::size_t axis) const;

  Vec3 lower_, upper_, spacing_;
  std::array<int, 3> shape_;
  std::size_t components_;
  std::vector<double> values_;
};

template <typename F>
GridField GridField::sample(const Vec3& lower, const Vec3& upper, std::array<int, 3> shape,
                            std::size_t components, F&& f) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(shape[0] * shape[1] * shape[2]) * components);
  for (int k = 0; k < shape[2]; ++k)
    for (int j = 0; j < shape[1]; ++j)
      for (int i = 0; i < shape[0]; ++i) {
        const std::array<int, 3> idx{i, j, k};
        Vec3 x;
        for (std::size_t d = 0; d < 3; ++d)
          x[d] = lower[d] + (upper[d] - lower[d]) * idx[d] / (shape[d] - 1);
        const auto v = f(x);
        values.insert(values.end(), v.begin(), v.end());
      }
  return GridField(lower, upper, shape, components, std::move(values));
}

/// P and its partial derivatives: dp(I, a, K) = d P^I_a / d X^K.
struct FrameJet {
  Mat3 p;
  Ten3 dp;
};

class FrameField {
 public:
  /// Nine row-major entry expressions.
  static FrameField analytic(const std::array<ScalarExpr, 9>& entries);
  static FrameField analytic(const std::array<std::string, 9>& entries);
  static FrameField constant(const Mat3& m);
  /// Grid of 9-component row-major samples; at least 3 nodes per axis.
  static FrameField sampled(GridField grid);

  bool is_analytic() const { return std::holds_alternative<Analytic>(repr_); }
  /// Entry expressions; throws std::logic_error for sampled fields.
  const std::array<ScalarExpr, 9>& entries() const;
  const GridField& grid() const;

  /// P(X). Throws OutOfDomain.
  Mat3 value(const Vec3& x) const;
  /// P(X) and dP(X). Throws SingularFrame when P(X) is not invertible, OutOfDomain.
  FrameJet jet(const Vec3& x) const;

  /// The field X -> P(X) C for a constant C.
  FrameField right_multiplied(const Mat3& c) const;
  /// Samples an analytic field onto a grid.
  FrameField sampled_on(const Vec3& lower, const Vec3& upper, std::array<int, 3> shape) const;

 private:
  struct Analytic {
    std::array<ScalarExpr, 9> entries;
    std::array<ScalarExpr, 27> derivatives;  // index 9*I + 3*a + K
  };
  explicit FrameField(Analytic a) : repr_(std::move(a)) {}
  explicit FrameField(GridField g) : repr_(std::move(g)) {}

  std::variant<Analytic, GridField> repr_;
};

/// Director n(X) with its gradient: dn(I, K) = d n^I / d X^K.
struct DirectorJet {
  Vec3 n;
  Mat3 dn;
};

class DirectorField {
 public:
  static DirectorField analytic(const VectorExpr& components);
  static DirectorField analytic(const std::array<std::string, 3>& components);
  static DirectorField constant(const Vec3& n);
  static DirectorField sampled(GridField grid);

  /// Throws OutOfDomain; DomainError when n(X) vanishes.
  DirectorJet jet(const Vec3& x) const;
  Vec3 value(const Vec3& x) const { return jet(x).n; }

 private:
  struct Analytic {
    VectorExpr components;
    std::array<ScalarExpr, 9> derivatives;  // index 3*I + K
  };
  explicit DirectorField(Analytic a) : repr_(std::move(a)) {}
  explicit DirectorField(GridField g) : repr_(std::move(g)) {}

  std::variant<Analytic, GridField> repr_;
};

/// Thin convenience wrapper matching frame_jet(F, X).
inline FrameJet frame_jet(const FrameField& f, const Vec3& x) { return f.jet(x); }

}  // namespace unilab
