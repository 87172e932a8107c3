#pragma once

// Case-wise measures of non-uniformity of a binary composite.
//
//   discrete-discrete    B = Gamma_1 - Gamma_2                 (third order)
//   discrete-isotropic   B = g_1 - g_2
//   discrete-transiso    B = g_1 - g_2,  B_hat = nabla_1 n
//   iso-iso              B = g_1 - g_2
//   transiso-transiso    B = g_1 - g_2,  angle defect
//                        <n1, P1 P2^{-1} n2> - <n1, n2>  in the metric g_1

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "unilab/field.hpp"
#include "unilab/tensor.hpp"

namespace unilab {

enum class SymmetryCase { DiscreteDiscrete, DiscreteIsotropic, DiscreteTransIso, IsoIso, TransIsoTransIso };

/// Config spellings: "discrete-discrete", "discrete-isotropic",
/// "discrete-transiso", "iso-iso", "transiso-transiso".
std::string_view to_string(SymmetryCase c);
/// Throws std::invalid_argument for unknown spellings.
SymmetryCase parse_symmetry_case(std::string_view text);

struct CompositeSpec {
  FrameField component1;
  FrameField component2;
  SymmetryCase symmetry_case = SymmetryCase::DiscreteDiscrete;
  std::optional<DirectorField> director;   // discrete-transiso
  std::optional<DirectorField> director1;  // transiso-transiso
  std::optional<DirectorField> director2;

  /// Throws MissingDirector when a required director is absent and
  /// std::invalid_argument when an unexpected one is present.
  void validate() const;
};

Ten3 measure_case1(const CompositeSpec& spec, const Vec3& x);

/// Same tensor through B^I_{JK} = -P^{-a}_J P^I_{a;K}, the semicolon being
/// the covariant derivative with respect to component 2's connection.
Ten3 measure_case1_covariant(const CompositeSpec& spec, const Vec3& x);

/// g_1 - g_2. Also serves the iso-iso case.
Mat3 measure_case2(const CompositeSpec& spec, const Vec3& x);

struct DirectorMeasure {
  Mat3 metric_defect;  // g_1 - g_2
  Mat3 director_gradient;  // nabla_1 n
};
DirectorMeasure measure_case3(const CompositeSpec& spec, const Vec3& x);

struct AngleMeasure {
  Mat3 metric_defect;
  double angle_defect = 0.0;
};
/// Directors are normalised to unit g_1-length before the defect is formed.
AngleMeasure measure_case5(const CompositeSpec& spec, const Vec3& x);

using MeasureResult = std::variant<Ten3, Mat3, DirectorMeasure, AngleMeasure>;

/// Dispatches on spec.symmetry_case.
MeasureResult measure(const CompositeSpec& spec, const Vec3& x);

struct FiniteMatrixGroup {
  std::vector<Mat3> elements;

  bool contains(const Mat3& m, double tol) const;
  /// Throws NotAGroup unless the set holds the identity and is closed under
  /// products and inverses (max-entry distance tol).
  void check(double tol) const;
};

FiniteMatrixGroup cyclic_group(const Mat3& generator, std::size_t max_order = 64, double tol = 1e-9);

/// Elements of g1 lying within tol of some element of g2.
FiniteMatrixGroup intersect_groups(const FiniteMatrixGroup& g1, const FiniteMatrixGroup& g2,
                                   double tol = 1e-9);

}  // namespace unilab
