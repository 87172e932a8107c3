#pragma once

// First-order (algebroid level) versions of the groupoid constructions:
// the differential of an arrow map and the commutation condition for
// squares shrinking onto a double unit.

#include <string_view>
#include <vector>

#include "unilab/field.hpp"
#include "unilab/measures.hpp"
#include "unilab/tensor.hpp"

namespace unilab {

/// H = P(X') P(X)^{-1}. Throws SingularFrame.
Mat3 arrow_map(const FrameField& f, const Vec3& x, const Vec3& xp);

/// dH^I_J = H^I_M Gamma^M_{JK}(X) dX^K - H^M_J Gamma^I_{MK}(X') dX'^K.
/// Throws SingularFrame.
Mat3 arrow_differential(const FrameField& f, const Vec3& x, const Vec3& xp, const Vec3& dx,
                        const Vec3& dxp);

struct CommutationResidual {
  Mat3 residual;  // B^I_{JK} (dX^K + dY^K - dZ^K)
  Vec3 dx, dy, dz;
};

/// Options shared by the residual and the classification.
struct AlgebroidOptions {
  /// Drop the part of each B_K that is skew with respect to g_1, for
  /// components with continuous (isotropic) symmetry.
  bool project_skew = false;
};

/// B = Gamma_1 - Gamma_2 at w, optionally skew-projected.
/// Throws PreconditionViolated for non discrete-discrete specs.
Ten3 infinitesimal_tensor(const CompositeSpec& spec, const Vec3& w, const AlgebroidOptions& opt = {});

/// Corners X, Y, Z displaced from the double unit at W by dX, dY, dZ.
CommutationResidual commutation_residual(const CompositeSpec& spec, const Vec3& w, const Vec3& dx,
                                         const Vec3& dy, const Vec3& dz,
                                         const AlgebroidOptions& opt = {});

enum class InfinitesimalKind { Uniform, Annihilator, OnlyDoubleUnit };

std::string_view to_string(InfinitesimalKind k);

struct InfinitesimalClassification {
  InfinitesimalKind kind = InfinitesimalKind::OnlyDoubleUnit;
  int m = 0;                 // dimension of the annihilator of B
  std::vector<Vec3> basis;   // orthonormal
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

InfinitesimalClassification infinitesimal_classification(const CompositeSpec& spec, const Vec3& w,
                                                         double rel_tol = 1e-8,
                                                         const AlgebroidOptions& opt = {});

}  // namespace unilab
