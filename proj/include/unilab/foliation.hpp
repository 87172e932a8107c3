#pragma once

// Null-space distribution of the discrete-discrete non-uniformity tensor B
// and the resulting classification of the body into uniform leaves.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "unilab/expr.hpp"
#include "unilab/measures.hpp"

namespace unilab {

struct DistributionSample {
  Vec3 point;
  int m = 0;  // dimension of {v : Bv = 0}
  std::vector<Vec3> basis;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

enum class FoliationClass { TotallyNonUniform, Fibered, Laminated, UniformBody, Singular };

std::string_view to_string(FoliationClass c);

struct NodeFailure {
  Vec3 point;
  std::string message;
};

struct FoliationReport {
  std::vector<DistributionSample> samples;
  std::vector<NodeFailure> failures;
  FoliationClass classification = FoliationClass::Singular;
  std::array<std::size_t, 4> m_histogram{};
  double involutivity_max_residual = 0.0;
};

/// Scale-aware zero test for B: 1e-10 (1 + max|Gamma_1| + max|Gamma_2|).
double uniformity_floor(const Ten3& gamma1, const Ten3& gamma2);

/// Kernel of B(X) = Gamma_1 - Gamma_2. Below uniformity_floor B counts as
/// zero (m = 3). Throws PreconditionViolated for non discrete-discrete specs.
DistributionSample null_space_at(const CompositeSpec& spec, const Vec3& x, double rel_tol = 1e-8);

/// Constant-m classes need the same m on at least this fraction of nodes.
inline constexpr double kClassificationQuorum = 0.99;
/// Scans fail as a whole when more than this fraction of nodes throw.
inline constexpr double kMaxFailedFraction = 0.10;

FoliationClass classify(const std::array<std::size_t, 4>& m_histogram);

/// Evaluates null_space_at on the domain lattice and classifies the body.
FoliationReport scan_domain(const CompositeSpec& spec, const BodyDomain& domain,
                            double rel_tol = 1e-8);

/// [v, w]^K = v^L w^K_{,L} - w^L v^K_{,L} with exact derivatives.
Vec3 lie_bracket(const VectorExpr& v, const VectorExpr& w, const Vec3& x);

struct InvolutivityCheck {
  double residual = 0.0;     // max|B [v,w]| / (max|B| max|[v,w]|)
  double v_in_kernel = 0.0;  // max|B v| / (max|B| max|v|)
  double w_in_kernel = 0.0;
};

/// Normalised involutivity residual of two in-kernel fields. Throws
/// PreconditionViolated when v or w leave the kernel by more than 1e-6.
InvolutivityCheck involutivity_residual(const CompositeSpec& spec, const VectorExpr& v,
                                        const VectorExpr& w, const Vec3& x);

/// scan_domain plus the largest involutivity residual of the given
/// in-kernel fields over the lattice.
FoliationReport scan_domain(const CompositeSpec& spec, const BodyDomain& domain, double rel_tol,
                            const VectorExpr& v, const VectorExpr& w);

}  // namespace unilab
