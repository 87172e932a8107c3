#include "unilab/foliation.hpp"

#include <algorithm>
#include <cmath>

#include "unilab/errors.hpp"
#include "unilab/geometry.hpp"

namespace unilab {

std::string_view to_string(FoliationClass c) {
  switch (c) {
    case FoliationClass::TotallyNonUniform: return "TotallyNonUniform";
    case FoliationClass::Fibered: return "Fibered";
    case FoliationClass::Laminated: return "Laminated";
    case FoliationClass::UniformBody: return "UniformBody";
    case FoliationClass::Singular: return "Singular";
  }
  return "?";
}

double uniformity_floor(const Ten3& gamma1, const Ten3& gamma2) {
  return 1e-10 * (1.0 + max_abs(gamma1) + max_abs(gamma2));
}

DistributionSample null_space_at(const CompositeSpec& spec, const Vec3& x, double rel_tol) {
  if (spec.symmetry_case != SymmetryCase::DiscreteDiscrete)
    throw PreconditionViolated("null space is defined for discrete-discrete composites only");
  const Ten3 g1 = christoffel(spec.component1, x).gamma;
  const Ten3 g2 = christoffel(spec.component2, x).gamma;
  const Kernel k = kernel_of_flattened(g1 - g2, rel_tol, uniformity_floor(g1, g2));
  return {x, k.dimension, k.basis, k.sigma_max(), k.sigma_min()};
}

FoliationClass classify(const std::array<std::size_t, 4>& hist) {
  std::size_t total = 0;
  for (auto n : hist) total += n;
  if (total == 0) return FoliationClass::Singular;
  for (std::size_t m = 0; m < 4; ++m) {
    if (static_cast<double>(hist[m]) < kClassificationQuorum * static_cast<double>(total)) continue;
    switch (m) {
      case 0: return FoliationClass::TotallyNonUniform;
      case 1: return FoliationClass::Fibered;
      case 2: return FoliationClass::Laminated;
      default: return FoliationClass::UniformBody;
    }
  }
  return FoliationClass::Singular;
}

FoliationReport scan_domain(const CompositeSpec& spec, const BodyDomain& domain, double rel_tol) {
  domain.validate();
  FoliationReport report;
  const std::size_t n = domain.node_count();
  report.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 x = domain.node(i);
    try {
      DistributionSample s = null_space_at(spec, x, rel_tol);
      ++report.m_histogram[static_cast<std::size_t>(s.m)];
      report.samples.push_back(std::move(s));
    } catch (const PreconditionViolated&) {
      throw;
    } catch (const Error& e) {
      report.failures.push_back({x, e.what()});
    }
  }
  if (static_cast<double>(report.failures.size()) > kMaxFailedFraction * static_cast<double>(n)) {
    throw Error("foliation scan: " + std::to_string(report.failures.size()) + " of " +
                std::to_string(n) + " nodes failed; first: " + report.failures.front().message);
  }
  report.classification = classify(report.m_histogram);
  return report;
}

Vec3 lie_bracket(const VectorExpr& v, const VectorExpr& w, const Vec3& x) {
  const Vec3 vx = eval(v, x);
  const Vec3 wx = eval(w, x);
  Vec3 out;
  for (std::size_t k = 0; k < 3; ++k) {
    double s = 0.0;
    for (std::size_t l = 0; l < 3; ++l) {
      s += vx[l] * eval(diff(w[k], l), x);
      s -= wx[l] * eval(diff(v[k], l), x);
    }
    out[k] = s;
  }
  return out;
}

InvolutivityCheck involutivity_residual(const CompositeSpec& spec, const VectorExpr& v,
                                        const VectorExpr& w, const Vec3& x) {
  if (spec.symmetry_case != SymmetryCase::DiscreteDiscrete)
    throw PreconditionViolated("involutivity is checked for discrete-discrete composites only");
  const Ten3 b = measure_case1(spec, x);
  const double bmax = max_abs(b);
  auto normalized = [bmax](const Mat3& bv, const Vec3& vec) {
    const double scale = bmax * max_abs(vec);
    return scale == 0.0 ? 0.0 : max_abs(bv) / scale;
  };

  const Vec3 vx = eval(v, x);
  const Vec3 wx = eval(w, x);
  InvolutivityCheck out;
  out.v_in_kernel = normalized(contract_ten3_vec(b, vx), vx);
  out.w_in_kernel = normalized(contract_ten3_vec(b, wx), wx);
  if (out.v_in_kernel > 1e-6 || out.w_in_kernel > 1e-6) {
    throw PreconditionViolated("vector fields are not in the null space of B (|Bv| = " +
                               std::to_string(out.v_in_kernel) +
                               ", |Bw| = " + std::to_string(out.w_in_kernel) + ")");
  }
  const Vec3 bracket = lie_bracket(v, w, x);
  out.residual = normalized(contract_ten3_vec(b, bracket), bracket);
  return out;
}

FoliationReport scan_domain(const CompositeSpec& spec, const BodyDomain& domain, double rel_tol,
                            const VectorExpr& v, const VectorExpr& w) {
  FoliationReport report = scan_domain(spec, domain, rel_tol);
  for (const DistributionSample& s : report.samples) {
    const InvolutivityCheck c = involutivity_residual(spec, v, w, s.point);
    report.involutivity_max_residual = std::max(report.involutivity_max_residual, c.residual);
  }
  return report;
}

}  // namespace unilab
