#include "unilab/algebroid.hpp"

#include "unilab/errors.hpp"
#include "unilab/foliation.hpp"
#include "unilab/geometry.hpp"

namespace unilab {

namespace {

Mat3 slice(const Ten3& b, std::size_t k) {
  Mat3 out;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out(i, j) = b(i, j, k);
  return out;
}

void require_case1(const CompositeSpec& spec) {
  if (spec.symmetry_case != SymmetryCase::DiscreteDiscrete)
    throw PreconditionViolated("infinitesimal commutation is defined for discrete-discrete composites");
}

}  // namespace

Mat3 arrow_map(const FrameField& f, const Vec3& x, const Vec3& xp) {
  return f.jet(xp).p * invert(f.jet(x).p);
}

Mat3 arrow_differential(const FrameField& f, const Vec3& x, const Vec3& xp, const Vec3& dx,
                        const Vec3& dxp) {
  const FrameJet jx = f.jet(x);
  const FrameJet jxp = f.jet(xp);
  const Mat3 h = jxp.p * invert(jx.p);
  const Mat3 gx = contract_ten3_vec(connection_from_jet(jx), dx);
  const Mat3 gxp = contract_ten3_vec(connection_from_jet(jxp), dxp);
  return h * gx - gxp * h;
}

Ten3 infinitesimal_tensor(const CompositeSpec& spec, const Vec3& w, const AlgebroidOptions& opt) {
  require_case1(spec);
  Ten3 b = measure_case1(spec, w);
  if (!opt.project_skew) return b;

  // A is g-skew when g A is antisymmetric; keep g^{-1} sym(g A).
  const Mat3 g = metric(spec.component1, w).g;
  const Mat3 g_inv = invert(g);
  for (std::size_t k = 0; k < 3; ++k) {
    const Mat3 ga = g * slice(b, k);
    const Mat3 kept = g_inv * (0.5 * (ga + transpose(ga)));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) b(i, j, k) = kept(i, j);
  }
  return b;
}

CommutationResidual commutation_residual(const CompositeSpec& spec, const Vec3& w, const Vec3& dx,
                                         const Vec3& dy, const Vec3& dz, const AlgebroidOptions& opt) {
  const Ten3 b = infinitesimal_tensor(spec, w, opt);
  return {contract_ten3_vec(b, dx + dy - dz), dx, dy, dz};
}

std::string_view to_string(InfinitesimalKind k) {
  switch (k) {
    case InfinitesimalKind::Uniform: return "uniform";
    case InfinitesimalKind::Annihilator: return "annihilator";
    case InfinitesimalKind::OnlyDoubleUnit: return "only-double-unit";
  }
  return "?";
}

InfinitesimalClassification infinitesimal_classification(const CompositeSpec& spec, const Vec3& w,
                                                         double rel_tol, const AlgebroidOptions& opt) {
  const Ten3 b = infinitesimal_tensor(spec, w, opt);
  const Ten3 g1 = christoffel(spec.component1, w).gamma;
  const Ten3 g2 = christoffel(spec.component2, w).gamma;
  const Kernel k = kernel_of_flattened(b, rel_tol, uniformity_floor(g1, g2));

  InfinitesimalClassification out;
  out.m = k.dimension;
  out.basis = k.basis;
  out.sigma_max = k.sigma_max();
  out.sigma_min = k.sigma_min();
  if (k.dimension == 3)
    out.kind = InfinitesimalKind::Uniform;
  else if (k.dimension == 0)
    out.kind = InfinitesimalKind::OnlyDoubleUnit;
  else
    out.kind = InfinitesimalKind::Annihilator;
  return out;
}

}  // namespace unilab
