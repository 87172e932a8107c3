#include "unilab/measures.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "unilab/errors.hpp"
#include "unilab/geometry.hpp"

namespace unilab {

namespace {

constexpr std::array<std::pair<std::string_view, SymmetryCase>, 5> kCaseNames{{
    {"discrete-discrete", SymmetryCase::DiscreteDiscrete},
    {"discrete-isotropic", SymmetryCase::DiscreteIsotropic},
    {"discrete-transiso", SymmetryCase::DiscreteTransIso},
    {"iso-iso", SymmetryCase::IsoIso},
    {"transiso-transiso", SymmetryCase::TransIsoTransIso},
}};

double g_inner(const Mat3& g, const Vec3& a, const Vec3& b) { return dot(a, g * b); }

Vec3 g_normalized(const Mat3& g, const Vec3& v) {
  const double len2 = g_inner(g, v, v);
  if (!(len2 > 0.0)) throw DomainError("director has zero metric length");
  return (1.0 / std::sqrt(len2)) * v;
}

}  // namespace

std::string_view to_string(SymmetryCase c) {
  for (const auto& [name, value] : kCaseNames)
    if (value == c) return name;
  return "?";
}

SymmetryCase parse_symmetry_case(std::string_view text) {
  for (const auto& [name, value] : kCaseNames)
    if (name == text) return value;
  throw std::invalid_argument("unknown symmetry case '" + std::string(text) + "'");
}

void CompositeSpec::validate() const {
  const bool wants_n = symmetry_case == SymmetryCase::DiscreteTransIso;
  const bool wants_pair = symmetry_case == SymmetryCase::TransIsoTransIso;
  if (wants_n && !director) throw MissingDirector("discrete-transiso composite needs a director");
  if (wants_pair && (!director1 || !director2))
    throw MissingDirector("transiso-transiso composite needs directors n1 and n2");
  if (!wants_n && director) throw std::invalid_argument("director given for a case that takes none");
  if (!wants_pair && (director1 || director2))
    throw std::invalid_argument("director pair given for a case that takes none");
}

Ten3 measure_case1(const CompositeSpec& spec, const Vec3& x) {
  return christoffel(spec.component1, x).gamma - christoffel(spec.component2, x).gamma;
}

Ten3 measure_case1_covariant(const CompositeSpec& spec, const Vec3& x) {
  const FrameJet jet1 = spec.component1.jet(x);
  const Ten3 gamma2 = christoffel(spec.component2, x).gamma;
  const Mat3 inv1 = invert(jet1.p);

  // semicolon derivative of the frame components of P_1
  Ten3 cov;  // cov(I, a, K) = P^I_{a;K}
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t k = 0; k < 3; ++k) {
        double s = jet1.dp(i, a, k);
        for (std::size_t m = 0; m < 3; ++m) s += gamma2(i, m, k) * jet1.p(m, a);
        cov(i, a, k) = s;
      }

  Ten3 b;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        double s = 0.0;
        for (std::size_t a = 0; a < 3; ++a) s += inv1(a, j) * cov(i, a, k);
        b(i, j, k) = -s;
      }
  return b;
}

Mat3 measure_case2(const CompositeSpec& spec, const Vec3& x) {
  return metric(spec.component1, x).g - metric(spec.component2, x).g;
}

DirectorMeasure measure_case3(const CompositeSpec& spec, const Vec3& x) {
  if (!spec.director) throw MissingDirector("measure_case3 needs a director field");
  return {measure_case2(spec, x), covariant_derivative(*spec.director, spec.component1, x)};
}

AngleMeasure measure_case5(const CompositeSpec& spec, const Vec3& x) {
  if (!spec.director1 || !spec.director2)
    throw MissingDirector("measure_case5 needs director fields n1 and n2");
  const Mat3 p1 = spec.component1.jet(x).p;
  const Mat3 p2 = spec.component2.jet(x).p;
  const Mat3 g1 = metric_from_frame(p1);
  const Mat3 g2 = metric_from_frame(p2);

  const Vec3 n1 = g_normalized(g1, spec.director1->value(x));
  const Vec3 n2 = g_normalized(g1, spec.director2->value(x));
  const Vec3 mapped = p1 * (invert(p2) * n2);
  return {g1 - g2, g_inner(g1, n1, mapped) - g_inner(g1, n1, n2)};
}

MeasureResult measure(const CompositeSpec& spec, const Vec3& x) {
  switch (spec.symmetry_case) {
    case SymmetryCase::DiscreteDiscrete: return measure_case1(spec, x);
    case SymmetryCase::DiscreteIsotropic:
    case SymmetryCase::IsoIso: return measure_case2(spec, x);
    case SymmetryCase::DiscreteTransIso: return measure_case3(spec, x);
    case SymmetryCase::TransIsoTransIso: return measure_case5(spec, x);
  }
  throw std::logic_error("unhandled symmetry case");
}

// ---------------------------------------------------------------------------

bool FiniteMatrixGroup::contains(const Mat3& m, double tol) const {
  for (const Mat3& e : elements)
    if (max_abs_diff(e, m) <= tol) return true;
  return false;
}

void FiniteMatrixGroup::check(double tol) const {
  if (!contains(Mat3::identity(), tol)) throw NotAGroup("identity missing");
  for (const Mat3& a : elements) {
    Mat3 inv;
    try {
      inv = invert(a);
    } catch (const SingularMatrix&) {
      throw NotAGroup("singular element");
    }
    if (!contains(inv, tol)) throw NotAGroup("not closed under inversion");
    for (const Mat3& b : elements)
      if (!contains(a * b, tol)) throw NotAGroup("not closed under products");
  }
}

FiniteMatrixGroup cyclic_group(const Mat3& generator, std::size_t max_order, double tol) {
  FiniteMatrixGroup g{{Mat3::identity()}};
  Mat3 power = generator;
  while (max_abs_diff(power, Mat3::identity()) > tol) {
    if (g.elements.size() >= max_order) throw NotAGroup("generator has no finite order");
    g.elements.push_back(power);
    power = power * generator;
  }
  return g;
}

FiniteMatrixGroup intersect_groups(const FiniteMatrixGroup& g1, const FiniteMatrixGroup& g2,
                                   double tol) {
  g1.check(tol);
  g2.check(tol);
  FiniteMatrixGroup out;
  for (const Mat3& a : g1.elements)
    if (g2.contains(a, tol)) out.elements.push_back(a);
  return out;
}

}  // namespace unilab
