#include "unilab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "unilab/errors.hpp"

namespace unilab {

Ten3 connection_from_jet(const FrameJet& jet) {
  Mat3 inv;
  try {
    inv = invert(jet.p);
  } catch (const SingularMatrix& e) {
    throw SingularFrame(e.what());
  }
  Ten3 gamma;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        double s = 0.0;
        for (std::size_t a = 0; a < 3; ++a) s += jet.dp(i, a, k) * inv(a, j);
        gamma(i, j, k) = -s;
      }
  return gamma;
}

ConnectionValue christoffel(const FrameField& f, const Vec3& x) {
  return {connection_from_jet(f.jet(x)), x};
}

namespace {

// Adjugate-based inverse entries as expressions: inv(a, j) = cof(j, a) / det.
std::array<ScalarExpr, 9> symbolic_inverse(const std::array<ScalarExpr, 9>& p) {
  auto m = [&](std::size_t i, std::size_t j) { return p[3 * i + j]; };
  std::array<ScalarExpr, 9> adj;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      // cofactor of entry (j, i)
      const std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const std::size_t c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      adj[3 * i + j] = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    }
  const ScalarExpr d = m(0, 0) * adj[0] + m(0, 1) * adj[3] + m(0, 2) * adj[6];
  std::array<ScalarExpr, 9> inv;
  for (std::size_t i = 0; i < 9; ++i) inv[i] = adj[i] / d;
  return inv;
}

}  // namespace

Ten3 christoffel_inverse_form(const FrameField& f, const Vec3& x) {
  const Mat3 p = f.jet(x).p;
  Ten3 dinv;  // dinv(a, J, K) = d (P^{-1})^a_J / d X^K
  if (f.is_analytic()) {
    const auto inv = symbolic_inverse(f.entries());
    for (std::size_t e = 0; e < 9; ++e)
      for (std::size_t k = 0; k < 3; ++k) dinv.e[3 * e + k] = eval(diff(inv[e], k), x);
  } else {
    const GridField& g = f.grid();
    std::vector<double> values(g.values().size());
    for (std::size_t node = 0; node < values.size() / 9; ++node) {
      Mat3 q;
      std::copy_n(g.values().begin() + static_cast<std::ptrdiff_t>(9 * node), 9, q.e.begin());
      const Mat3 qi = invert(q);
      std::copy(qi.e.begin(), qi.e.end(), values.begin() + static_cast<std::ptrdiff_t>(9 * node));
    }
    const GridField inverse_grid(g.lower(), g.upper(), g.shape(), 9, std::move(values));
    std::vector<double> v;
    std::vector<std::array<double, 3>> grad;
    inverse_grid.evaluate(x, v, grad);
    for (std::size_t e = 0; e < 9; ++e)
      for (std::size_t k = 0; k < 3; ++k) dinv.e[3 * e + k] = grad[e][k];
  }
  Ten3 gamma;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        double s = 0.0;
        for (std::size_t a = 0; a < 3; ++a) s += p(i, a) * dinv(a, j, k);
        gamma(i, j, k) = s;
      }
  return gamma;
}

TorsionValue torsion(const ConnectionValue& c) {
  TorsionValue t{{}, c.point};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = j + 1; k < 3; ++k) {
        const double v = c.gamma(i, j, k) - c.gamma(i, k, j);
        t.tau(i, j, k) = v;
        t.tau(i, k, j) = -v;
      }
  return t;
}

Mat3 metric_from_frame(const Mat3& p) {
  Mat3 inv;
  try {
    inv = invert(p);
  } catch (const SingularMatrix& e) {
    throw SingularFrame(e.what());
  }
  Mat3 g;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t a = 0; a < 3; ++a) s += inv(a, i) * inv(a, j);
      g(i, j) = g(j, i) = s;
    }
  return g;
}

MetricValue metric(const FrameField& f, const Vec3& x) {
  return {metric_from_frame(f.jet(x).p), x};
}

Mat3 covariant_derivative(const DirectorField& n, const FrameField& f, const Vec3& x) {
  const DirectorJet d = n.jet(x);
  const Ten3 gamma = christoffel(f, x).gamma;
  Mat3 out = d.dn;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t m = 0; m < 3; ++m) out(i, k) += gamma(i, m, k) * d.n[m];
  return out;
}

double curvature_residual(const FrameField& f, const Vec3& x, double h) {
  const Ten3 g0 = christoffel(f, x).gamma;
  // dg[K](I, J, L) = Gamma^I_{JL,K}
  std::array<Ten3, 3> dg;
  for (std::size_t k = 0; k < 3; ++k) {
    const Vec3 step = h * Vec3::unit(k);
    const Ten3 plus = christoffel(f, x + step).gamma;
    const Ten3 minus = christoffel(f, x - step).gamma;
    dg[k] = (1.0 / (2.0 * h)) * (plus - minus);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) {
          double r = dg[k](i, j, l) - dg[l](i, j, k);
          for (std::size_t m = 0; m < 3; ++m)
            r += g0(i, m, k) * g0(m, j, l) - g0(i, m, l) * g0(m, j, k);
          worst = std::max(worst, std::abs(r));
        }
  return worst;
}

}  // namespace unilab
