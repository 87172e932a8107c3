#include "unilab/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unilab/errors.hpp"

namespace unilab {

void BodyDomain::validate() const {
  for (std::size_t d = 0; d < 3; ++d) {
    if (!(upper[d] > lower[d])) throw std::invalid_argument("domain: upper must exceed lower");
    if (resolution[d] < 2) throw std::invalid_argument("domain: resolution must be >= 2");
  }
}

bool BodyDomain::contains(const Vec3& x, double slack) const {
  for (std::size_t d = 0; d < 3; ++d) {
    const double pad = slack * (upper[d] - lower[d]);
    if (x[d] < lower[d] - pad || x[d] > upper[d] + pad) return false;
  }
  return true;
}

std::size_t BodyDomain::node_count() const {
  return static_cast<std::size_t>(resolution[0]) * static_cast<std::size_t>(resolution[1]) *
         static_cast<std::size_t>(resolution[2]);
}

Vec3 BodyDomain::node(std::size_t index) const {
  const auto n0 = static_cast<std::size_t>(resolution[0]);
  const auto n1 = static_cast<std::size_t>(resolution[1]);
  const std::array<std::size_t, 3> idx{index % n0, (index / n0) % n1, index / (n0 * n1)};
  Vec3 x;
  for (std::size_t d = 0; d < 3; ++d)
    x[d] = lower[d] + (upper[d] - lower[d]) * static_cast<double>(idx[d]) /
                          static_cast<double>(resolution[d] - 1);
  return x;
}

std::vector<Vec3> BodyDomain::lattice() const {
  std::vector<Vec3> out;
  out.reserve(node_count());
  for (std::size_t i = 0; i < node_count(); ++i) out.push_back(node(i));
  return out;
}

// ---------------------------------------------------------------------------

GridField::GridField(Vec3 lower, Vec3 upper, std::array<int, 3> shape, std::size_t components,
                     std::vector<double> values)
    : lower_(lower), upper_(upper), shape_(shape), components_(components),
      values_(std::move(values)) {
  for (std::size_t d = 0; d < 3; ++d) {
    if (shape_[d] < 3) throw std::invalid_argument("grid needs at least 3 nodes per axis");
    if (!(upper_[d] > lower_[d])) throw std::invalid_argument("grid box is empty");
    spacing_[d] = (upper_[d] - lower_[d]) / (shape_[d] - 1);
  }
  const auto expected =
      static_cast<std::size_t>(shape_[0]) * static_cast<std::size_t>(shape_[1]) *
      static_cast<std::size_t>(shape_[2]) * components_;
  if (values_.size() != expected) throw std::invalid_argument("grid sample count mismatch");
}

double GridField::at(int i, int j, int k, std::size_t c) const {
  const auto node = static_cast<std::size_t>(i + shape_[0] * (j + shape_[1] * k));
  return values_[node * components_ + c];
}

double GridField::node_derivative(int i, int j, int k, std::size_t c, std::size_t axis) const {
  std::array<int, 3> idx{i, j, k};
  const int n = shape_[axis];
  auto f = [&](int offset) {
    std::array<int, 3> q = idx;
    q[axis] += offset;
    return at(q[0], q[1], q[2], c);
  };
  const double h = spacing_[axis];
  const int p = idx[axis];
  if (p == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  if (p == n - 1) return (3.0 * f(0) - 4.0 * f(-1) + f(-2)) / (2.0 * h);
  return (f(1) - f(-1)) / (2.0 * h);
}

void GridField::evaluate(const Vec3& x, std::vector<double>& value,
                         std::vector<std::array<double, 3>>& gradient) const {
  std::array<int, 3> cell{};
  std::array<double, 3> frac{};
  for (std::size_t d = 0; d < 3; ++d) {
    const double t = (x[d] - lower_[d]) / spacing_[d];
    const double slack = 1e-9;
    if (t < -slack || t > (shape_[d] - 1) + slack || !std::isfinite(t)) {
      throw OutOfDomain("point outside sampled grid");
    }
    cell[d] = std::clamp(static_cast<int>(std::floor(t)), 0, shape_[d] - 2);
    frac[d] = std::clamp(t - cell[d], 0.0, 1.0);
  }

  value.assign(components_, 0.0);
  gradient.assign(components_, {0.0, 0.0, 0.0});
  for (int corner = 0; corner < 8; ++corner) {
    const std::array<int, 3> o{corner & 1, (corner >> 1) & 1, (corner >> 2) & 1};
    double w = 1.0;
    for (std::size_t d = 0; d < 3; ++d) w *= o[d] ? frac[d] : 1.0 - frac[d];
    if (w == 0.0) continue;
    const int i = cell[0] + o[0], j = cell[1] + o[1], k = cell[2] + o[2];
    for (std::size_t c = 0; c < components_; ++c) {
      value[c] += w * at(i, j, k, c);
      for (std::size_t a = 0; a < 3; ++a) gradient[c][a] += w * node_derivative(i, j, k, c, a);
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

double eval_in_domain(const ScalarExpr& e, const Vec3& x) {
  try {
    return eval(e, x);
  } catch (const DomainError& err) {
    throw OutOfDomain(err.what());
  } catch (const NonFinite& err) {
    throw OutOfDomain(err.what());
  }
}

void check_invertible(const Mat3& p) {
  if (!(std::abs(det(p)) > singular_tolerance(p)) || max_abs(p) == 0.0) {
    throw SingularFrame("frame is not invertible (det = " + std::to_string(det(p)) + ")");
  }
}

}  // namespace

FrameField FrameField::analytic(const std::array<ScalarExpr, 9>& entries) {
  Analytic a;
  a.entries = entries;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t al = 0; al < 3; ++al)
      for (std::size_t k = 0; k < 3; ++k) a.derivatives[9 * i + 3 * al + k] = diff(entries[3 * i + al], k);
  return FrameField(std::move(a));
}

FrameField FrameField::analytic(const std::array<std::string, 9>& entries) {
  std::array<ScalarExpr, 9> parsed;
  for (std::size_t i = 0; i < 9; ++i) parsed[i] = parse(entries[i]);
  return analytic(parsed);
}

FrameField FrameField::constant(const Mat3& m) {
  std::array<ScalarExpr, 9> entries;
  for (std::size_t i = 0; i < 9; ++i) entries[i] = number(m.e[i]);
  return analytic(entries);
}

FrameField FrameField::sampled(GridField grid) {
  if (grid.components() != 9) throw std::invalid_argument("frame grid needs 9 components");
  return FrameField(std::move(grid));
}

const std::array<ScalarExpr, 9>& FrameField::entries() const {
  if (const auto* a = std::get_if<Analytic>(&repr_)) return a->entries;
  throw std::logic_error("sampled frame field has no entry expressions");
}

const GridField& FrameField::grid() const {
  if (const auto* g = std::get_if<GridField>(&repr_)) return *g;
  throw std::logic_error("analytic frame field has no grid");
}

Mat3 FrameField::value(const Vec3& x) const {
  Mat3 p;
  if (const auto* a = std::get_if<Analytic>(&repr_)) {
    for (std::size_t i = 0; i < 9; ++i) p.e[i] = eval_in_domain(a->entries[i], x);
  } else {
    std::vector<double> v;
    std::vector<std::array<double, 3>> g;
    std::get<GridField>(repr_).evaluate(x, v, g);
    std::copy(v.begin(), v.end(), p.e.begin());
  }
  return p;
}

FrameJet FrameField::jet(const Vec3& x) const {
  FrameJet out;
  if (const auto* a = std::get_if<Analytic>(&repr_)) {
    for (std::size_t i = 0; i < 9; ++i) out.p.e[i] = eval_in_domain(a->entries[i], x);
    check_invertible(out.p);
    for (std::size_t i = 0; i < 27; ++i) out.dp.e[i] = eval_in_domain(a->derivatives[i], x);
  } else {
    std::vector<double> v;
    std::vector<std::array<double, 3>> g;
    std::get<GridField>(repr_).evaluate(x, v, g);
    std::copy(v.begin(), v.end(), out.p.e.begin());
    check_invertible(out.p);
    for (std::size_t e = 0; e < 9; ++e)
      for (std::size_t k = 0; k < 3; ++k) out.dp.e[3 * e + k] = g[e][k];
  }
  return out;
}

FrameField FrameField::right_multiplied(const Mat3& c) const {
  if (const auto* a = std::get_if<Analytic>(&repr_)) {
    std::array<ScalarExpr, 9> entries;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        ScalarExpr s = number(0.0);
        for (std::size_t k = 0; k < 3; ++k) s = s + a->entries[3 * i + k] * number(c(k, j));
        entries[3 * i + j] = s;
      }
    return analytic(entries);
  }
  const GridField& g = std::get<GridField>(repr_);
  std::vector<double> values(g.values().size());
  for (std::size_t node = 0; node < values.size() / 9; ++node) {
    Mat3 p;
    std::copy_n(g.values().begin() + static_cast<std::ptrdiff_t>(9 * node), 9, p.e.begin());
    const Mat3 q = p * c;
    std::copy(q.e.begin(), q.e.end(), values.begin() + static_cast<std::ptrdiff_t>(9 * node));
  }
  return sampled(GridField(g.lower(), g.upper(), g.shape(), 9, std::move(values)));
}

FrameField FrameField::sampled_on(const Vec3& lower, const Vec3& upper,
                                  std::array<int, 3> shape) const {
  return sampled(GridField::sample(lower, upper, shape, 9,
                                   [this](const Vec3& x) { return value(x).e; }));
}

// ---------------------------------------------------------------------------

DirectorField DirectorField::analytic(const VectorExpr& components) {
  Analytic a;
  a.components = components;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) a.derivatives[3 * i + k] = diff(components[i], k);
  return DirectorField(std::move(a));
}

DirectorField DirectorField::analytic(const std::array<std::string, 3>& components) {
  return analytic(parse_vector(components));
}

DirectorField DirectorField::constant(const Vec3& n) {
  return analytic(VectorExpr{number(n[0]), number(n[1]), number(n[2])});
}

DirectorField DirectorField::sampled(GridField grid) {
  if (grid.components() != 3) throw std::invalid_argument("director grid needs 3 components");
  return DirectorField(std::move(grid));
}

DirectorJet DirectorField::jet(const Vec3& x) const {
  DirectorJet out;
  if (const auto* a = std::get_if<Analytic>(&repr_)) {
    for (std::size_t i = 0; i < 3; ++i) out.n[i] = eval_in_domain(a->components[i], x);
    for (std::size_t i = 0; i < 9; ++i) out.dn.e[i] = eval_in_domain(a->derivatives[i], x);
  } else {
    std::vector<double> v;
    std::vector<std::array<double, 3>> g;
    std::get<GridField>(repr_).evaluate(x, v, g);
    for (std::size_t i = 0; i < 3; ++i) {
      out.n[i] = v[i];
      for (std::size_t k = 0; k < 3; ++k) out.dn(i, k) = g[i][k];
    }
  }
  if (norm(out.n) == 0.0) throw DomainError("director field vanishes");
  return out;
}

}  // namespace unilab
