#include "unilab/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "unilab/errors.hpp"

namespace unilab {

Vec3& Vec3::operator+=(const Vec3& o) {
  for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
  return *this;
}
Vec3& Vec3::operator-=(const Vec3& o) {
  for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
  return *this;
}
Vec3& Vec3::operator*=(double s) {
  for (auto& x : c) x *= s;
  return *this;
}

Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
Vec3 operator-(const Vec3& a) { return -1.0 * a; }
Vec3 operator*(double s, Vec3 a) { return a *= s; }
Vec3 operator*(Vec3 a, double s) { return a *= s; }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

double max_abs(const Vec3& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

bool is_finite(const Vec3& a) {
  return std::all_of(a.c.begin(), a.c.end(), [](double x) { return std::isfinite(x); });
}

Mat3 Mat3::from_rows(const std::array<double, 9>& row_major) {
  Mat3 m;
  m.e = row_major;
  return m;
}

Mat3& Mat3::operator+=(const Mat3& o) {
  for (std::size_t i = 0; i < 9; ++i) e[i] += o.e[i];
  return *this;
}
Mat3& Mat3::operator-=(const Mat3& o) {
  for (std::size_t i = 0; i < 9; ++i) e[i] -= o.e[i];
  return *this;
}
Mat3& Mat3::operator*=(double s) {
  for (auto& x : e) x *= s;
  return *this;
}

Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
Mat3 operator-(const Mat3& a) { return -1.0 * a; }
Mat3 operator*(double s, Mat3 a) { return a *= s; }
Mat3 operator*(Mat3 a, double s) { return a *= s; }

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
  Vec3 r;
  for (std::size_t i = 0; i < 3; ++i) r[i] = a(i, 0) * v[0] + a(i, 1) * v[1] + a(i, 2) * v[2];
  return r;
}

Mat3 transpose(const Mat3& m) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = m(j, i);
  return r;
}

double det(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double trace(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

double max_abs(const Mat3& m) {
  double r = 0.0;
  for (double x : m.e) r = std::max(r, std::abs(x));
  return r;
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < 9; ++i) r = std::max(r, std::abs(a.e[i] - b.e[i]));
  return r;
}

bool is_finite(const Mat3& m) {
  return std::all_of(m.e.begin(), m.e.end(), [](double x) { return std::isfinite(x); });
}

double singular_tolerance(const Mat3& m) {
  const double s = max_abs(m);
  return 1e-12 * s * s * s;
}

Mat3 invert(const Mat3& m) {
  const double d = det(m);
  if (!(std::abs(d) > singular_tolerance(m)) || max_abs(m) == 0.0) {
    throw SingularMatrix("matrix is singular (det = " + std::to_string(d) + ")");
  }
  Mat3 r;
  r(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  r(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  r(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  r(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  r(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  r(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  r(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  r(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  r(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return (1.0 / d) * r;
}

Mat3 rotation_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Mat3::from_rows({1, 0, 0, 0, c, -s, 0, s, c});
}

Mat3 rotation_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Mat3::from_rows({c, 0, s, 0, 1, 0, -s, 0, c});
}

Mat3 rotation_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Mat3::from_rows({c, -s, 0, s, c, 0, 0, 0, 1});
}

Mat3 rotation(const Vec3& axis, double a) {
  const Vec3 k = (1.0 / norm(axis)) * axis;
  Mat3 kx = Mat3::from_rows({0, -k[2], k[1], k[2], 0, -k[0], -k[1], k[0], 0});
  return Mat3::identity() + std::sin(a) * kx + (1.0 - std::cos(a)) * (kx * kx);
}

Ten3& Ten3::operator+=(const Ten3& o) {
  for (std::size_t i = 0; i < 27; ++i) e[i] += o.e[i];
  return *this;
}
Ten3& Ten3::operator-=(const Ten3& o) {
  for (std::size_t i = 0; i < 27; ++i) e[i] -= o.e[i];
  return *this;
}
Ten3& Ten3::operator*=(double s) {
  for (auto& x : e) x *= s;
  return *this;
}

Ten3 operator+(Ten3 a, const Ten3& b) { return a += b; }
Ten3 operator-(Ten3 a, const Ten3& b) { return a -= b; }
Ten3 operator*(double s, Ten3 a) { return a *= s; }

double max_abs(const Ten3& t) {
  double r = 0.0;
  for (double x : t.e) r = std::max(r, std::abs(x));
  return r;
}

double max_abs_diff(const Ten3& a, const Ten3& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < 27; ++i) r = std::max(r, std::abs(a.e[i] - b.e[i]));
  return r;
}

bool is_finite(const Ten3& t) {
  return std::all_of(t.e.begin(), t.e.end(), [](double x) { return std::isfinite(x); });
}

Mat3 contract_ten3_vec(const Ten3& b, const Vec3& v) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      r(i, j) = b(i, j, 0) * v[0] + b(i, j, 1) * v[1] + b(i, j, 2) * v[2];
  return r;
}

Kernel kernel_of_flattened(const Ten3& b, double rel_tol, double abs_floor) {
  Eigen::Matrix<double, 9, 3> flat;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) flat(3 * i + j, k) = b(i, j, k);

  Eigen::JacobiSVD<Eigen::Matrix<double, 9, 3>> svd(flat, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const auto& v = svd.matrixV();

  Kernel out;
  for (int k = 0; k < 3; ++k) out.singular_values[static_cast<std::size_t>(k)] = sv(k);

  const double sigma_max = sv(0);
  if (sigma_max == 0.0 || sigma_max <= abs_floor) {
    out.dimension = 3;
    out.basis = {Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)};
    return out;
  }
  const double cut = std::max(rel_tol * sigma_max, abs_floor);
  int rank = 0;
  for (int k = 0; k < 3; ++k)
    if (sv(k) > cut) ++rank;
  out.dimension = 3 - rank;
  for (int k = rank; k < 3; ++k) out.basis.push_back({v(0, k), v(1, k), v(2, k)});
  return out;
}

double max_principal_angle(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("subspaces have different dimensions");
  if (a.empty()) return 0.0;
  // sine of the largest angle = largest singular value of (I - A A^T) B
  Eigen::Matrix3d proj = Eigen::Matrix3d::Identity();
  for (const Vec3& u : a) {
    const Eigen::Vector3d e(u[0], u[1], u[2]);
    proj -= e * e.transpose();
  }
  Eigen::Matrix<double, 3, Eigen::Dynamic> mb(3, static_cast<Eigen::Index>(b.size()));
  for (std::size_t c = 0; c < b.size(); ++c)
    mb.col(static_cast<Eigen::Index>(c)) = Eigen::Vector3d(b[c][0], b[c][1], b[c][2]);
  const Eigen::MatrixXd r = proj * mb;
  const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues()(0);
  return std::asin(std::min(1.0, s));
}

}  // namespace unilab
