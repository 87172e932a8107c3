#pragma once

// Dense 3-vectors, 3x3 matrices and 3x3x3 tensors used throughout the
// library. Indices are zero based: Mat3(i, j) is row i ("upper"/I slot),
// column j ("lower" J slot or archetype slot); Ten3(i, j, k) is B^I_{JK}.

#include <array>
#include <cstddef>
#include <vector>

namespace unilab {

struct Vec3 {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : c{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  static constexpr Vec3 unit(std::size_t axis) {
    Vec3 v;
    v.c[axis] = 1.0;
    return v;
  }

  Vec3& operator+=(const Vec3& o);
  Vec3& operator-=(const Vec3& o);
  Vec3& operator*=(double s);

  bool operator==(const Vec3&) const = default;
};

Vec3 operator+(Vec3 a, const Vec3& b);
Vec3 operator-(Vec3 a, const Vec3& b);
Vec3 operator-(const Vec3& a);
Vec3 operator*(double s, Vec3 a);
Vec3 operator*(Vec3 a, double s);

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
double max_abs(const Vec3& a);
bool is_finite(const Vec3& a);

struct Mat3 {
  std::array<double, 9> e{};  // row-major

  constexpr Mat3() = default;

  constexpr double& operator()(std::size_t i, std::size_t j) { return e[3 * i + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return e[3 * i + j]; }

  static constexpr Mat3 identity() {
    Mat3 m;
    m.e[0] = m.e[4] = m.e[8] = 1.0;
    return m;
  }
  static constexpr Mat3 diagonal(double a, double b, double c) {
    Mat3 m;
    m.e[0] = a;
    m.e[4] = b;
    m.e[8] = c;
    return m;
  }
  static Mat3 from_rows(const std::array<double, 9>& row_major);

  Mat3& operator+=(const Mat3& o);
  Mat3& operator-=(const Mat3& o);
  Mat3& operator*=(double s);

  bool operator==(const Mat3&) const = default;
};

Mat3 operator+(Mat3 a, const Mat3& b);
Mat3 operator-(Mat3 a, const Mat3& b);
Mat3 operator-(const Mat3& a);
Mat3 operator*(double s, Mat3 a);
Mat3 operator*(Mat3 a, double s);
Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);

Mat3 transpose(const Mat3& m);
double det(const Mat3& m);
double trace(const Mat3& m);
double max_abs(const Mat3& m);
/// Largest entrywise difference |a - b|.
double max_abs_diff(const Mat3& a, const Mat3& b);
bool is_finite(const Mat3& m);

/// Guard used by invert: |det| must exceed 1e-12 * (max |entry|)^3.
double singular_tolerance(const Mat3& m);

/// Inverse by cofactors. Throws SingularMatrix when |det m| <= singular_tolerance(m).
Mat3 invert(const Mat3& m);

/// Rotation about a coordinate axis by `radians` (right-handed).
Mat3 rotation_x(double radians);
Mat3 rotation_y(double radians);
Mat3 rotation_z(double radians);
/// Rotation about an arbitrary (nonzero) axis, Rodrigues formula.
Mat3 rotation(const Vec3& axis, double radians);

struct Ten3 {
  std::array<double, 27> e{};

  constexpr double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return e[9 * i + 3 * j + k];
  }
  constexpr double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return e[9 * i + 3 * j + k];
  }

  Ten3& operator+=(const Ten3& o);
  Ten3& operator-=(const Ten3& o);
  Ten3& operator*=(double s);

  bool operator==(const Ten3&) const = default;
};

Ten3 operator+(Ten3 a, const Ten3& b);
Ten3 operator-(Ten3 a, const Ten3& b);
Ten3 operator*(double s, Ten3 a);

double max_abs(const Ten3& t);
double max_abs_diff(const Ten3& a, const Ten3& b);
bool is_finite(const Ten3& t);

/// (Bv)^I_J = B^I_{JK} v^K.
Mat3 contract_ten3_vec(const Ten3& b, const Vec3& v);

/// Orthonormal basis of {v : B^I_{JK} v^K = 0}, with singular values of the
/// 9x3 flattening M_{(3I+J),K} = B^I_{JK} in descending order.
struct Kernel {
  int dimension = 0;
  std::vector<Vec3> basis;
  std::array<double, 3> singular_values{};

  double sigma_max() const { return singular_values[0]; }
  double sigma_min() const { return singular_values[2]; }
};

/// Kernel of the flattened tensor. A singular value counts as zero when
/// sigma <= rel_tol * sigma_max, or when sigma <= abs_floor. An all-zero
/// tensor (or one whose sigma_max is below abs_floor) has dimension 3.
Kernel kernel_of_flattened(const Ten3& b, double rel_tol = 1e-8, double abs_floor = 0.0);

/// Largest principal angle (radians) between the spans of two orthonormal
/// families of equal size. Throws std::invalid_argument on a size mismatch.
double max_principal_angle(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

}  // namespace unilab
