#pragma once

// Random generators and independent oracles shared by the test binaries.
// Oracles deliberately avoid the library's own code paths: derivatives by
// finite differences of P(X), inverses and spectra through Eigen.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "unilab/field.hpp"
#include "unilab/tensor.hpp"

namespace testing {

using unilab::FrameField;
using unilab::Mat3;
using unilab::Ten3;
using unilab::Vec3;

inline double uniform(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec3 random_point(std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

inline Mat3 random_matrix(std::mt19937& rng, double scale = 1.0) {
  Mat3 m;
  for (double& v : m.e) v = uniform(rng, -scale, scale);
  return m;
}

/// I + small perturbation: well conditioned, positive determinant.
inline Mat3 random_frame_matrix(std::mt19937& rng, double spread = 0.3) {
  return Mat3::identity() + random_matrix(rng, spread);
}

inline Ten3 random_ten3(std::mt19937& rng) {
  Ten3 t;
  for (double& v : t.e) v = uniform(rng, -1.0, 1.0);
  return t;
}

inline std::string coef(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "(%.6f)", v);
  return buf;
}

/// Nine entry strings of a strictly diagonally dominant frame on [-1, 1]^3.
inline std::array<std::string, 9> random_frame_strings(std::mt19937& rng) {
  std::uniform_int_distribution<int> axis(1, 3);
  auto x = [&] { return "x" + std::to_string(axis(rng)); };
  std::array<std::string, 9> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::string e = coef(uniform(rng, -0.15, 0.15)) + "*sin(" + coef(uniform(rng, -1.5, 1.5)) + "*x1 + " +
                      coef(uniform(rng, -1.5, 1.5)) + "*x2 + " + coef(uniform(rng, -1.5, 1.5)) + "*x3 + " +
                      coef(uniform(rng, -1.0, 1.0)) + ")";
      e += " + " + coef(uniform(rng, -0.08, 0.08)) + "*" + x() + "*" + x();
      e += " + " + coef(uniform(rng, -0.05, 0.05)) + "*exp(" + coef(uniform(rng, -0.5, 0.5)) + "*" + x() + ")";
      if (i == j) e = "2 + " + e;
      out[static_cast<std::size_t>(3 * i + j)] = e;
    }
  return out;
}

inline FrameField random_frame(std::mt19937& rng) { return FrameField::analytic(random_frame_strings(rng)); }

inline Eigen::Matrix3d to_eigen(const Mat3& m) {
  Eigen::Matrix3d out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return out;
}

/// dP/dX^K by a fourth-order central stencil on P.value().
inline std::array<Eigen::Matrix3d, 3> fd_frame_derivative(const FrameField& f, const Vec3& x, double h = 1e-3) {
  std::array<Eigen::Matrix3d, 3> d;
  for (std::size_t k = 0; k < 3; ++k) {
    auto at = [&](double s) {
      Vec3 y = x;
      y[k] += s * h;
      return to_eigen(f.value(y));
    };
    d[k] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
  }
  return d;
}

/// Gamma^I_{JK} = -P^I_{a,K} (P^{-1})^a_J from finite differences.
inline Ten3 fd_connection(const FrameField& f, const Vec3& x, double h = 1e-3) {
  const auto d = fd_frame_derivative(f, x, h);
  const Eigen::Matrix3d inv = to_eigen(f.value(x)).inverse();
  Ten3 g;
  for (std::size_t k = 0; k < 3; ++k) {
    const Eigen::Matrix3d m = -d[k] * inv;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) g(i, j, k) = m(static_cast<int>(i), static_cast<int>(j));
  }
  return g;
}

/// Null space of the 9x3 flattening from the symmetric 12x12 matrix
/// [[0, M], [M^T, 0]], whose eigenvalues are +-sigma_i plus six zeros. This
/// keeps the singular values accurate to round-off without an SVD routine.
struct OracleKernel {
  int m = 0;
  std::vector<Eigen::Vector3d> basis;
  std::array<double, 3> sigma{};  // descending
};

inline OracleKernel oracle_kernel(const Ten3& b, double rel_tol = 1e-8) {
  Eigen::Matrix<double, 12, 12> aug = Eigen::Matrix<double, 12, 12>::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const double v = b(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k));
        aug(3 * i + j, 9 + k) = v;
        aug(9 + k, 3 * i + j) = v;
      }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 12, 12>> es(aug);
  OracleKernel out;
  for (int r = 0; r < 3; ++r) out.sigma[static_cast<std::size_t>(r)] = std::max(0.0, es.eigenvalues()(11 - r));
  const double smax = out.sigma[0];
  // Row space from the +sigma eigenvectors that count as nonzero.
  Eigen::Matrix3d proj = Eigen::Matrix3d::Identity();
  for (int r = 0; r < 3; ++r) {
    if (smax <= 0.0 || out.sigma[static_cast<std::size_t>(r)] <= rel_tol * smax) {
      ++out.m;
      continue;
    }
    const Eigen::Vector3d v = es.eigenvectors().col(11 - r).tail<3>().normalized();
    proj -= v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> pe(proj);
  for (int k = 3 - out.m; k < 3; ++k) out.basis.push_back(pe.eigenvectors().col(k));
  return out;
}

/// Largest principal angle from the spectral norm of the difference of the
/// two orthogonal projectors (equal dimensions).
inline double oracle_principal_angle(const std::vector<Eigen::Vector3d>& a, const std::vector<Vec3>& b) {
  Eigen::Matrix3d pa = Eigen::Matrix3d::Zero(), pb = Eigen::Matrix3d::Zero();
  for (const auto& v : a) pa += v * v.transpose();
  for (const auto& v : b) {
    const Eigen::Vector3d e(v[0], v[1], v[2]);
    pb += e * e.transpose();
  }
  const Eigen::Matrix3d d = pa - pb;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(d);
  const double s = es.eigenvalues().cwiseAbs().maxCoeff();
  return std::asin(std::min(1.0, s));
}

inline double max_abs_diff(const Ten3& a, const Ten3& b) { return unilab::max_abs_diff(a, b); }

}  // namespace testing
