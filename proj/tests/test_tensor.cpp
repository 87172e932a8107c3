#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "unilab/errors.hpp"
#include "unilab/tensor.hpp"

using namespace unilab;

TEST_CASE("invert: identity and diagonal") {
  CHECK(invert(Mat3::identity()) == Mat3::identity());
  const Mat3 inv = invert(Mat3::diagonal(2, 4, 5));
  CHECK(max_abs_diff(inv, Mat3::diagonal(0.5, 0.25, 0.2)) < 1e-15);
}

TEST_CASE("invert: random well-conditioned matrices multiply back to I") {
  std::mt19937 rng(11);
  for (int n = 0; n < 200; ++n) {
    const Mat3 m = testing::random_frame_matrix(rng);
    CHECK(max_abs_diff(m * invert(m), Mat3::identity()) < 1e-12);
  }
}

TEST_CASE("invert: singular matrix throws") {
  Mat3 m = Mat3::diagonal(1, 1, 0);
  CHECK_THROWS_AS(invert(m), SingularMatrix);
  m = Mat3::from_rows({1, 2, 3, 2, 4, 6, 0, 1, 1});
  CHECK_THROWS_AS(invert(m), SingularMatrix);
}

TEST_CASE("contract_ten3_vec") {
  std::mt19937 rng(12);
  const Ten3 b = testing::random_ten3(rng);
  CHECK(max_abs(contract_ten3_vec(b, Vec3{})) == 0.0);

  Ten3 single;
  single(0, 0, 2) = 1.0;
  const Mat3 r = contract_ten3_vec(single, {0, 0, 3});
  Mat3 expected;
  expected(0, 0) = 3.0;
  CHECK(r == expected);

  for (int n = 0; n < 50; ++n) {
    const Ten3 t = testing::random_ten3(rng);
    const Vec3 v = testing::random_point(rng);
    const Mat3 got = contract_ten3_vec(t, v);
    Mat3 ref;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) ref(i, j) += t(i, j, k) * v[k];
    CHECK(max_abs_diff(got, ref) < 1e-14);
  }
}

TEST_CASE("kernel_of_flattened: zero tensor") {
  const Kernel k = kernel_of_flattened(Ten3{});
  CHECK(k.dimension == 3);
  REQUIRE(k.basis.size() == 3);
  for (std::size_t a = 0; a < 3; ++a) CHECK(k.basis[a] == Vec3::unit(a));
}

TEST_CASE("kernel_of_flattened: single active slot") {
  Ten3 b;
  b(1, 2, 0) = 0.7;
  const Kernel k = kernel_of_flattened(b);
  CHECK(k.dimension == 2);
  for (const Vec3& v : k.basis) CHECK(std::abs(v[0]) < 1e-14);
  CHECK(testing::oracle_principal_angle({Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()}, k.basis) < 1e-12);
}

TEST_CASE("kernel_of_flattened: rank-one C (x) a against the dense oracle") {
  std::mt19937 rng(13);
  for (int n = 0; n < 100; ++n) {
    const Mat3 c = testing::random_matrix(rng);
    const Vec3 a = testing::random_point(rng);
    Ten3 b;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) b(i, j, k) = c(i, j) * a[k];
    const Kernel k = kernel_of_flattened(b);
    const auto oracle = testing::oracle_kernel(b);
    REQUIRE(k.dimension == 2);
    CHECK(oracle.m == 2);
    for (const Vec3& v : k.basis) CHECK(std::abs(dot(v, a)) < 1e-10 * norm(a));
    CHECK(testing::oracle_principal_angle(oracle.basis, k.basis) < 1e-7);
  }
}

TEST_CASE("kernel_of_flattened: generic tensor has trivial kernel") {
  std::mt19937 rng(14);
  for (int n = 0; n < 50; ++n) {
    const Ten3 b = testing::random_ten3(rng);
    CHECK(kernel_of_flattened(b).dimension == testing::oracle_kernel(b).m);
  }
}

TEST_CASE("kernel_of_flattened: abs_floor zeroes a tiny tensor") {
  Ten3 b;
  b(0, 0, 0) = 1e-14;
  CHECK(kernel_of_flattened(b).dimension == 2);
  CHECK(kernel_of_flattened(b, 1e-8, 1e-12).dimension == 3);
}

TEST_CASE("max_principal_angle") {
  const std::vector<Vec3> xy{Vec3::unit(0), Vec3::unit(1)};
  CHECK(max_principal_angle(xy, xy) < 1e-15);
  const double t = 0.3;
  const std::vector<Vec3> tilted{Vec3::unit(0), Vec3{0, std::cos(t), std::sin(t)}};
  CHECK(std::abs(max_principal_angle(xy, tilted) - t) < 1e-14);
  CHECK_THROWS_AS(max_principal_angle(xy, {Vec3::unit(2)}), std::invalid_argument);
}

TEST_CASE("rotations are orthogonal with unit determinant") {
  std::mt19937 rng(15);
  for (int n = 0; n < 20; ++n) {
    const Vec3 axis = testing::random_point(rng) + Vec3{2, 0, 0};
    const Mat3 r = rotation(axis, testing::uniform(rng, -3, 3));
    CHECK(max_abs_diff(r * transpose(r), Mat3::identity()) < 1e-14);
    CHECK(std::abs(det(r) - 1.0) < 1e-14);
  }
  CHECK(max_abs_diff(rotation({0, 0, 2}, 0.4), rotation_z(0.4)) < 1e-15);
}
