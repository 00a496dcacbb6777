#include <catch2/catch_amalgamated.hpp>

#include "bhc/matrix.hpp"
#include "oracles.hpp"

using bhc::Matrix;
using Catch::Approx;

TEST_CASE("frobenius inner product") {
  SECTION("identity with itself gives the trace") {
    Matrix eye(2, 2, {1, 0, 0, 1});
    CHECK(bhc::frobenius_inner(eye, eye) == 2.0);
  }
  SECTION("zero matrix annihilates") {
    Matrix x(2, 3, {1, -2, 3, 4, -5, 6});
    Matrix z(2, 3);
    CHECK(bhc::frobenius_inner(x, z) == 0.0);
  }
  SECTION("elementwise multiply-sum") {
    Matrix x(2, 2, {1, 2, 3, 4});
    Matrix y(2, 2, {5, 6, 7, 8});
    CHECK(bhc::frobenius_inner(x, y) == 70.0);  // 5 + 12 + 21 + 32
  }
  SECTION("shape mismatch throws") {
    Matrix x(2, 2), y(2, 3);
    CHECK_THROWS_AS(bhc::frobenius_inner(x, y), bhc::DimensionError);
  }
  SECTION("norm is the square root of the self inner product") {
    oracle::Gen gen(11);
    const Matrix x = gen.matrix(3, 4);
    CHECK(bhc::frobenius_norm(x) ==
          Approx(std::sqrt(bhc::frobenius_inner(x, x))).epsilon(1e-14));
  }
  SECTION("symmetric and bilinear on random triples") {
    oracle::Gen gen(7);
    for (int t = 0; t < 50; ++t) {
      const Matrix x = gen.matrix(3, 2);
      const Matrix y = gen.matrix(3, 2);
      const Matrix z = gen.matrix(3, 2);
      const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2);
      CHECK(bhc::frobenius_inner(x, y) == Approx(bhc::frobenius_inner(y, x)).margin(1e-12));
      CHECK(bhc::frobenius_inner(a * x + b * y, z) ==
            Approx(a * bhc::frobenius_inner(x, z) + b * bhc::frobenius_inner(y, z))
                .margin(1e-10));
    }
  }
}

TEST_CASE("unit ball projection") {
  SECTION("origin stays put") {
    const std::vector<double> v{0.0, 0.0};
    CHECK(bhc::project_ball(v) == std::vector<double>{0.0, 0.0});
  }
  SECTION("interior point unchanged") {
    const std::vector<double> v{0.3, -0.4};
    CHECK(bhc::project_ball(v) == v);
  }
  SECTION("exterior point scaled to the sphere") {
    const std::vector<double> v{3.0, 4.0};
    const auto p = bhc::project_ball(v);
    CHECK(p[0] == Approx(0.6).margin(1e-15));
    CHECK(p[1] == Approx(0.8).margin(1e-15));
  }
  SECTION("boundary point returned bitwise unchanged") {
    const std::vector<double> v{1.0, 0.0};
    CHECK(bhc::project_ball(v) == v);
  }
  SECTION("projection norm never exceeds 1") {
    oracle::Gen gen(13);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> v(3);
      for (double& x : v) x = gen.uniform(-10, 10);
      CHECK(bhc::norm(bhc::project_ball(v)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("distance to the unit ball") {
  SECTION("inside the ball") { CHECK(bhc::dist_ball(std::vector<double>{0.5, 0.0}) == 0.0); }
  SECTION("outside the ball") { CHECK(bhc::dist_ball(std::vector<double>{3.0, 4.0}) == 4.0); }
  SECTION("agrees with the projection residual") {
    oracle::Gen gen(17);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> v(4);
      for (double& x : v) x = gen.uniform(-5, 5);
      const auto p = bhc::project_ball(v);
      std::vector<double> diff(4);
      for (int j = 0; j < 4; ++j) diff[j] = v[j] - p[j];
      CHECK(bhc::dist_ball(v) == Approx(bhc::norm(diff)).margin(1e-12));
    }
  }
}

TEST_CASE("matrix container basics") {
  CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), bhc::DimensionError);
  Matrix x(2, 2, {1, 2, 3, 4});
  CHECK(x.all_finite());
  x(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(x.all_finite());
}
