#include <doctest.h>

#include <numbers>

#include "mdd/metric.hpp"
#include "mdd/random.hpp"
#include "oracles.hpp"

using namespace mdd;
using std::numbers::pi;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

Eigen::MatrixXd random_rows(Philox& eng, Index n, Index p) {
  Eigen::MatrixXd x(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < p; ++k) x(i, k) = standard_normal(eng);
  return x;
}

Eigen::MatrixXd random_unit_rows(Philox& eng, Index n, Index p) {
  Eigen::MatrixXd x = random_rows(eng, n, p);
  x.rowwise().normalize();
  return x;
}

std::vector<std::complex<double>> row_of(const Eigen::MatrixXcd& z, Index i) {
  std::vector<std::complex<double>> out;
  for (Index l = 0; l < z.cols(); ++l) out.push_back(z(i, l));
  return out;
}

}  // namespace

TEST_CASE("distance matrix invariants are enforced") {
  CHECK_NOTHROW(DistanceMatrix(Eigen::MatrixXd{{0, 1}, {1, 0}}));
  CHECK(code_of([] { DistanceMatrix(Eigen::MatrixXd{{0, 1}, {2, 0}}); }) == ErrorCode::AsymmetricMatrix);
  CHECK(code_of([] { DistanceMatrix(Eigen::MatrixXd{{0, -1}, {-1, 0}}); }) == ErrorCode::NegativeDistance);
  CHECK(code_of([] { DistanceMatrix(Eigen::MatrixXd{{0.5, 1}, {1, 0}}); }) == ErrorCode::NonzeroDiagonal);
  CHECK(code_of([] { DistanceMatrix(Eigen::MatrixXd{{0, NAN}, {NAN, 0}}); }) == ErrorCode::NonFiniteEntry);
  CHECK(code_of([] { DistanceMatrix(Eigen::MatrixXd(2, 3)); }) == ErrorCode::SizeMismatch);
}

TEST_CASE("load_precomputed tolerances") {
  const DistanceMatrix ok = DistanceMatrix::load_precomputed(Eigen::MatrixXd{{0, 1}, {1, 0}});
  CHECK(ok(0, 1) == 1.0);
  const DistanceMatrix averaged = DistanceMatrix::load_precomputed(Eigen::MatrixXd{{0, 1}, {1 + 4e-10, 0}});
  CHECK(averaged(0, 1) == averaged(1, 0));
  CHECK(averaged(0, 1) == doctest::Approx(1 + 2e-10).epsilon(1e-15));
  const DistanceMatrix zeroed = DistanceMatrix::load_precomputed(Eigen::MatrixXd{{1e-13, 1}, {1, 0}});
  CHECK(zeroed(0, 0) == 0.0);
  CHECK(code_of([] { DistanceMatrix::load_precomputed(Eigen::MatrixXd{{0, 1}, {2, 0}}); }) ==
        ErrorCode::AsymmetricMatrix);
  CHECK(code_of([] { DistanceMatrix::load_precomputed(Eigen::MatrixXd{{0, -1}, {-1, 0}}); }) ==
        ErrorCode::NegativeDistance);
  CHECK(code_of([] { DistanceMatrix::load_precomputed(Eigen::MatrixXd{{1e-9, 1}, {1, 0}}); }) ==
        ErrorCode::NonzeroDiagonal);
  CHECK(code_of([] { DistanceMatrix::load_precomputed(Eigen::MatrixXd{{0, INFINITY}, {INFINITY, 0}}); }) ==
        ErrorCode::NonFiniteEntry);
}

TEST_CASE("point set construction") {
  CHECK(code_of([] { PointSet::euclidean(Eigen::MatrixXd::Zero(1, 2)); }) == ErrorCode::TooFewSamples);
  CHECK(code_of([] { PointSet::sphere(Eigen::MatrixXd{{1, 0}, {0, 1.01}}); }) == ErrorCode::NotUnitNorm);
  CHECK(code_of([] { PointSet::shape(Eigen::MatrixXcd::Ones(2, 2)); }) == ErrorCode::DegenerateShape);
  CHECK(code_of([] { PointSet::shape(Eigen::MatrixXcd::Ones(2, 4)); }) == ErrorCode::DegenerateShape);
  CHECK(code_of([] { euclidean_distances(PointSet::euclidean(Eigen::MatrixXd{{0, NAN}, {1, 1}})); }) ==
        ErrorCode::NonFinitePoint);
  const PointSet s = PointSet::sphere(Eigen::MatrixXd{{1 + 1e-8, 0}, {0, 1}}, "unit rows");
  CHECK(s.coordinates().row(0).norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.descriptor() == "unit rows");
  CHECK(PointSet::precomputed(5).size() == 5);
  CHECK(code_of([] { distances(PointSet::euclidean(Eigen::MatrixXd::Zero(3, 2)), Metric::Shape); }) ==
        ErrorCode::InvalidSpec);
}

TEST_CASE("euclidean distances") {
  CHECK(euclidean_distances(PointSet::euclidean(Eigen::MatrixXd{{0}, {3}}))(0, 1) == 3.0);
  CHECK(euclidean_distances(PointSet::euclidean(Eigen::MatrixXd{{0, 0}, {3, 4}}))(0, 1) == 5.0);

  Philox eng(1);
  const Eigen::MatrixXd x = random_rows(eng, 10, 3);
  const DistanceMatrix d = euclidean_distances(PointSet::euclidean(x), 3);
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 10; ++j) {
      double s = 0;
      for (Index k = 0; k < 3; ++k) s += (x(i, k) - x(j, k)) * (x(i, k) - x(j, k));
      CHECK(d(i, j) == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
    }

  SUBCASE("translation and rotation invariance") {
    const Eigen::Matrix3d q = Eigen::Quaterniond(0.3, -0.5, 0.7, 0.2).normalized().toRotationMatrix();
    Eigen::MatrixXd moved = x * q.transpose();
    moved.rowwise() += Eigen::RowVector3d(4, -2, 9);
    const DistanceMatrix d2 = euclidean_distances(PointSet::euclidean(moved));
    CHECK((d.matrix() - d2.matrix()).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("sphere distances") {
  const DistanceMatrix d =
      sphere_distances(PointSet::sphere(Eigen::MatrixXd{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {1, 0, 0}}));
  CHECK(d(0, 3) == 0.0);
  CHECK(d(0, 1) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(d(0, 2) == doctest::Approx(pi / 2).epsilon(1e-15));

  Philox eng(2);
  const Eigen::MatrixXd x = random_unit_rows(eng, 30, 4);
  const DistanceMatrix g = sphere_distances(PointSet::sphere(x));
  CHECK(g.matrix().minCoeff() >= 0.0);
  CHECK(g.matrix().maxCoeff() <= pi);
  for (Index i = 0; i < 30; ++i)
    for (Index j = 0; j < 30; ++j)
      CHECK(g(i, j) == doctest::Approx(std::acos(std::clamp(x.row(i).dot(x.row(j)), -1.0, 1.0))).epsilon(1e-7));
}

TEST_CASE("triangle inequality on random triples") {
  Philox eng(9);
  const DistanceMatrix e = euclidean_distances(PointSet::euclidean(random_rows(eng, 25, 3)));
  const DistanceMatrix g = sphere_distances(PointSet::sphere(random_unit_rows(eng, 25, 3)));
  for (int t = 0; t < 2000; ++t) {
    const auto i = static_cast<Index>(uniform_index(eng, 25));
    const auto j = static_cast<Index>(uniform_index(eng, 25));
    const auto k = static_cast<Index>(uniform_index(eng, 25));
    CHECK(e(i, k) <= e(i, j) + e(j, k) + 1e-9);
    CHECK(g(i, k) <= g(i, j) + g(j, k) + 1e-9);
  }
}

TEST_CASE("shape distances") {
  using C = std::complex<double>;
  Eigen::MatrixXcd tri(4, 3);
  const C a(0, 0), b(1, 0.2), c(0.3, 1.1);
  const C rot = std::polar(5.0, 37.0 * pi / 180.0);
  tri.row(0) << a, b, c;
  tri.row(1) << a, b, c;
  tri.row(2) << rot * a + C(3, -1), rot * b + C(3, -1), rot * c + C(3, -1);
  tri.row(3) << C(0, 0), C(1, 0), C(2, 0);
  const DistanceMatrix d = shape_distances(PointSet::shape(tri));
  CHECK(d(0, 1) == 0.0);
  CHECK(d(0, 2) <= 1e-10);

  Eigen::MatrixXcd eq(2, 3);
  eq.row(0) << C(0, 0), C(1, 0), C(0.5, std::sqrt(3.0) / 2);
  eq.row(1) << C(0, 0), C(1, 0), C(2, 0);
  const DistanceMatrix de = shape_distances(PointSet::shape(eq));
  CHECK(std::abs(de(0, 1) - oracle::procrustes_shape_distance(row_of(eq, 0), row_of(eq, 1))) <= 1e-8);

  SUBCASE("random configurations against the rotation-search oracle") {
    Philox eng(4);
    Eigen::MatrixXcd z(6, 7);
    for (Index i = 0; i < 6; ++i)
      for (Index l = 0; l < 7; ++l) z(i, l) = C(standard_normal(eng), standard_normal(eng));
    const DistanceMatrix ds = shape_distances(PointSet::shape(z));
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 6; ++j) {
        CHECK(ds(i, j) >= 0.0);
        CHECK(ds(i, j) <= pi / 2);
        CHECK(std::abs(ds(i, j) - oracle::procrustes_shape_distance(row_of(z, i), row_of(z, j))) <= 1e-8);
      }

    // Independent similarity transform of every configuration.
    Eigen::MatrixXcd moved = z;
    for (Index i = 0; i < 6; ++i) {
      const C s = std::polar(0.5 + i, 0.9 * i - 2.0);
      for (Index l = 0; l < 7; ++l) moved(i, l) = s * z(i, l) + C(i, -3.0 * i);
    }
    const DistanceMatrix dm = shape_distances(PointSet::shape(moved));
    CHECK((ds.matrix() - dm.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("metric names") {
  CHECK(parse_metric("euclidean") == Metric::Euclidean);
  CHECK(parse_metric("geodesic") == Metric::Geodesic);
  CHECK(parse_metric("sphere") == Metric::Geodesic);
  CHECK(parse_metric("shape") == Metric::Shape);
  CHECK(to_string(Metric::Shape) == "shape");
  CHECK_THROWS_AS(parse_metric("manhattan"), Error);
}

TEST_CASE("templated pairwise kernels accept float expressions") {
  Eigen::MatrixXf x(3, 2);
  x << 0, 0, 3, 4, 6, 8;
  const Eigen::MatrixXf d = pairwise_euclidean(x * 2.0f);
  CHECK(d(0, 1) == doctest::Approx(10.0f));
  CHECK(d(0, 2) == doctest::Approx(20.0f));
}
