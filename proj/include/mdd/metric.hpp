#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "mdd/error.hpp"
#include "mdd/parallel.hpp"

namespace mdd {

using Index = Eigen::Index;

/// Symmetric, zero-diagonal, finite, nonnegative n x n matrix. Every
/// constructor path validates these invariants.
class DistanceMatrix {
 public:
  /// Strict construction: entries must already satisfy the invariants exactly.
  explicit DistanceMatrix(Eigen::MatrixXd d);

  /// Tolerant construction for user-supplied matrices. Asymmetry up to 1e-9
  /// is averaged away and diagonal entries up to 1e-12 are zeroed.
  static DistanceMatrix load_precomputed(Eigen::MatrixXd d);

  Index size() const { return d_.rows(); }
  double operator()(Index i, Index j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const { return d_; }

 private:
  Eigen::MatrixXd d_;
};

enum class Representation { Euclidean, Sphere, Shape, Precomputed };

/// The sample X_1..X_n in one of the supported representations.
class PointSet {
 public:
  static PointSet euclidean(Eigen::MatrixXd rows, std::string descriptor = {});
  /// Rows must have norm 1 within 1e-6; they are renormalized on the way in.
  static PointSet sphere(Eigen::MatrixXd rows, std::string descriptor = {});
  /// n x L matrix of planar landmarks encoded as x + iy.
  static PointSet shape(Eigen::MatrixXcd configurations, std::string descriptor = {});
  static PointSet precomputed(Index n, std::string descriptor = {});

  Representation representation() const { return rep_; }
  Index size() const { return n_; }
  const std::string& descriptor() const { return descriptor_; }
  const Eigen::MatrixXd& coordinates() const { return coords_; }
  const Eigen::MatrixXcd& configurations() const { return shapes_; }

 private:
  PointSet(Representation rep, Index n, std::string descriptor)
      : rep_(rep), n_(n), descriptor_(std::move(descriptor)) {}

  Representation rep_;
  Index n_;
  std::string descriptor_;
  Eigen::MatrixXd coords_;
  Eigen::MatrixXcd shapes_;
};

enum class Metric { Euclidean, Geodesic, Shape };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

/// Pairwise L2 distances between rows, each pair computed once.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pairwise_euclidean(
    const Eigen::MatrixBase<Derived>& rows, unsigned threads = 1) {
  using Scalar = typename Derived::Scalar;
  const Index n = rows.rows();
  if (!rows.allFinite()) throw Error(ErrorCode::NonFinitePoint, "point coordinates contain NaN or Inf");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d(n, n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t ii) {
    const auto i = static_cast<Index>(ii);
    d(i, i) = Scalar(0);
    for (Index j = i + 1; j < n; ++j) d(i, j) = (rows.row(i) - rows.row(j)).norm();
  });
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) d(i, j) = d(j, i);
  return d;
}

/// Great-circle distances arccos(<x_i, x_j>) between unit rows. Rows are
/// renormalized; a norm off by more than 1e-6 is rejected. Evaluated as
/// 2 atan2(|x - y|, |x + y|), which equals the arccos form but stays exact
/// for identical and antipodal pairs.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pairwise_geodesic(
    const Eigen::MatrixBase<Derived>& rows, unsigned threads = 1) {
  using Scalar = typename Derived::Scalar;
  const Index n = rows.rows();
  if (!rows.allFinite()) throw Error(ErrorCode::NonFinitePoint, "point coordinates contain NaN or Inf");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> unit = rows;
  for (Index i = 0; i < n; ++i) {
    const Scalar norm = unit.row(i).norm();
    if (std::abs(norm - Scalar(1)) > Scalar(1e-6))
      throw Error(ErrorCode::NotUnitNorm, "row " + std::to_string(i) + " has norm " + std::to_string(double(norm)));
    unit.row(i) /= norm;
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d(n, n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t ii) {
    const auto i = static_cast<Index>(ii);
    d(i, i) = Scalar(0);
    for (Index j = i + 1; j < n; ++j)
      d(i, j) = Scalar(2) * std::atan2((unit.row(i) - unit.row(j)).norm(), (unit.row(i) + unit.row(j)).norm());
  });
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) d(i, j) = d(j, i);
  return d;
}

/// Centers each planar configuration (row of complex landmarks) and scales
/// it to unit norm: the pre-shape.
Eigen::MatrixXcd preshapes(const Eigen::MatrixXcd& configurations);

/// Riemannian distance arccos|<z_1, z_2>| between two pre-shapes, in [0, pi/2].
double riemannian_shape_distance(const Eigen::Ref<const Eigen::VectorXcd>& z1,
                                 const Eigen::Ref<const Eigen::VectorXcd>& z2);

DistanceMatrix euclidean_distances(const PointSet& points, unsigned threads = 1);
DistanceMatrix sphere_distances(const PointSet& points, unsigned threads = 1);
DistanceMatrix shape_distances(const PointSet& points, unsigned threads = 1);

/// Dispatches on the metric; throws InvalidSpec when the representation
/// does not support it.
DistanceMatrix distances(const PointSet& points, Metric metric, unsigned threads = 1);

}  // namespace mdd
