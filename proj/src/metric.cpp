#include "mdd/metric.hpp"

#include <complex>
#include <numbers>
#include <string>

namespace mdd {

namespace {

std::string at(Index i, Index j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

void require_min_size(Index n) {
  if (n < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 observations, got " + std::to_string(n));
}

}  // namespace

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd d) : d_(std::move(d)) {
  if (d_.rows() != d_.cols())
    throw Error(ErrorCode::SizeMismatch, "distance matrix is " + std::to_string(d_.rows()) + "x" +
                                             std::to_string(d_.cols()));
  const Index n = d_.rows();
  for (Index i = 0; i < n; ++i) {
    if (d_(i, i) != 0.0) throw Error(ErrorCode::NonzeroDiagonal, "entry " + at(i, i));
    for (Index j = 0; j < n; ++j) {
      const double v = d_(i, j);
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteEntry, "entry " + at(i, j));
      if (v < 0.0) throw Error(ErrorCode::NegativeDistance, "entry " + at(i, j));
      if (v != d_(j, i)) throw Error(ErrorCode::AsymmetricMatrix, "entries " + at(i, j) + " and " + at(j, i));
    }
  }
}

DistanceMatrix DistanceMatrix::load_precomputed(Eigen::MatrixXd d) {
  if (d.rows() != d.cols())
    throw Error(ErrorCode::SizeMismatch, "distance matrix is " + std::to_string(d.rows()) + "x" +
                                             std::to_string(d.cols()));
  const Index n = d.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!std::isfinite(d(i, j))) throw Error(ErrorCode::NonFiniteEntry, "entry " + at(i, j));
  for (Index i = 0; i < n; ++i) {
    if (std::abs(d(i, i)) > 1e-12) throw Error(ErrorCode::NonzeroDiagonal, "entry " + at(i, i));
    d(i, i) = 0.0;
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (d(i, j) < 0.0) throw Error(ErrorCode::NegativeDistance, "entry " + at(i, j));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(d(i, j) - d(j, i)) > 1e-9)
        throw Error(ErrorCode::AsymmetricMatrix, "entries " + at(i, j) + " and " + at(j, i));
      if (d(i, j) != d(j, i)) d(i, j) = d(j, i) = 0.5 * (d(i, j) + d(j, i));
    }
  }
  return DistanceMatrix(std::move(d));
}

PointSet PointSet::euclidean(Eigen::MatrixXd rows, std::string descriptor) {
  require_min_size(rows.rows());
  if (!rows.allFinite()) throw Error(ErrorCode::NonFinitePoint, "point coordinates contain NaN or Inf");
  PointSet p(Representation::Euclidean, rows.rows(), std::move(descriptor));
  p.coords_ = std::move(rows);
  return p;
}

PointSet PointSet::sphere(Eigen::MatrixXd rows, std::string descriptor) {
  require_min_size(rows.rows());
  if (!rows.allFinite()) throw Error(ErrorCode::NonFinitePoint, "point coordinates contain NaN or Inf");
  for (Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (std::abs(norm - 1.0) > 1e-6)
      throw Error(ErrorCode::NotUnitNorm, "row " + std::to_string(i) + " has norm " + std::to_string(norm));
    rows.row(i) /= norm;
  }
  PointSet p(Representation::Sphere, rows.rows(), std::move(descriptor));
  p.coords_ = std::move(rows);
  return p;
}

PointSet PointSet::shape(Eigen::MatrixXcd configurations, std::string descriptor) {
  require_min_size(configurations.rows());
  if (configurations.cols() < 3)
    throw Error(ErrorCode::DegenerateShape, "need at least 3 landmarks, got " + std::to_string(configurations.cols()));
  if (!configurations.allFinite()) throw Error(ErrorCode::NonFinitePoint, "landmarks contain NaN or Inf");
  preshapes(configurations);  // rejects degenerate configurations
  PointSet p(Representation::Shape, configurations.rows(), std::move(descriptor));
  p.shapes_ = std::move(configurations);
  return p;
}

PointSet PointSet::precomputed(Index n, std::string descriptor) {
  require_min_size(n);
  return PointSet(Representation::Precomputed, n, std::move(descriptor));
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Euclidean: return "euclidean";
    case Metric::Geodesic: return "geodesic";
    case Metric::Shape: return "shape";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "geodesic" || name == "sphere") return Metric::Geodesic;
  if (name == "shape") return Metric::Shape;
  throw Error(ErrorCode::InvalidSpec, "unknown metric '" + std::string(name) + "'");
}

Eigen::MatrixXcd preshapes(const Eigen::MatrixXcd& configurations) {
  Eigen::MatrixXcd z = configurations.colwise() - configurations.rowwise().mean();
  for (Index i = 0; i < z.rows(); ++i) {
    const double norm = z.row(i).norm();
    if (!(norm >= 1e-12))
      throw Error(ErrorCode::DegenerateShape, "configuration " + std::to_string(i) + " collapses to a point");
    z.row(i) /= norm;
  }
  return z;
}

double riemannian_shape_distance(const Eigen::Ref<const Eigen::VectorXcd>& z1,
                                 const Eigen::Ref<const Eigen::VectorXcd>& z2) {
  // Rotate z2 onto z1 first, then use the half-angle form of the chord.
  const std::complex<double> inner = z1.dot(z2);
  const double magnitude = std::abs(inner);
  if (magnitude == 0.0) return std::numbers::pi / 2;
  const std::complex<double> align = std::conj(inner) / magnitude;
  return 2.0 * std::atan2((z1 - align * z2).norm(), (z1 + align * z2).norm());
}

DistanceMatrix euclidean_distances(const PointSet& points, unsigned threads) {
  if (points.representation() != Representation::Euclidean && points.representation() != Representation::Sphere)
    throw Error(ErrorCode::InvalidSpec, "euclidean metric needs coordinate rows");
  return DistanceMatrix(pairwise_euclidean(points.coordinates(), threads));
}

DistanceMatrix sphere_distances(const PointSet& points, unsigned threads) {
  if (points.representation() != Representation::Sphere && points.representation() != Representation::Euclidean)
    throw Error(ErrorCode::InvalidSpec, "geodesic metric needs coordinate rows on the unit sphere");
  return DistanceMatrix(pairwise_geodesic(points.coordinates(), threads));
}

DistanceMatrix shape_distances(const PointSet& points, unsigned threads) {
  if (points.representation() != Representation::Shape)
    throw Error(ErrorCode::InvalidSpec, "shape metric needs landmark configurations");
  // Transposed so each pre-shape is a contiguous column.
  const Eigen::MatrixXcd z = preshapes(points.configurations()).transpose();
  const Index n = z.cols();
  Eigen::MatrixXd d(n, n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t ii) {
    const auto i = static_cast<Index>(ii);
    d(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) d(i, j) = riemannian_shape_distance(z.col(i), z.col(j));
  });
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) d(i, j) = d(j, i);
  return DistanceMatrix(std::move(d));
}

DistanceMatrix distances(const PointSet& points, Metric metric, unsigned threads) {
  switch (metric) {
    case Metric::Euclidean: return euclidean_distances(points, threads);
    case Metric::Geodesic: return sphere_distances(points, threads);
    case Metric::Shape: return shape_distances(points, threads);
  }
  throw Error(ErrorCode::InvalidSpec, "unknown metric");
}

}  // namespace mdd
