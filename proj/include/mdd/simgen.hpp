#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdd/labels.hpp"
#include "mdd/metric.hpp"

namespace mdd {

// Scenario families of the Monte Carlo study.
//   sim1: independence; columns 1..3 are sphere coordinates, vMF, Gaussian.
//   sim2: dependence through the class, same three columns, R in {2, 5}.
//   sim3: R = 2, varying dimension, `dependent` picks independence/dependence.
//   sim4: R = 2 noisy ellipse landmark shapes, circle vs. correlation `corr`.
enum class Scenario { Sim1, Sim2, Sim3, Sim4 };

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& name);

struct ScenarioSpec {
  Scenario scenario = Scenario::Sim2;
  int column = 3;
  int classes = 2;
  Index n = 60;
  /// Length of the coordinate tuple (column 1), ambient sphere dimension
  /// (column 2) or number of coordinates (column 3).
  int dim = 3;
  int landmarks = 50;
  double corr = 0.0;
  bool dependent = true;
  double kappa = 1.0;
  /// Overrides the R = 2 Gaussian class-mean gap of sim2 (default 0.6).
  std::optional<double> mean_gap;
  /// Disables the t-distributed perturbations (column 1 and sim4).
  bool noise = true;
  std::uint64_t seed = 0;

  /// Throws InvalidSpec when a field is outside the scenario's domain.
  void validate() const;
};

/// How coordinate tuples (1, theta, phi...) are compared.
enum class CoordinateMetric { EuclideanRaw, Geodesic };

/// Default for coordinate tuples wherever no explicit choice is configured.
inline constexpr CoordinateMetric kDefaultCoordinateMetric = CoordinateMetric::EuclideanRaw;

std::string to_string(CoordinateMetric m);
CoordinateMetric parse_coordinate_metric(const std::string& name);

struct Dataset {
  PointSet points;
  /// Raw (1, theta, phi_1, ..., phi_m) tuples for sphere-coordinate data.
  std::optional<PointSet> raw;
  LabelVector labels;
  Metric metric;  // natural metric for `points`
};

/// Unbalanced class proportions p_r = 2[1 + (r-1)/(R-1)] / (3R); R = 1 gives {1}.
std::vector<double> class_proportions(int classes);

/// n iid labels from class_proportions(R). Draws are repeated until every
/// class occurs so the label vector always has R classes.
LabelVector gen_labels(int classes, Index n, std::uint64_t seed);

/// Unit vector with hyperspherical angles: phi_1..phi_m are the polar
/// angles and theta the final azimuth, giving a point on S^{m+1}.
Eigen::VectorXd embed_spherical(double theta, std::span<const double> phis);

Dataset gen_sphere_coords(const ScenarioSpec& spec);
Dataset gen_vmf(const ScenarioSpec& spec);
Dataset gen_gaussian(const ScenarioSpec& spec);
Dataset gen_ellipse_shapes(const ScenarioSpec& spec);

/// Dispatches on scenario and column.
Dataset generate(const ScenarioSpec& spec);

/// Wood's rejection sampler for the von Mises-Fisher distribution with unit
/// mean direction `mean` and concentration kappa >= 0.
template <class Engine>
Eigen::VectorXd sample_vmf(Engine& eng, const Eigen::VectorXd& mean, double kappa);

/// The metric the harness uses for a dataset.
DistanceMatrix dataset_distances(const Dataset& data, CoordinateMetric coordinate_metric, unsigned threads = 1);
Metric dataset_metric(const Dataset& data, CoordinateMetric coordinate_metric);

}  // namespace mdd

#include "mdd/vmf.ipp"
