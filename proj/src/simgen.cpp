#include "mdd/simgen.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include "mdd/random.hpp"

namespace mdd {

namespace {

constexpr double kPi = std::numbers::pi;

// Independent substreams of one scenario seed.
constexpr std::uint64_t kLabelStream = 0;
constexpr std::uint64_t kPointStream = 1;

void invalid(const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); }

// Location parameters of the class-dependent distributions.
constexpr std::array<double, 5> kFiveClassCentres{4.0, 3.0, 1.0, 5.0, 2.0};

bool null_case(const ScenarioSpec& spec) {
  return spec.scenario == Scenario::Sim1 || (spec.scenario == Scenario::Sim3 && !spec.dependent);
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Sim1: return "sim1";
    case Scenario::Sim2: return "sim2";
    case Scenario::Sim3: return "sim3";
    case Scenario::Sim4: return "sim4";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "sim1") return Scenario::Sim1;
  if (name == "sim2") return Scenario::Sim2;
  if (name == "sim3") return Scenario::Sim3;
  if (name == "sim4") return Scenario::Sim4;
  throw Error(ErrorCode::InvalidSpec, "unknown scenario '" + name + "'");
}

std::string to_string(CoordinateMetric m) {
  return m == CoordinateMetric::EuclideanRaw ? "euclidean_raw" : "geodesic";
}

CoordinateMetric parse_coordinate_metric(const std::string& name) {
  if (name == "euclidean_raw" || name == "euclidean") return CoordinateMetric::EuclideanRaw;
  if (name == "geodesic") return CoordinateMetric::Geodesic;
  throw Error(ErrorCode::InvalidSpec, "unknown coordinate metric '" + name + "'");
}

void ScenarioSpec::validate() const {
  if (classes < 1) invalid("classes must be at least 1");
  if (n < 2 * classes) invalid("n = " + std::to_string(n) + " is below 2R = " + std::to_string(2 * classes));
  if (kappa < 0.0 || !std::isfinite(kappa)) invalid("kappa must be finite and nonnegative");
  switch (scenario) {
    case Scenario::Sim1:
      break;
    case Scenario::Sim2:
      if (classes != 2 && classes != 5) invalid("sim2 is defined for R = 2 or R = 5");
      break;
    case Scenario::Sim3:
    case Scenario::Sim4:
      if (classes != 2) invalid(to_string(scenario) + " is defined for R = 2");
      break;
  }
  if (scenario == Scenario::Sim4) {
    if (landmarks < 3) invalid("need at least 3 landmarks");
    if (!(corr >= 0.0 && corr < 1.0)) invalid("corr must lie in [0, 1)");
    return;
  }
  if (column < 1 || column > 3) invalid("column must be 1, 2 or 3");
  if (column == 1 && dim < 3) invalid("coordinate tuples need dim >= 3");
  if (column == 2 && dim < 2) invalid("vMF needs dim >= 2");
  if (column == 3 && dim < 1) invalid("Gaussian needs dim >= 1");
}

std::vector<double> class_proportions(int classes) {
  if (classes < 1) throw Error(ErrorCode::InvalidR, "R must be at least 1");
  if (classes == 1) return {1.0};
  std::vector<double> p(static_cast<std::size_t>(classes));
  const double big_r = classes;
  for (int r = 1; r <= classes; ++r)
    p[static_cast<std::size_t>(r - 1)] = 2.0 * (1.0 + (r - 1) / (big_r - 1.0)) / (3.0 * big_r);
  return p;
}

LabelVector gen_labels(int classes, Index n, std::uint64_t seed) {
  const auto p = class_proportions(classes);
  if (n < classes) throw Error(ErrorCode::InvalidR, "cannot populate " + std::to_string(classes) + " classes with n = " + std::to_string(n));
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t r = 0; r < p.size(); ++r) cdf[r] = (acc += p[r]);
  Philox eng(seed, kLabelStream);
  std::vector<int> codes(static_cast<std::size_t>(n));
  for (;;) {
    std::vector<Index> seen(p.size(), 0);
    for (auto& c : codes) {
      const double u = uniform01(eng);
      std::size_t r = 0;
      while (r + 1 < cdf.size() && u >= cdf[r]) ++r;
      c = static_cast<int>(r);
      ++seen[r];
    }
    if (std::find(seen.begin(), seen.end(), 0) == seen.end()) break;
  }
  return LabelVector(std::move(codes), classes);
}

Eigen::VectorXd embed_spherical(double theta, std::span<const double> phis) {
  const auto m = static_cast<Index>(phis.size());
  Eigen::VectorXd x(m + 2);
  double sin_prod = 1.0;
  for (Index k = 0; k < m; ++k) {
    x(k) = sin_prod * std::cos(phis[static_cast<std::size_t>(k)]);
    sin_prod *= std::sin(phis[static_cast<std::size_t>(k)]);
  }
  x(m) = sin_prod * std::cos(theta);
  x(m + 1) = sin_prod * std::sin(theta);
  return x;
}

Dataset gen_sphere_coords(const ScenarioSpec& spec) {
  spec.validate();
  if (spec.scenario == Scenario::Sim4 || spec.column != 1) invalid("gen_sphere_coords needs a column-1 spec");
  LabelVector y = gen_labels(spec.classes, spec.n, spec.seed);
  Philox eng(spec.seed, kPointStream);
  const int angles = spec.dim - 2;
  const bool independent = null_case(spec);

  Eigen::MatrixXd raw(spec.n, spec.dim);
  Eigen::MatrixXd unit(spec.n, spec.dim);
  std::vector<double> phis(static_cast<std::size_t>(angles));
  for (Index i = 0; i < spec.n; ++i) {
    const int r = y.codes()[static_cast<std::size_t>(i)];
    double lo = -kPi, hi = kPi;
    bool perturbed = false;
    if (!independent) {
      if (spec.scenario == Scenario::Sim3) {
        if (r == 1) lo = -kPi / 5.0, hi = 4.0 * kPi / 5.0, perturbed = true;
      } else if (spec.classes == 2) {
        if (r == 1) lo = kPi / 5.0, hi = 4.0 * kPi / 5.0, perturbed = true;
      } else {
        const double big_r = spec.classes;
        lo = (-1.0 + 2.0 * r / big_r) * kPi;
        hi = (-1.0 + 2.0 * (r + 1) / big_r) * kPi;
        perturbed = true;
      }
    }
    const double theta = uniform_open(eng, -kPi, kPi);
    for (auto& phi : phis) phi = uniform_open(eng, lo, hi);
    if (perturbed && spec.noise) {
      const double eps = student_t(eng, 1);
      for (auto& phi : phis) phi += eps;
    }
    raw(i, 0) = 1.0;
    raw(i, 1) = theta;
    for (int k = 0; k < angles; ++k) raw(i, 2 + k) = phis[static_cast<std::size_t>(k)];
    unit.row(i) = embed_spherical(theta, phis).transpose();
  }
  const std::string what = to_string(spec.scenario) + " sphere coordinates";
  return Dataset{PointSet::sphere(std::move(unit), what + " (embedded)"), PointSet::euclidean(std::move(raw), what),
                 std::move(y), Metric::Geodesic};
}

Dataset gen_vmf(const ScenarioSpec& spec) {
  spec.validate();
  if (spec.scenario == Scenario::Sim4 || spec.column != 2) invalid("gen_vmf needs a column-2 spec");
  LabelVector y = gen_labels(spec.classes, spec.n, spec.seed);
  Philox eng(spec.seed, kPointStream);

  // Scalar location mu_r -> mean direction normalize(cos mu_r, sin mu_r, 0, ...).
  auto direction = [&](double mu) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(spec.dim);
    m(0) = std::cos(mu);
    m(1) = std::sin(mu);
    return m;
  };
  double kappa = spec.kappa;
  std::vector<double> mus(static_cast<std::size_t>(spec.classes), 0.0);
  switch (spec.scenario) {
    case Scenario::Sim1:
      kappa = 0.0;  // mean direction (0,0,0) is not a direction; uniform on the sphere
      break;
    case Scenario::Sim2:
      if (spec.classes == 2) mus = {1.0, 2.0};
      else mus.assign(kFiveClassCentres.begin(), kFiveClassCentres.end());
      break;
    case Scenario::Sim3:
      mus = {0.0, spec.dependent ? 2.0 : 0.0};
      break;
    case Scenario::Sim4:
      break;
  }

  Eigen::MatrixXd rows(spec.n, spec.dim);
  for (Index i = 0; i < spec.n; ++i) {
    const auto r = static_cast<std::size_t>(y.codes()[static_cast<std::size_t>(i)]);
    rows.row(i) = sample_vmf(eng, direction(mus[r]), kappa).transpose();
  }
  return Dataset{PointSet::sphere(std::move(rows), to_string(spec.scenario) + " von Mises-Fisher"), std::nullopt,
                 std::move(y), Metric::Geodesic};
}

Dataset gen_gaussian(const ScenarioSpec& spec) {
  spec.validate();
  if (spec.scenario == Scenario::Sim4 || spec.column != 3) invalid("gen_gaussian needs a column-3 spec");
  LabelVector y = gen_labels(spec.classes, spec.n, spec.seed);
  Philox eng(spec.seed, kPointStream);

  std::vector<double> means(static_cast<std::size_t>(spec.classes), 0.0);
  if (spec.scenario == Scenario::Sim2) {
    if (spec.classes == 2) {
      means = {0.0, spec.mean_gap.value_or(0.6)};
    } else {
      for (std::size_t r = 0; r < 5; ++r) means[r] = kFiveClassCentres[r] / 3.0;
    }
  } else if (spec.scenario == Scenario::Sim3 && spec.dependent) {
    means = {0.0, 0.6};
  }

  Eigen::MatrixXd rows(spec.n, spec.dim);
  for (Index i = 0; i < spec.n; ++i) {
    const double mu = means[static_cast<std::size_t>(y.codes()[static_cast<std::size_t>(i)])];
    for (Index k = 0; k < spec.dim; ++k) rows(i, k) = mu + standard_normal(eng);
  }
  return Dataset{PointSet::euclidean(std::move(rows), to_string(spec.scenario) + " Gaussian"), std::nullopt,
                 std::move(y), Metric::Euclidean};
}

Dataset gen_ellipse_shapes(const ScenarioSpec& spec) {
  spec.validate();
  if (spec.scenario != Scenario::Sim4) invalid("gen_ellipse_shapes needs a sim4 spec");
  LabelVector y = gen_labels(spec.classes, spec.n, spec.seed);
  Philox eng(spec.seed, kPointStream);

  const Index landmarks = spec.landmarks;
  Eigen::MatrixXcd configs(spec.n, landmarks);
  for (Index i = 0; i < spec.n; ++i) {
    // cos(d) is the correlation: class 0 is the circle (corr 0).
    const double corr = y.codes()[static_cast<std::size_t>(i)] == 0 ? 0.0 : spec.corr;
    const double half = std::acos(corr) / 2.0;
    for (Index l = 0; l < landmarks; ++l) {
      const double theta = 2.0 * kPi * (static_cast<double>(l) + 0.5) / static_cast<double>(landmarks);
      double x = std::cos(theta + half);
      double v = std::cos(theta - half);
      if (spec.noise) {
        x += student_t(eng, 2) / 10.0;
        v += student_t(eng, 2) / 10.0;
      }
      configs(i, l) = {x, v};
    }
  }
  return Dataset{PointSet::shape(std::move(configs), "sim4 ellipse landmarks"), std::nullopt, std::move(y),
                 Metric::Shape};
}

Dataset generate(const ScenarioSpec& spec) {
  if (spec.scenario == Scenario::Sim4) return gen_ellipse_shapes(spec);
  switch (spec.column) {
    case 1: return gen_sphere_coords(spec);
    case 2: return gen_vmf(spec);
    case 3: return gen_gaussian(spec);
    default: invalid("column must be 1, 2 or 3");
  }
  return gen_gaussian(spec);
}

Metric dataset_metric(const Dataset& data, CoordinateMetric coordinate_metric) {
  if (data.raw && coordinate_metric == CoordinateMetric::EuclideanRaw) return Metric::Euclidean;
  return data.metric;
}

DistanceMatrix dataset_distances(const Dataset& data, CoordinateMetric coordinate_metric, unsigned threads) {
  if (data.raw && coordinate_metric == CoordinateMetric::EuclideanRaw)
    return euclidean_distances(*data.raw, threads);
  return distances(data.points, data.metric, threads);
}

}  // namespace mdd
