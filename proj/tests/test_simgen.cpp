#include <doctest.h>

#include <algorithm>
#include <boost/rational.hpp>
#include <numbers>

#include "mdd/simgen.hpp"

using namespace mdd;
using std::numbers::pi;

namespace {

// Kolmogorov-Smirnov distance of a sample against U(lo, hi).
double ks_uniform(std::vector<double> x, double lo, double hi) {
  std::sort(x.begin(), x.end());
  double worst = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = (x[i] - lo) / (hi - lo);
    worst = std::max({worst, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return worst;
}

ScenarioSpec spec_for(Scenario s, int column, int classes, Index n) {
  ScenarioSpec spec;
  spec.scenario = s;
  spec.column = column;
  spec.classes = classes;
  spec.n = n;
  spec.seed = 123;
  return spec;
}

}  // namespace

TEST_CASE("class proportions") {
  const auto p2 = class_proportions(2);
  CHECK(p2[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(p2[1] == doctest::Approx(2.0 / 3).epsilon(1e-15));

  using Q = boost::rational<long>;
  Q total = 0;
  const auto p5 = class_proportions(5);
  for (long r = 1; r <= 5; ++r) {
    const Q exact = Q(2) * (Q(1) + Q(r - 1, 4)) / Q(15);
    total += exact;
    CHECK(p5[static_cast<std::size_t>(r - 1)] == doctest::Approx(boost::rational_cast<double>(exact)).epsilon(1e-15));
  }
  CHECK(total == Q(1));
  CHECK_THROWS_AS(class_proportions(0), Error);
}

TEST_CASE("label frequencies") {
  const Index n = 100000;
  const LabelVector y = gen_labels(5, n, 7);
  const auto p = class_proportions(5);
  for (int r = 0; r < 5; ++r) {
    const double pr = p[static_cast<std::size_t>(r)];
    CHECK(std::abs(y.proportion(r) - pr) <= 3 * std::sqrt(pr * (1 - pr) / n));
  }
  CHECK(gen_labels(2, 4, 1).classes() == 2);
  CHECK_THROWS_AS(gen_labels(3, 2, 1), Error);
  const LabelVector again = gen_labels(5, n, 7);
  CHECK(std::equal(y.codes().begin(), y.codes().end(), again.codes().begin()));
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(generate(spec_for(Scenario::Sim2, 3, 3, 60)), Error);
  CHECK_THROWS_AS(generate(spec_for(Scenario::Sim3, 3, 5, 60)), Error);
  CHECK_THROWS_AS(generate(spec_for(Scenario::Sim1, 3, 5, 9)), Error);
  CHECK_THROWS_AS(generate(spec_for(Scenario::Sim1, 4, 2, 20)), Error);
  ScenarioSpec shape = spec_for(Scenario::Sim4, 0, 2, 20);
  shape.corr = 1.0;
  CHECK_THROWS_AS(generate(shape), Error);
  shape.corr = 0.1;
  shape.landmarks = 2;
  CHECK_THROWS_AS(generate(shape), Error);
  ScenarioSpec tuples = spec_for(Scenario::Sim1, 1, 2, 20);
  tuples.dim = 2;
  CHECK_THROWS_AS(generate(tuples), Error);
}

TEST_CASE("sphere coordinate tuples") {
  SUBCASE("independent spec has uniform angles") {
    const Dataset d = generate(spec_for(Scenario::Sim1, 1, 2, 10000));
    REQUIRE(d.raw);
    const Eigen::MatrixXd& raw = d.raw->coordinates();
    std::vector<double> theta(raw.col(1).begin(), raw.col(1).end());
    std::vector<double> phi(raw.col(2).begin(), raw.col(2).end());
    CHECK(ks_uniform(theta, -pi, pi) <= 0.03);
    CHECK(ks_uniform(phi, -pi, pi) <= 0.03);
    CHECK((raw.col(0).array() == 1.0).all());
    CHECK(d.points.coordinates().rowwise().norm().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("second class angles sit in their window before noise") {
    ScenarioSpec s = spec_for(Scenario::Sim2, 1, 2, 400);
    s.noise = false;
    const Dataset d = generate(s);
    const auto codes = d.labels.codes();
    for (Index i = 0; i < s.n; ++i) {
      if (codes[static_cast<std::size_t>(i)] != 1) continue;
      CHECK(d.raw->coordinates()(i, 2) > pi / 5);
      CHECK(d.raw->coordinates()(i, 2) < 4 * pi / 5);
    }
  }
  SUBCASE("five-class windows") {
    ScenarioSpec s = spec_for(Scenario::Sim2, 1, 5, 500);
    s.noise = false;
    const Dataset d = generate(s);
    for (Index i = 0; i < s.n; ++i) {
      const int r = d.labels.codes()[static_cast<std::size_t>(i)];
      const double phi = d.raw->coordinates()(i, 2);
      CHECK(phi > (-1 + 2.0 * r / 5) * pi);
      CHECK(phi < (-1 + 2.0 * (r + 1) / 5) * pi);
    }
  }
  SUBCASE("higher-dimensional tuples") {
    ScenarioSpec s = spec_for(Scenario::Sim3, 1, 2, 50);
    s.dim = 8;
    const Dataset d = generate(s);
    CHECK(d.raw->coordinates().cols() == 8);
    CHECK(d.points.coordinates().cols() == 8);
    CHECK(std::abs(d.points.coordinates().rowwise().norm().maxCoeff() - 1.0) <= 1e-12);
  }
  SUBCASE("seed determinism") {
    const Dataset a = generate(spec_for(Scenario::Sim2, 1, 5, 60));
    const Dataset b = generate(spec_for(Scenario::Sim2, 1, 5, 60));
    CHECK(a.raw->coordinates() == b.raw->coordinates());
  }
}

TEST_CASE("embedding") {
  const std::vector<double> phis{0.0};
  const Eigen::VectorXd a = embed_spherical(0.3, phis), b = embed_spherical(2.0, phis);
  CHECK(a.isApprox(b));
  const std::vector<double> more{0.4, -1.2, 2.5};
  CHECK(embed_spherical(1.1, more).norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("von Mises-Fisher sampler") {
  const int draws = 10000;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  mean(2) = 1.0;
  Philox eng(51);
  Eigen::VectorXd uniform_sum = Eigen::VectorXd::Zero(3), concentrated_sum = Eigen::VectorXd::Zero(3);
  double worst_norm = 0;
  for (int k = 0; k < draws; ++k) {
    const Eigen::VectorXd u = sample_vmf(eng, mean, 0.0);
    const Eigen::VectorXd v = sample_vmf(eng, mean, 1.0);
    worst_norm = std::max({worst_norm, std::abs(u.norm() - 1), std::abs(v.norm() - 1)});
    uniform_sum += u;
    concentrated_sum += v;
  }
  CHECK(worst_norm <= 1e-12);
  CHECK(uniform_sum.norm() / draws <= 0.03);
  const double a3 = 1.0 / std::tanh(1.0) - 1.0;
  CHECK(std::abs(concentrated_sum.norm() / draws - a3) <= 0.02);
  CHECK(concentrated_sum.normalized().dot(mean) > 0.99);

  const Dataset d = generate(spec_for(Scenario::Sim2, 2, 5, 80));
  CHECK(d.points.representation() == Representation::Sphere);
  CHECK(std::abs(d.points.coordinates().rowwise().norm().maxCoeff() - 1.0) <= 1e-12);
}

TEST_CASE("Gaussian rows") {
  ScenarioSpec s = spec_for(Scenario::Sim2, 3, 2, 6000);
  const Dataset d = generate(s);
  const auto& x = d.points.coordinates();
  for (int r = 0; r < 2; ++r) {
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(x.cols());
    for (Index i = 0; i < s.n; ++i)
      if (d.labels.codes()[static_cast<std::size_t>(i)] == r) sum += x.row(i);
    const double nr = static_cast<double>(d.labels.count(r));
    CHECK(((sum / nr).array() - (r == 0 ? 0.0 : 0.6)).abs().maxCoeff() <= 4 / std::sqrt(nr));
  }

  const Dataset null = generate(spec_for(Scenario::Sim1, 3, 5, 300));
  for (int r = 0; r < 5; ++r) {
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(3);
    for (Index i = 0; i < 300; ++i)
      if (null.labels.codes()[static_cast<std::size_t>(i)] == r) sum += null.points.coordinates().row(i);
    const double nr = static_cast<double>(null.labels.count(r));
    CHECK((sum / nr).cwiseAbs().maxCoeff() <= 4 / std::sqrt(nr));
  }
}

TEST_CASE("ellipse landmark shapes") {
  ScenarioSpec s = spec_for(Scenario::Sim4, 0, 2, 20);
  s.corr = 0.0;
  s.noise = false;
  const Dataset circles = generate(s);
  CHECK(circles.points.configurations().cols() == 50);
  CHECK(shape_distances(circles.points).matrix().maxCoeff() == 0.0);

  s.corr = 0.5;
  const Dataset mixed = generate(s);
  const DistanceMatrix d = shape_distances(mixed.points);
  const auto codes = mixed.labels.codes();
  for (Index i = 0; i < s.n; ++i)
    for (Index j = 0; j < s.n; ++j)
      CHECK((d(i, j) > 0.0) == (codes[static_cast<std::size_t>(i)] != codes[static_cast<std::size_t>(j)]));
}

TEST_CASE("coordinate metric choice") {
  const Dataset d = generate(spec_for(Scenario::Sim2, 1, 2, 30));
  CHECK(dataset_metric(d, CoordinateMetric::EuclideanRaw) == Metric::Euclidean);
  CHECK(dataset_metric(d, CoordinateMetric::Geodesic) == Metric::Geodesic);
  CHECK(dataset_distances(d, CoordinateMetric::Geodesic).matrix().maxCoeff() <= pi);
  CHECK(parse_coordinate_metric("geodesic") == CoordinateMetric::Geodesic);
  CHECK(to_string(CoordinateMetric::EuclideanRaw) == "euclidean_raw");
}
