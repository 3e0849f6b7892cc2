#pragma once

#include <cmath>

#include "mdd/random.hpp"

namespace mdd {

template <class Engine>
Eigen::VectorXd sample_vmf(Engine& eng, const Eigen::VectorXd& mean, double kappa) {
  const Index p = mean.size();
  const double dim1 = static_cast<double>(p - 1);

  // Cosine of the angle to the mean direction (Wood 1994).
  const double b = (-2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dim1 * dim1)) / dim1;
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + dim1 * std::log(1.0 - x0 * x0);
  double w = 0.0;
  for (;;) {
    const double z = beta_variate(eng, dim1 / 2.0, dim1 / 2.0);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = uniform_open(eng, 0.0, 1.0);
    if (kappa * w + dim1 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }

  // Uniform direction in the tangent space at the mean.
  Eigen::VectorXd tangent(p);
  double norm = 0.0;
  do {
    for (Index k = 0; k < p; ++k) tangent(k) = standard_normal(eng);
    tangent -= tangent.dot(mean) * mean;
    norm = tangent.norm();
  } while (norm < 1e-12);
  tangent /= norm;

  Eigen::VectorXd x = w * mean + std::sqrt(std::max(0.0, 1.0 - w * w)) * tangent;
  return x / x.norm();
}

}  // namespace mdd
