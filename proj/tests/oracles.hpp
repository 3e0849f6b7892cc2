#pragma once

// Reference computations that share no code with the library paths they
// check. Kept deliberately literal.

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

namespace oracle {

using Rational = boost::rational<long long>;

/// #{k : d(i,k) <= d(i,j)} by direct counting.
inline long ball_count(const Eigen::MatrixXd& d, long i, long j) {
  long c = 0;
  for (long k = 0; k < d.rows(); ++k) c += d(i, k) <= d(i, j);
  return c;
}

/// Exact MDD in rational arithmetic, straight from the defining sum.
inline Rational mdd_exact(const Eigen::MatrixXd& d, const std::vector<int>& y) {
  const long n = d.rows();
  std::map<int, long> size;
  for (int v : y) ++size[v];
  Rational total = 0;
  for (const auto& [r, nr] : size) {
    const Rational p(nr, n);
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        long in_ball = 0, in_class_ball = 0;
        for (long k = 0; k < n; ++k) {
          if (d(i, k) <= d(i, j)) {
            ++in_ball;
            if (y[static_cast<std::size_t>(k)] == r) ++in_class_ball;
          }
        }
        const Rational diff = Rational(in_class_ball, nr) - Rational(in_ball, n);
        total += p * diff * diff;
      }
    }
  }
  return total / Rational(n * n);
}

inline double mdd_double(const Eigen::MatrixXd& d, const std::vector<int>& y) {
  return boost::rational_cast<double>(mdd_exact(d, y));
}

/// Squared distance covariance written as four nested means.
inline double dcov_four_loop(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const long n = a.rows();
  auto centered = [n](const Eigen::MatrixXd& m, long i, long j) {
    double row = 0, col = 0, all = 0;
    for (long k = 0; k < n; ++k) {
      row += m(i, k);
      col += m(k, j);
      for (long l = 0; l < n; ++l) all += m(k, l);
    }
    return m(i, j) - row / n - col / n + all / double(n * n);
  };
  double s = 0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) s += centered(a, i, j) * centered(b, i, j);
  return s / double(n * n);
}

/// HHG by enumerating the 2x2 table for every ordered pair.
inline double hhg_enumerate(const Eigen::MatrixXd& dx, const Eigen::MatrixXd& dy) {
  const long n = dx.rows();
  double total = 0;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (i == j) continue;
      double t[2][2] = {{0, 0}, {0, 0}};
      for (long k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        t[dx(i, k) <= dx(i, j) ? 0 : 1][dy(i, k) <= dy(i, j) ? 0 : 1] += 1;
      }
      const double m = n - 2;
      const double rows[2] = {t[0][0] + t[0][1], t[1][0] + t[1][1]};
      const double cols[2] = {t[0][0] + t[1][0], t[0][1] + t[1][1]};
      double chi = 0;
      bool empty = false;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double e = rows[a] * cols[b] / m;
          if (e == 0) empty = true;
          else chi += (t[a][b] - e) * (t[a][b] - e) / e;
        }
      if (!empty) total += chi;
    }
  }
  return total;
}

/// Riemannian shape distance by explicit Procrustes rotation search: centre,
/// scale to unit size, then minimise the chord over rotations and convert
/// the chord length c to the angle 2 asin(c / 2).
inline double procrustes_shape_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  auto normalise = [](std::vector<std::complex<double>>& z) {
    std::complex<double> mean = 0;
    for (auto v : z) mean += v;
    mean /= double(z.size());
    double norm = 0;
    for (auto& v : z) {
      v -= mean;
      norm += std::norm(v);
    }
    for (auto& v : z) v /= std::sqrt(norm);
  };
  normalise(a);
  normalise(b);
  auto chord = [&](double phi) {
    const std::complex<double> rot = std::polar(1.0, phi);
    double s = 0;
    for (std::size_t l = 0; l < a.size(); ++l) s += std::norm(a[l] - rot * b[l]);
    return std::sqrt(s);
  };
  constexpr int kGrid = 3600;
  double best_phi = 0, best = chord(0);
  for (int g = 1; g < kGrid; ++g) {
    const double phi = 2 * std::numbers::pi * g / kGrid;
    if (const double c = chord(phi); c < best) best = c, best_phi = phi;
  }
  // Golden-section refinement around the best grid point.
  double lo = best_phi - 2 * std::numbers::pi / kGrid, hi = best_phi + 2 * std::numbers::pi / kGrid;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (chord(m1) < chord(m2)) hi = m2;
    else lo = m1;
  }
  const double c = std::min(best, chord((lo + hi) / 2));
  return 2 * std::asin(std::min(1.0, c / 2));
}

}  // namespace oracle
