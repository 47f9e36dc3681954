// Test-only oracles, independent of the library's computation paths:
// central finite differences, Gauss-Hermite quadrature, composite Simpson,
// and a box-counting discrepancy proxy.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace oracles {

// Central finite-difference gradient.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    g[i] = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

// Gauss-Hermite nodes/weights for integrals of f(x) exp(-x^2): Newton
// iteration on the Hermite recurrence (physicists' convention).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussHermite gauss_hermite(int n) {
  GaussHermite out;
  out.nodes.resize(n);
  out.weights.resize(n);
  const double eps = 1e-14;
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Standard initial guesses for the largest roots, then deflation-style
    // estimates for the rest.
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * out.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * out.nodes[1];
    else
      z = 2.0 * z - out.nodes[i - 2];

    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = std::pow(M_PI, -0.25);
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < eps) break;
    }
    out.nodes[i] = z;
    out.nodes[n - 1 - i] = -z;
    out.weights[i] = 2.0 / (pp * pp);
    out.weights[n - 1 - i] = out.weights[i];
  }
  return out;
}

// E[f(B)] for B ~ Normal(mean, sd^2) by Gauss-Hermite quadrature.
inline double gh_normal_expectation(const std::function<double(double)>& f, double mean,
                                    double sd, int n_nodes = 64) {
  const GaussHermite gh = gauss_hermite(n_nodes);
  double acc = 0.0;
  for (int i = 0; i < n_nodes; ++i)
    acc += gh.weights[i] * f(mean + std::sqrt(2.0) * sd * gh.nodes[i]);
  return acc / std::sqrt(M_PI);
}

// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int n_intervals = 20000) {
  if (n_intervals % 2) ++n_intervals;
  const double h = (hi - lo) / n_intervals;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n_intervals; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Star-discrepancy proxy over anchored boxes [0,a)x[0,b) on a grid: the
// largest absolute gap between empirical and true box mass.
inline double box_count_discrepancy(const Eigen::MatrixXd& points, int grid = 32) {
  const double n = static_cast<double>(points.rows());
  double worst = 0.0;
  for (int i = 1; i <= grid; ++i) {
    for (int j = 1; j <= grid; ++j) {
      const double a = static_cast<double>(i) / grid;
      const double b = static_cast<double>(j) / grid;
      int count = 0;
      for (Eigen::Index r = 0; r < points.rows(); ++r)
        if (points(r, 0) < a && points(r, 1) < b) ++count;
      worst = std::max(worst, std::abs(count / n - a * b));
    }
  }
  return worst;
}

}  // namespace oracles
