// Test-only oracles, independent of the library code paths they check.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>

#include "riemacon/geometry.hpp"

namespace oracles {

// Integrates the hyperboloid geodesic ODE x'' = c <x',x'>_M x with RK4 and
// returns the endpoint at unit time for initial velocity v. Independent of
// the closed-form exponential map.
inline Eigen::VectorXd hyperboloid_geodesic_rk4(const Eigen::VectorXd& x0,
                                                const Eigen::VectorXd& v0, double c,
                                                int steps = 20000) {
  const int m = static_cast<int>(x0.size());
  auto mdot = [m](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return -a[0] * b[0] + a.tail(m - 1).dot(b.tail(m - 1));
  };
  Eigen::VectorXd x = x0, v = v0;
  const double h = 1.0 / steps;
  auto acc = [&](const Eigen::VectorXd& xs, const Eigen::VectorXd& vs) {
    return (c * mdot(vs, vs)) * xs;
  };
  for (int i = 0; i < steps; ++i) {
    Eigen::VectorXd k1x = v, k1v = acc(x, v);
    Eigen::VectorXd k2x = v + 0.5 * h * k1v, k2v = acc(x + 0.5 * h * k1x, v + 0.5 * h * k1v);
    Eigen::VectorXd k3x = v + 0.5 * h * k2v, k3v = acc(x + 0.5 * h * k2x, v + 0.5 * h * k2v);
    Eigen::VectorXd k4x = v + h * k3v, k4v = acc(x + h * k3x, v + h * k3v);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return x;
}

// Central finite difference of a scalar function of one real variable.
inline double central_diff(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// Second central difference.
inline double second_diff(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

// Minimizer of 1/2 v'Qv + b'v over the Euclidean ball ||v|| <= r, via the
// dual scalar: v(nu) = -(Q + nu I)^-1 b with nu >= 0 chosen so ||v|| = r
// when the unconstrained solution is infeasible.
inline Eigen::VectorXd ball_quadratic_minimizer(const Eigen::MatrixXd& Q,
                                                const Eigen::VectorXd& b, double r) {
  Eigen::VectorXd v = -Q.ldlt().solve(b);
  if (v.norm() <= r) return v;
  const int n = static_cast<int>(b.size());
  auto norm_at = [&](double nu) {
    Eigen::MatrixXd A = Q + nu * Eigen::MatrixXd::Identity(n, n);
    return A.ldlt().solve(b).norm();
  };
  double lo = 0.0, hi = 1.0;
  while (norm_at(hi) > r) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (norm_at(mid) > r)
      lo = mid;
    else
      hi = mid;
  }
  Eigen::MatrixXd A = Q + hi * Eigen::MatrixXd::Identity(n, n);
  return -A.ldlt().solve(b);
}

// Log-log least-squares slope of y against x (both positive).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles
